import pytest

from conlat import catalog
from conlat.catalog import FigureFormatError, UnknownEntry
from conlat.lattice import NotALattice, are_isomorphic, find_embedding


def drawn(stem):
    return catalog.lattice_from_drawing(*catalog.read_figure(stem))


@pytest.mark.parametrize("name,size,ncov", [
    ("N5", 5, 5), ("D1", 7, 9), ("D2", 7, 9), ("M1", 11, 17), ("K", 14, 21), ("L14", 9, 13), ("D13", 13, 22),
])
def test_fixed_entries(name, size, ncov):
    e = catalog.build(name)
    assert len(e) == size and len(e.lattice.covers()) == ncov
    assert e.lattice.check_axioms() == []


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_family_sizes(i):
    assert len(catalog.build("M", i)) == 6 * (i - 1) + 11
    assert len(catalog.build("K", i)) == 6 * (i - 1) + 14


@pytest.mark.parametrize("stem,name,i", [
    ("M1", "M", 1), ("K", "K", 1), ("M2", "M", 2), ("K2", "K", 2), ("S1", "S", 1),
])
def test_generator_matches_hand_transcription(stem, name, i):
    assert are_isomorphic(drawn(stem), catalog.build(name, i).lattice) is not None


def test_s_star_transcription_needs_completion():
    labels, covers = catalog.read_figure("S_star1")
    with pytest.raises(NotALattice):
        catalog.lattice_from_drawing(labels, covers)
    done = catalog.dedekind_macneille(labels, covers)
    assert are_isomorphic(done, catalog.build("S_star", 1).lattice) is not None


def test_strict_build_of_non_lattice_drawings():
    assert len(catalog.build("S", 1, complete=False)) == 13
    for name, i in (("S", 2), ("S_star", 1), ("S_star", 3)):
        with pytest.raises(NotALattice):
            catalog.build(name, i, complete=False)


def test_completion_keeps_drawn_order():
    labels, covers = catalog.parametric_drawing("S", 2)
    e = catalog.build("S", 2)
    l, m = e.lattice, e.landmark_labels
    for lo, hi in covers:
        assert l.leq[m[lo], m[hi]]
    assert set(labels) <= set(l.names)
    assert any(n.startswith("cut{") for n in l.names)


def test_landmarks_hold_for_m_and_k():
    for name in ("M", "K"):
        for i in (1, 2, 3):
            assert catalog.landmark_problems(catalog.build(name, i)) == []
    for name in catalog.FIXED:
        assert catalog.landmark_problems(catalog.build(name)) == []


def test_resolve_spellings():
    assert catalog.resolve("K2").title == "K_2"
    assert catalog.resolve("K_2") is catalog.resolve("K(2)")
    assert catalog.resolve("S_star1").title == "S_star_1"
    assert catalog.resolve(" N5 ").name == "N5"
    with pytest.raises(UnknownEntry):
        catalog.resolve("Q7")
    with pytest.raises(UnknownEntry):
        catalog.build("nope")
    with pytest.raises(ValueError):
        catalog.build("M")
    with pytest.raises(ValueError):
        catalog.build("M", 0)
    with pytest.raises(ValueError):
        catalog.build("N5", 1)


def test_identify_round_trip():
    for name in ("M", "K"):
        for i in (1, 2, 3):
            got = catalog.identify(catalog.build(name, i).lattice)
            # fixed figures are tried first, so M_1 is reported as the figure M1
            want = ("M1", None) if (name, i) == ("M", 1) else (name, i)
            assert got[:2] == want
            assert got[2].verify(catalog.build(name, i).lattice, catalog.build(*want).lattice)
    assert catalog.identify(catalog.build("D13").lattice)[0] == "D13"


def test_small_patterns_embed():
    n5 = catalog.build("N5")
    assert catalog.contains(n5, catalog.build("D13")) is not None
    assert catalog.contains(catalog.build("D2"), catalog.build("N5")) is None


def test_figure_parser_errors():
    with pytest.raises(FigureFormatError):
        catalog.parse_figure("x\na | b\n")
    with pytest.raises(FigureFormatError):
        catalog.parse_figure("2\na | b | c\n")
    with pytest.raises(FigureFormatError):
        catalog.parse_figure("2\na | a\n")
    with pytest.raises(FigureFormatError):
        catalog.parse_figure("2\na | b\na - b\n")
    with pytest.raises(FigureFormatError):
        catalog.parse_figure("2\na | b\na < c\n")
    with pytest.raises(FigureFormatError):
        catalog.parse_figure("# nothing\n")


def test_figure_round_trip():
    for stem in catalog.figure_stems():
        labels, covers = catalog.read_figure(stem)
        assert catalog.parse_figure(catalog.format_figure(labels, covers, "copy")) == (labels, covers)


def test_list_entries():
    titles = [e.title for e in catalog.list_entries(2)]
    assert titles[:7] == list(catalog.FIXED)
    assert "S_star_2" in titles and "M_3" not in titles
    with pytest.raises(ValueError):
        catalog.list_entries(0)
