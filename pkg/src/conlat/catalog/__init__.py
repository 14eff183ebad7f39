"""Named lattices used as classification targets.

Fixed lattices are read from the cover-list transcriptions in ``figures/``.
The four parametric families are generated tier by tier; at small indices
they are checked against hand transcriptions in the test suite.

Indexing follows the theorem statements: ``build("K", 2)`` is K_2, whose
drawing has one full tier below the top tier, and ``build("M", 1)`` is M_1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..lattice import FiniteLattice, NotALattice, find_embedding

FIXED = ("N5", "D1", "D2", "M1", "K", "L14", "D13")
PARAMETRIC = ("M", "K", "S", "S_star")

_FIGURE_FILE = {"N5": "N5", "D1": "D1", "D2": "D2", "M1": "M1", "K": "K", "L14": "L14", "D13": "D13"}


class UnknownEntry(KeyError):
    pass


class FigureFormatError(ValueError):
    pass


@dataclass
class CatalogEntry:
    name: str
    param: int | None
    lattice: FiniteLattice
    landmark_labels: dict[str, int]
    notes: str = ""
    # covers as drawn (before closure), kept for audits
    drawn_covers: list[tuple[str, str]] = field(default_factory=list, repr=False)

    @property
    def title(self) -> str:
        return self.name if self.param is None else f"{self.name}_{self.param}"

    def __len__(self) -> int:
        return len(self.lattice)


# -- figure files -----------------------------------------------------------
def parse_figure(text: str) -> tuple[list[str], list[tuple[str, str]]]:
    """Parse the cover-list format described in ``figures/README.txt``."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((no, line))
    if len(lines) < 2:
        raise FigureFormatError("need a node count and a label line")
    no, first = lines[0]
    try:
        count = int(first)
    except ValueError:
        raise FigureFormatError(f"line {no}: node count expected, got {first!r}") from None
    no, second = lines[1]
    labels = [s.strip() for s in second.split("|")]
    if len(labels) != count:
        raise FigureFormatError(f"line {no}: {len(labels)} labels for {count} nodes")
    if len(set(labels)) != count:
        raise FigureFormatError(f"line {no}: duplicate labels")
    known = set(labels)
    covers = []
    for no, line in lines[2:]:
        lo, sep, hi = line.partition(" < ")
        if not sep:
            raise FigureFormatError(f"line {no}: expected 'a < b', got {line!r}")
        lo, hi = lo.strip(), hi.strip()
        for lab in (lo, hi):
            if lab not in known:
                raise FigureFormatError(f"line {no}: unknown label {lab!r}")
        covers.append((lo, hi))
    return labels, covers


def format_figure(labels, covers, comment: str | None = None) -> str:
    out = [f"# {comment}"] if comment else []
    out.append(str(len(labels)))
    out.append(" | ".join(labels))
    out.extend(f"{a} < {b}" for a, b in covers)
    return "\n".join(out) + "\n"


def read_figure(stem: str) -> tuple[list[str], list[tuple[str, str]]]:
    text = resources.files(__package__).joinpath("figures", f"{stem}.txt").read_text("utf-8")
    return parse_figure(text)


def figure_stems() -> list[str]:
    root = resources.files(__package__).joinpath("figures")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".txt") and p.name != "README.txt")


def lattice_from_drawing(labels, covers) -> FiniteLattice:
    idx = {lab: i for i, lab in enumerate(labels)}
    return FiniteLattice.from_covers(labels, [(idx[a], idx[b]) for a, b in covers], names=labels)


# -- parametric families ----------------------------------------------------
def _g(j: int, k: int, letter: str = "gamma") -> str:
    return f"{letter}^{j}_{k}"


def _tiered(levels: int, letter: str, full_top: bool):
    """Centre column shared by all four families.

    Side chains ``letter^0_k < ... < letter^t_k < top_k`` with
    ``t = levels - 1``; a diamond plus theta_j between consecutive centre
    meets; and, if ``full_top``, one more diamond between the last chain
    level and the top sides.  Returns (labels, covers, top-side names,
    top-centre name).
    """
    top_letter = "alpha" if letter == "gamma" else "gamma"
    t = levels - 1
    side = lambda j, k: top_letter + f"_{k}" if j == levels else _g(j, k, letter)
    centre = lambda j: f"{side(j, 0)} & {side(j, 1)}"
    labels, covers = [], []
    for k in (0, 1):
        for j in range(levels + 1):
            labels.append(side(j, k))
            if j:
                covers.append((side(j - 1, k), side(j, k)))
    for j in range(levels + 1):
        labels.append(centre(j))
    last = levels if full_top else t
    for j in range(levels):
        if j < last:
            lj, rj = f"{side(j, 0)} & {side(j + 1, 1)}", f"{side(j + 1, 0)} & {side(j, 1)}"
            th = f"theta_{j}"
            labels += [lj, rj, th]
            covers += [
                (centre(j), lj), (lj, side(j, 0)),
                (centre(j), rj), (rj, side(j, 1)),
                (lj, th), (rj, th), (th, centre(j + 1)),
            ]
        else:
            covers += [(centre(j), side(j, 0)), (centre(j), side(j, 1)), (centre(j), centre(j + 1))]
    covers += [(centre(levels), side(levels, 0)), (centre(levels), side(levels, 1))]
    return labels, covers, (side(levels, 0), side(levels, 1)), centre(levels), (side(0, 0), side(0, 1)), centre(0)


def _mk_drawing(i: int, with_top_tier: bool):
    labels, covers, tops, _, bottoms, c0 = _tiered(i, "gamma", with_top_tier)
    labels = ["0", "eta_0", "eta_1"] + labels + ["beta_0", "1"]
    covers += [("0", "eta_0"), ("0", "eta_1"), ("0", c0)]
    for k in (0, 1):
        covers += [(f"eta_{k}", bottoms[k]), (f"eta_{k}", "beta_0"), (tops[k], "1")]
    covers.append(("beta_0", "1"))
    return labels, covers


def _s_drawing(i: int, star: bool):
    labels, covers, tops, _, bottoms, c0 = _tiered(i, "delta", star)
    labels = ["0", "eta_0", "eta_1", "mu_0"] + labels + ["beta_0", "alpha_0", "1"]
    covers += [("0", "eta_0"), ("0", "eta_1"), ("0", c0)]
    for k in (0, 1):
        covers += [(f"eta_{k}", bottoms[k]), (f"eta_{k}", "mu_0"), (bottoms[k], "beta_0"), (tops[k], "1")]
    covers += [("mu_0", "beta_0"), ("mu_0", "alpha_0"), ("beta_0", "1"), ("alpha_0", "1")]
    return labels, covers


def parametric_drawing(name: str, i: int):
    """(labels, covers) of the parametric family member as drawn."""
    if name == "M":
        return _mk_drawing(i, False)
    if name == "K":
        return _mk_drawing(i, True)
    if name == "S":
        return _s_drawing(i, False)
    if name == "S_star":
        return _s_drawing(i, True)
    raise UnknownEntry(name)


def dedekind_macneille(labels, covers) -> FiniteLattice:
    """Smallest lattice containing the drawn poset (cuts ordered by inclusion).

    Drawn elements keep their labels; added cuts are named ``cut{...}``
    after the drawn elements below them.
    """
    n = len(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        leq[idx[a], idx[b]] = True
    from ..lattice import _transitive_closure

    leq = _transitive_closure(leq)

    def upper(s):
        return frozenset(j for j in range(n) if all(leq[x, j] for x in s))

    def lower(s):
        return frozenset(j for j in range(n) if all(leq[j, x] for x in s))

    cuts = {lower(upper(frozenset([x]))): x for x in range(n)}
    seen = set(cuts)
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(seen):
                c = a & b
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    # meet-closure of principal ideals gives every cut; include the empty one
    # only if it is a cut (it is not when the poset has a bottom)
    ordered = sorted(seen, key=lambda s: (len(s), sorted(s)))
    names = []
    for s in ordered:
        if s in cuts:
            names.append(labels[cuts[s]])
        else:
            maxima = [labels[x] for x in sorted(s) if not any(leq[x, y] and x != y for y in s)]
            names.append("cut{" + ", ".join(maxima) + "}")
    order = np.array([[a <= b for b in ordered] for a in ordered], dtype=bool)
    return FiniteLattice.from_order(names, order, names=names)


# -- landmarks --------------------------------------------------------------
# joins that hold in the realised lattices but are not visible in the labels
_NAMED_JOINS = {
    "M1": [("beta_0", "eta_0", "eta_1")],
    "K": [("beta_0", "eta_0", "eta_1")],
    "M": [("beta_0", "eta_0", "eta_1")],
    "L14": [("gamma_0", "eta_0", "eta_1")],
}


def landmark_problems(entry: CatalogEntry) -> list[str]:
    """Check the landmark labels against the meet and join tables.

    A label ``x & y`` must be the meet of the nodes labelled ``x`` and
    ``y`` whenever both are drawn; ``theta*`` must be the join of the two
    diamond nodes drawn directly below it.
    """
    l, marks = entry.lattice, entry.landmark_labels
    out = []
    for lab, x in marks.items():
        if " & " in lab:
            a, b = lab.split(" & ", 1)
            if a in marks and b in marks:
                got = int(l.meet[marks[a], marks[b]])
                if got != x:
                    out.append(f"{entry.title}: {a} ^ {b} is {l.names[got]}, not {lab}")
        if lab.startswith("theta"):
            below = [marks[lo] for lo, hi in entry.drawn_covers if hi == lab]
            if len(below) != 2 or int(l.join[below[0], below[1]]) != x:
                out.append(f"{entry.title}: {lab} is not the join of its diamond")
    key = "M" if entry.name == "K" and entry.param is not None else entry.name
    for target, a, b in _NAMED_JOINS.get(key, []):
        if int(l.join[marks[a], marks[b]]) != marks[target]:
            out.append(f"{entry.title}: {a} v {b} != {target}")
    return out


# -- public API -------------------------------------------------------------
_NOTES = {
    ("L14", False): "named L_14 but drawn with 9 vertices; built from the drawing",
    ("M", True): "M_i: i-1 tiers, then the centre meet sits directly below alpha_0 & alpha_1",
    ("K", True): "K_i: i tiers, the last one capped by alpha_0 & alpha_1",
    ("S", True): "S_i: as drawn, completed to a lattice when the drawing is not one",
    ("S_star", True): "S*_i: as drawn, completed to a lattice when the drawing is not one",
}

_CACHE: dict[tuple[str, int | None, bool], CatalogEntry] = {}


def build(name: str, param: int | None = None, *, complete: bool = True) -> CatalogEntry:
    """Catalog lattice by name.

    For ``S`` and ``S_star`` the drawing at index >= 2 (and every ``S_star``)
    is not a lattice; with ``complete`` the Dedekind-MacNeille completion is
    returned, otherwise :class:`NotALattice` is raised.
    """
    key = (name, param, complete)
    if key in _CACHE:
        return _CACHE[key]
    if name in PARAMETRIC and param is not None:
        if not isinstance(param, int) or param < 1:
            raise ValueError(f"{name}: index must be an integer >= 1, got {param!r}")
        labels, covers = parametric_drawing(name, param)
    elif name in _FIGURE_FILE and param is None:
        labels, covers = read_figure(_FIGURE_FILE[name])
    elif name in PARAMETRIC:
        raise ValueError(f"{name} needs an index")
    elif name in FIXED:
        raise ValueError(f"{name} takes no index")
    else:
        raise UnknownEntry(f"unknown catalog entry {name!r}")
    notes = _NOTES.get((name, param is not None), "")
    try:
        lat = lattice_from_drawing(labels, covers)
    except NotALattice as exc:
        if not complete:
            raise
        lat = dedekind_macneille(labels, covers)
        notes = f"{notes}; drawing is not a lattice ({exc}); completed"
    marks = {lab: lat.names.index(lab) for lab in labels}
    entry = CatalogEntry(name, param, lat, marks, notes, list(covers))
    _CACHE[key] = entry
    return entry


def list_entries(max_param: int = 1) -> list[CatalogEntry]:
    if max_param < 1:
        raise ValueError("max_param must be >= 1")
    out = [build(n) for n in FIXED]
    for name in PARAMETRIC:
        out += [build(name, i) for i in range(1, max_param + 1)]
    return out


def resolve(spec: str) -> CatalogEntry:
    """``"N5"``, ``"K2"``, ``"K_2"``, ``"S_star1"`` or ``"M(3)"``."""
    s = spec.strip()
    if s in FIXED:
        return build(s)
    m = re.fullmatch(r"(S_star|M|K|S)[_(]?(\d+)\)?", s)
    if m:
        return build(m.group(1), int(m.group(2)))
    raise UnknownEntry(f"unknown catalog entry {spec!r}")


def identify(lattice: FiniteLattice, families=PARAMETRIC, max_param: int | None = None):
    """(name, param, isomorphism) of the first matching catalog entry, or None.

    Sizes grow strictly with the index, so only the index with matching size
    is tried in each family.
    """
    from ..lattice import are_isomorphic

    n = len(lattice)
    cands = []
    for name in FIXED:
        if name not in families:
            cands.append((name, None))
    for name in families:
        if name in PARAMETRIC:
            i = _index_for_size(name, n)
            if i is not None and (max_param is None or i <= max_param):
                cands.append((name, i))
    for name, i in cands:
        e = build(name, i)
        if len(e) != n:
            continue
        iso = are_isomorphic(lattice, e.lattice)
        if iso is not None:
            return name, i, iso
    return None


def _index_for_size(name: str, n: int) -> int | None:
    for i in range(1, n + 1):
        size = len(build(name, i))
        if size == n:
            return i
        if size > n:
            return None
    return None


def contains(pattern: CatalogEntry, host: CatalogEntry):
    return find_embedding(pattern.lattice, host.lattice)
