"""Command line front end: ``conlat <command> ...``.

Exit status 0 on success, 1 when a computed result contradicts the
expected classification, 2 on bad input.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import catalog
from .algebra import BudgetExceeded
from .engine import (
    Classification,
    Family,
    PreconditionError,
    TheoremViolation,
    classify_d2,
    classify_n5,
    generate_d1_square,
    search_n5_all,
    verify_lemma_suite,
)
from .io import AlgebraDocument, AlgebraFormatError, parse_algebra
from .lattice import (
    DEFAULT_ELEMENT_BUDGET,
    ClosureBudgetExceeded,
    FiniteLattice,
    find_embedding,
    is_distributive,
    is_join_semidistributive,
    is_meet_semidistributive,
    is_modular,
    is_projective_finite,
    lattice_from_partitions,
    satisfies_whitman,
    to_dot,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2

BUNDLED = {
    "M_2": ("example_m2.alg", Family.M, 2),
    "K_2": ("example_k2.alg", Family.K, 2),
}


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    digest: str = ""
    lines: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    dot_files: list[str] = field(default_factory=list)
    status: int = EXIT_OK

    def add(self, *lines: str):
        self.lines.extend(lines)

    def render(self, show_timings: bool = False) -> str:
        out = [f"command: {self.command}"]
        if self.digest:
            out.append(f"input: sha256:{self.digest}")
        out += self.lines
        for path in self.dot_files:
            out.append(f"wrote {path}")
        if show_timings:
            for k, v in self.timings.items():
                out.append(f"time {k}: {v:.3f}s")
        return "\n".join(out) + "\n"


# -- helpers -----------------------------------------------------------------
def _load(path: str) -> tuple[AlgebraDocument, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
    try:
        return parse_algebra(text), digest
    except AlgebraFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _bundled_text(name: str) -> str:
    return resources.files("conlat").joinpath("data", name).read_text("utf-8")


def _pick(doc: AlgebraDocument, mapping: dict[str, str | None], optional=()) -> dict:
    out = {}
    for role, name in mapping.items():
        if name is None:
            if role in optional and role in doc.named_partitions:
                name = role
            elif role in optional:
                continue
            else:
                raise InputError(f"no partition given for {role}")
        try:
            out[role] = doc.partition(name)
        except KeyError as exc:
            raise InputError(f"label {role}: {exc.args[0]}") from None
    return out


def _write_dot(report: Report, outdir: str | None, stem: str, lat: FiniteLattice, labels=None):
    if not outdir:
        return
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"{stem}.dot")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_dot(lat, labels, name=stem.replace("-", "_")))
    report.dot_files.append(path)


def _chain_lines(doc: AlgebraDocument, c: Classification, letter: str, top: str) -> list[str]:
    ch = c.chain
    out = ["chain:"]
    for i, p in enumerate(ch.chain):
        out.append(f"  {letter}^{i} = {doc.format_partition(p) if c.quotient_by is None else str(p)}")
    if ch.exhausted:
        out.append(f"  no fixpoint within {len(ch.chain) - 1} steps")
    else:
        where = f"= {top}" if ch.reached_top_of_interval else f"< {top}"
        out.append(f"  stabilizes at {letter}^{ch.stabilized_at} {where}")
    return out


def _classification_lines(doc, c: Classification, letter: str, top: str) -> list[str]:
    out = [f"result: {c.name}"]
    if c.quotient_by is not None:
        out.append(f"computed in the quotient by {doc.format_partition(c.quotient_by)}")
    out.append(f"subpower: {c.context.size} pairs")
    out.append(f"generated lattice: {len(c.generated)} elements")
    out += _chain_lines(doc, c, letter, top)
    if c.witness is not None:
        entry = c.catalog_entry
        out.append(f"isomorphism onto catalog {entry.title}: verified")
        names = c.landmark_names()
        for x in range(len(c.generated)):
            out.append(f"  {c.generated.names[x]} -> {names[x]}")
    return out


def _dot_pair(report, args, stem, c: Classification):
    _write_dot(report, args.dot, f"{stem}-generated", c.generated, c.landmark_names())
    entry = c.catalog_entry
    if entry is not None:
        _write_dot(report, args.dot, f"{stem}-catalog-{entry.title}", entry.lattice)


# -- commands ------------------------------------------------------------------
def cmd_classify_n5(args) -> Report:
    doc, digest = _load(args.file)
    rep = Report(f"classify-n5 {args.file}", digest)
    labels = _pick(doc, {"gamma": args.gamma, "alpha": args.alpha, "beta": args.beta,
                         "zero": args.zero, "one": args.one}, optional=("zero", "one"))
    alg = doc.algebra()
    t = time.perf_counter()
    try:
        c = classify_n5(alg, labels, relaxed=args.relaxed_bounds, element_budget=args.budget)
    except TheoremViolation as exc:
        rep.add(f"mismatch: {exc}")
        rep.status = EXIT_MISMATCH
        return rep
    rep.timings["classify"] = time.perf_counter() - t
    rep.add(*_classification_lines(doc, c, "gamma", "alpha"))
    if c.family is Family.K_INF_UNREACHED:
        rep.add("mismatch: the chain did not stabilize within the step budget")
        rep.status = EXIT_MISMATCH
    _dot_pair(rep, args, "n5", c)
    if args.all:
        t = time.perf_counter()
        fam = list(lattice_from_partitions(dict(labels), args.budget).labels)
        survey = search_n5_all(alg, fam, threads=args.threads)
        rep.timings["search"] = time.perf_counter() - t
        rep.add(f"pentagons in the generated sublattice: {len(survey.pentagons)}")
        for (g, a, b), cl in zip(survey.pentagons, survey.classifications):
            rep.add(f"  gamma={doc.format_partition(g)} alpha={doc.format_partition(a)} "
                    f"beta={doc.format_partition(b)}: {cl.name}")
        rep.add(f"some pentagon gives M_1 or K_1: {'yes' if survey.has_m1_or_k else 'no'}")
    if args.lemmas:
        rep.add(*_lemma_lines(alg, labels))
    return rep


def cmd_check_d1(args) -> Report:
    doc, digest = _load(args.file)
    rep = Report(f"check-d1 {args.file}", digest)
    labels = _pick(doc, {"alpha": args.alpha, "gamma": args.gamma, "beta": args.beta,
                         "mu": args.mu, "delta": args.delta}, optional=("mu", "delta"))
    t = time.perf_counter()
    try:
        res = generate_d1_square(doc.algebra(), labels, relaxed=args.relaxed_bounds, element_budget=args.budget)
    except TheoremViolation as exc:
        rep.add(f"mismatch: {exc}")
        if exc.lattice is not None:
            lat = exc.lattice
            rep.add(f"generated lattice: {len(lat)} elements", "covers:")
            rep.add(*(f"  {lat.names[a]} < {lat.names[b]}" for a, b in lat.covers()))
            _write_dot(rep, args.dot, "d1-generated", lat)
        rep.status = EXIT_MISMATCH
        return rep
    rep.timings["square"] = time.perf_counter() - t
    rep.add(f"result: D13 ({len(res.lattice)} elements), embedding verified")
    _write_dot(rep, args.dot, "d1-generated", res.lattice)
    _write_dot(rep, args.dot, "d1-catalog-D13", catalog.build("D13").lattice)
    return rep


def cmd_classify_d2(args) -> Report:
    doc, digest = _load(args.file)
    rep = Report(f"classify-d2 {args.file}", digest)
    labels = _pick(doc, {"alpha": args.alpha, "gamma": args.gamma, "beta": args.beta,
                         "mu": args.mu, "delta": args.delta}, optional=("mu", "delta"))
    t = time.perf_counter()
    try:
        c = classify_d2(doc.algebra(), labels, relaxed=args.relaxed_bounds, element_budget=args.budget)
    except TheoremViolation as exc:
        rep.add(f"mismatch: {exc}")
        rep.status = EXIT_MISMATCH
        return rep
    rep.timings["classify"] = time.perf_counter() - t
    rep.add(*_classification_lines(doc, c, "delta", "gamma"))
    if c.family is Family.S_INF_UNREACHED:
        rep.add("mismatch: the chain did not stabilize within the step budget")
        rep.status = EXIT_MISMATCH
    _dot_pair(rep, args, "d2", c)
    return rep


def _resolve_lattice(spec: str, budget: int) -> tuple[str, FiniteLattice]:
    if spec.startswith("catalog:"):
        try:
            e = catalog.resolve(spec[len("catalog:"):])
        except (catalog.UnknownEntry, ValueError) as exc:
            raise InputError(str(exc.args[0])) from None
        return e.title, e.lattice
    if spec.startswith("chain:"):
        try:
            n = int(spec[len("chain:"):])
        except ValueError:
            raise InputError(f"bad chain length in {spec!r}") from None
        if n < 1:
            raise InputError("chain length must be positive")
        return f"{n}-element chain", FiniteLattice.chain(n)
    p = Path(spec)
    if not p.exists():
        raise InputError(f"{spec}: not a file, catalog:NAME or chain:N")
    text = p.read_text(encoding="utf-8")
    if text.lstrip().startswith("%conlat-algebra"):
        doc, _ = _load(spec)
        if not doc.named_partitions:
            raise InputError(f"{spec}: no named partitions")
        return spec, lattice_from_partitions(doc.partitions(), budget)
    try:
        labels, covers = catalog.parse_figure(text)
        return spec, catalog.lattice_from_drawing(labels, covers)
    except (catalog.FigureFormatError, ValueError) as exc:
        raise InputError(f"{spec}: {exc}") from None


def cmd_lattice_audit(args) -> Report:
    rep = Report(f"lattice-audit {args.target}")
    title, lat = _resolve_lattice(args.target, args.budget)
    yn = lambda b: "yes" if b else "no"
    rep.add(
        f"lattice: {title} ({len(lat)} elements, {len(lat.covers())} covers)",
        f"modular: {yn(is_modular(lat))}",
        f"distributive: {yn(is_distributive(lat))}",
        f"meet-semidistributive: {yn(is_meet_semidistributive(lat))}",
        f"join-semidistributive: {yn(is_join_semidistributive(lat))}",
        f"whitman (W): {yn(satisfies_whitman(lat))}",
        f"projective (SD and W): {yn(is_projective_finite(lat))}",
    )
    for name in ("N5", "D1", "D2"):
        emb = find_embedding(catalog.build(name).lattice, lat)
        pat = catalog.build(name).lattice
        if emb is None:
            rep.add(f"contains {name}: no")
        else:
            img = ", ".join(f"{pat.names[i]}={lat.names[emb[i]]}" for i in range(len(pat)))
            rep.add(f"contains {name}: yes ({img})")
    _write_dot(rep, args.dot, "audit", lat)
    return rep


def cmd_catalog(args) -> Report:
    rep = Report("catalog" + (f" {args.name}" if args.name else ""))
    if args.name:
        try:
            entries = [catalog.resolve(args.name)]
        except (catalog.UnknownEntry, ValueError) as exc:
            raise InputError(str(exc.args[0])) from None
    else:
        entries = catalog.list_entries(args.max_param)
    for e in entries:
        probs = catalog.landmark_problems(e)
        status = "landmarks ok" if not probs else f"{len(probs)} landmark problem(s)"
        rep.add(f"{e.title}: {len(e)} elements, {len(e.lattice.covers())} covers, {status}")
        if e.notes:
            rep.add(f"  note: {e.notes}")
        for p in probs:
            rep.add(f"  problem: {p}")
        if args.name:
            rep.add(*(f"  {e.lattice.names[a]} < {e.lattice.names[b]}" for a, b in e.lattice.covers()))
        _write_dot(rep, args.dot, f"catalog-{e.title}", e.lattice)
    return rep


def _lemma_lines(alg, labels, title="lemma suite") -> list[str]:
    out = [f"{title}:"]
    for lemma, checks in verify_lemma_suite(alg, labels).items():
        counts = {s: sum(1 for c in checks if c.status == s) for s in ("pass", "fail", "skipped")}
        out.append(f"  {lemma}: {counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped")
        for c in checks:
            if c.status == "fail":
                out.append(f"    FAIL {c.name} {c.detail}")
    return out


def cmd_examples(args) -> Report:
    rep = Report("examples")
    rep.add(f"{'example':<16}{'expected':<10}{'computed':<10}match")
    lemma_lines = []
    for expected, (fname, fam, idx) in BUNDLED.items():
        doc = parse_algebra(_bundled_text(fname))
        labels = {"gamma": doc.partition("gamma0"), "alpha": doc.partition("alpha"), "beta": doc.partition("beta")}
        t = time.perf_counter()
        try:
            c = classify_n5(doc.algebra(), labels, element_budget=args.budget)
            got = c.name
        except TheoremViolation as exc:
            c, got = None, f"error: {exc}"
        rep.timings[fname] = time.perf_counter() - t
        ok = c is not None and c.family is fam and c.index == idx
        if not ok:
            rep.status = EXIT_MISMATCH
        rep.add(f"{fname:<16}{expected:<10}{got:<10}{'yes' if ok else 'NO'}")
        if c is not None:
            _dot_pair(rep, args, fname[:-4], c)
        if args.lemmas:
            lemma_lines += _lemma_lines(doc.algebra(), labels, f"lemma suite on {fname}")
    rep.add(*lemma_lines)
    return rep


# -- argument parsing --------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dot", metavar="DIR", help="write Graphviz files into DIR")
    common.add_argument("--budget", type=int, default=DEFAULT_ELEMENT_BUDGET,
                        help="element budget for generated lattices (default %(default)s)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for searches")
    common.add_argument("--relaxed-bounds", action="store_true",
                        help="accept patterns whose bottom is not 0_A (work in the quotient)")
    common.add_argument("--timings", action="store_true", help="print wall-clock timings")

    p = argparse.ArgumentParser(prog="conlat", description="Congruence lattice workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    n5 = sub.add_parser("classify-n5", parents=[common], help="classify a labelled pentagon")
    n5.add_argument("file")
    for role, default in (("gamma", "gamma"), ("alpha", "alpha"), ("beta", "beta")):
        n5.add_argument(f"--{role}", default=default, metavar="NAME")
    n5.add_argument("--zero", metavar="NAME")
    n5.add_argument("--one", metavar="NAME")
    n5.add_argument("--all", action="store_true",
                    help="also classify every pentagon in the sublattice generated by the file's partitions")
    n5.add_argument("--lemmas", action="store_true", help="append the lemma suite")
    n5.set_defaults(run=cmd_classify_n5)

    for name, fn, hlp in (("check-d1", cmd_check_d1, "square a labelled D1"),
                          ("classify-d2", cmd_classify_d2, "classify a labelled D2")):
        q = sub.add_parser(name, parents=[common], help=hlp)
        q.add_argument("file")
        for role in ("alpha", "gamma", "beta"):
            q.add_argument(f"--{role}", default=role, metavar="NAME")
        q.add_argument("--mu", metavar="NAME")
        q.add_argument("--delta", metavar="NAME")
        q.set_defaults(run=fn)

    au = sub.add_parser("lattice-audit", parents=[common], help="structural predicates of a lattice")
    au.add_argument("target", help="catalog:NAME, chain:N, an algebra file or a cover-list file")
    au.set_defaults(run=cmd_lattice_audit)

    ca = sub.add_parser("catalog", parents=[common], help="list or show catalog lattices")
    ca.add_argument("name", nargs="?")
    ca.add_argument("--max-param", type=int, default=3)
    ca.set_defaults(run=cmd_catalog)

    ex = sub.add_parser("examples", parents=[common], help="run the bundled worked examples")
    ex.add_argument("--lemmas", action="store_true")
    ex.set_defaults(run=cmd_examples)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        rep = args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, ClosureBudgetExceeded) as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(rep.render(args.timings))
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
