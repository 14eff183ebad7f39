"""Algebra documents: a small line-oriented text format.

::

    %conlat-algebra 1
    # comments run to end of line
    universe = 4
    names = ["a", "b", "c", "d"]          # optional element names
    op f/1 = [1, 0, 2, 3]                 # row-major table, n**arity entries
    beta = [[0, 2], [1, 3]]               # a named partition as blocks

Blocks list every element exactly once; with ``names`` present, block
entries may be element names instead of indices.  Values use JSON syntax.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .algebra import FiniteAlgebra
from .partition import Partition

HEADER = "%conlat-algebra 1"
_IDENT = r"[A-Za-z_][A-Za-z0-9_^']*"


class AlgebraFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class FormatSyntaxError(AlgebraFormatError):
    pass


class BlockOverlapError(AlgebraFormatError):
    pass


class BlockGapError(AlgebraFormatError):
    pass


class ArityError(AlgebraFormatError):
    pass


@dataclass
class AlgebraDocument:
    universe_size: int
    operations: list[tuple[str, int, list[int]]] = field(default_factory=list)
    named_partitions: dict[str, list[list[int]]] = field(default_factory=dict)
    element_names: list[str] | None = None

    def algebra(self) -> FiniteAlgebra:
        return FiniteAlgebra(self.universe_size, self.operations)

    def partition(self, name: str) -> Partition:
        try:
            blocks = self.named_partitions[name]
        except KeyError:
            known = ", ".join(self.named_partitions) or "none"
            raise KeyError(f"no partition named {name!r} (known: {known})") from None
        return Partition.from_blocks(self.universe_size, blocks)

    def partitions(self) -> dict[str, Partition]:
        return {k: self.partition(k) for k in self.named_partitions}

    def element(self, x: int) -> str:
        return self.element_names[x] if self.element_names else str(x)

    def format_partition(self, p: Partition) -> str:
        return "|" + "|".join(",".join(self.element(x) for x in b) for b in p.blocks()) + "|"


def _value(text: str, line: int, name: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatSyntaxError(f"bad value: {exc.msg}", line, name) from None


def parse_algebra(text: str) -> AlgebraDocument:
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, s) for no, s in lines if s]
    if not lines or lines[0][1] != HEADER:
        got = lines[0][1] if lines else "empty document"
        raise FormatSyntaxError(f"expected header {HEADER!r}, got {got!r}", lines[0][0] if lines else 1)
    size = None
    names = None
    ops: list[tuple[str, int, list[int]]] = []
    raw_parts: list[tuple[int, str, object]] = []
    seen: set[str] = set()
    for no, s in lines[1:]:
        m = re.fullmatch(rf"op\s+({_IDENT})\s*/\s*(\d+)\s*=\s*(.+)", s)
        if m:
            name, arity, val = m.group(1), int(m.group(2)), _value(m.group(3), no, m.group(1))
            if name in seen:
                raise FormatSyntaxError("duplicate name", no, name)
            seen.add(name)
            ops.append((no, name, arity, val))
            continue
        m = re.fullmatch(rf"({_IDENT})\s*=\s*(.+)", s)
        if not m:
            raise FormatSyntaxError(f"cannot parse {s!r}", no)
        key, val = m.group(1), _value(m.group(2), no, m.group(1))
        if key in seen:
            raise FormatSyntaxError("duplicate name", no, key)
        seen.add(key)
        if key == "universe":
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise FormatSyntaxError("universe must be a positive integer", no, key)
            size = val
        elif key == "names":
            if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
                raise FormatSyntaxError("names must be a list of strings", no, key)
            if len(set(val)) != len(val):
                raise FormatSyntaxError("element names must be distinct", no, key)
            names = val
        else:
            raw_parts.append((no, key, val))
    if size is None:
        raise FormatSyntaxError("missing 'universe = N'", None, "universe")
    if names is not None and len(names) != size:
        raise FormatSyntaxError(f"{len(names)} names for universe of size {size}", None, "names")
    doc = AlgebraDocument(size, element_names=names)
    for no, name, arity, table in ops:
        if not isinstance(table, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in table):
            raise FormatSyntaxError("table must be a flat list of integers", no, name)
        if len(table) != size**arity:
            raise ArityError(
                f"table has {len(table)} entries, arity {arity} needs {size}**{arity} = {size**arity}", no, name
            )
        bad = [x for x in table if not 0 <= x < size]
        if bad:
            raise FormatSyntaxError(f"table entry {bad[0]} outside 0..{size - 1}", no, name)
        doc.operations.append((name, arity, table))
    index = {n: i for i, n in enumerate(names)} if names else {}
    for no, name, val in raw_parts:
        doc.named_partitions[name] = _blocks(val, size, index, no, name)
    return doc


def _blocks(val, size: int, index: dict[str, int], no: int, name: str) -> list[list[int]]:
    if not isinstance(val, list) or not all(isinstance(b, list) for b in val):
        raise FormatSyntaxError("partition must be a list of blocks", no, name)
    out = []
    owner: dict[int, int] = {}
    for k, block in enumerate(val):
        if not block:
            raise FormatSyntaxError(f"block {k} is empty", no, name)
        cur = []
        for x in block:
            if isinstance(x, str):
                if x not in index:
                    raise FormatSyntaxError(f"unknown element name {x!r}", no, name)
                x = index[x]
            elif not isinstance(x, int) or isinstance(x, bool):
                raise FormatSyntaxError(f"bad element {x!r}", no, name)
            if not 0 <= x < size:
                raise FormatSyntaxError(f"element {x} outside 0..{size - 1}", no, name)
            if x in owner:
                raise BlockOverlapError(f"element {x} is in blocks {owner[x]} and {k}", no, name)
            owner[x] = k
            cur.append(x)
        out.append(cur)
    missing = [x for x in range(size) if x not in owner]
    if missing:
        raise BlockGapError(f"elements {missing} are in no block", no, name)
    return out


def serialize(doc: AlgebraDocument) -> str:
    out = [HEADER, f"universe = {doc.universe_size}"]
    if doc.element_names is not None:
        out.append(f"names = {json.dumps(doc.element_names)}")
    for name, arity, table in doc.operations:
        out.append(f"op {name}/{arity} = {json.dumps([int(x) for x in table])}")
    for name, blocks in doc.named_partitions.items():
        out.append(f"{name} = {json.dumps(blocks)}")
    return "\n".join(out) + "\n"


def document_from(alg: FiniteAlgebra, partitions: dict[str, Partition], names: list[str] | None = None) -> AlgebraDocument:
    ops = [(op.name, op.arity, op.table.ravel().tolist()) for op in alg.operations]
    parts = {k: p.blocks() for k, p in partitions.items()}
    return AlgebraDocument(alg.size, ops, parts, names)


def read_algebra(path) -> AlgebraDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())
