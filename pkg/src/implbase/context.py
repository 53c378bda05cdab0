"""Formal contexts and the closure operator they induce.

A context is an object-by-attribute incidence table.  The closure of an
attribute set is the intersection of all object rows containing it (the full
universe when no row does).  Besides the operator itself this module provides
clarification (dropping duplicate rows and columns), reduction (dropping rows
and columns that are intersections of others, full ones included), a seeded
synthetic generator, and Burmeister ``.cxt`` file I/O.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Iterator, Sequence

from .errors import (
    DegenerateContext,
    MalformedCxt,
    NotClarified,
    NotStandardContext,
    UniverseMismatch,
)
from .sets import AttributeSet, Universe

__all__ = [
    "Context",
    "context_closure",
    "is_clarified",
    "clarify",
    "is_reduced",
    "reduce",
    "is_standard",
    "require_standard",
    "gen_synthetic",
    "parse_cxt",
    "render_cxt",
    "read_cxt",
    "write_cxt",
]


class Context:
    """An immutable incidence table over a fixed universe.

    Rows are attribute sets, one per object.  Optional object names are
    display labels only.  Contexts with zero objects are representable (they
    can arise transiently during reduction) but file I/O requires at least
    one object and one attribute.
    """

    __slots__ = ("universe", "rows", "object_names", "_cache")

    def __init__(
        self,
        universe: Universe,
        rows: Sequence[AttributeSet],
        object_names: Sequence[str] | None = None,
    ):
        rows = tuple(rows)
        for row in rows:
            if row.universe != universe:
                raise ValueError("row universe differs from context universe")
        if object_names is not None:
            object_names = tuple(object_names)
            if len(object_names) != len(rows):
                raise ValueError("one object name per row is required")
        self.universe = universe
        self.rows = rows
        self.object_names = object_names
        self._cache: dict[str, object] = {}

    @property
    def objects(self) -> int:
        return len(self.rows)

    def object_label(self, index: int) -> str:
        if self.object_names is not None:
            return self.object_names[index]
        return str(index)

    def row_bits(self) -> tuple[int, ...]:
        got = self._cache.get("row_bits")
        if got is None:
            got = tuple(row.bits for row in self.rows)
            self._cache["row_bits"] = got
        return got  # type: ignore[return-value]

    def column_bits(self) -> tuple[int, ...]:
        """Per attribute: the extent as a bit mask over object positions."""
        got = self._cache.get("column_bits")
        if got is None:
            cols = [0] * self.universe.size
            for obj, bits in enumerate(self.row_bits()):
                while bits:
                    low = bits & -bits
                    cols[low.bit_length() - 1] |= 1 << obj
                    bits ^= low
            got = tuple(cols)
            self._cache["column_bits"] = got
        return got  # type: ignore[return-value]

    def closure_bits(self, bits: int) -> int:
        """Closure as raw bits; the intersection of all rows containing them."""
        acc = self.universe.mask
        for row in self.row_bits():
            if bits & row == bits:
                acc &= row
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Context):
            return NotImplemented
        return (
            self.universe == other.universe
            and self.rows == other.rows
            and self.object_names == other.object_names
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.rows))

    def __iter__(self) -> Iterator[AttributeSet]:
        return iter(self.rows)

    def __repr__(self) -> str:
        return f"Context({self.objects} objects, {self.universe.size} attributes)"


def context_closure(ctx: Context, x: AttributeSet) -> AttributeSet:
    """Smallest row-intersection containing ``x``; the universe if no row does."""
    if x.universe != ctx.universe:
        raise UniverseMismatch("set universe differs from context universe")
    return AttributeSet(ctx.universe, ctx.closure_bits(x.bits))


# -- clarification and reduction --------------------------------------------


def is_clarified(ctx: Context) -> bool:
    rows = ctx.row_bits()
    if len(set(rows)) != len(rows):
        return False
    cols = ctx.column_bits()
    return len(set(cols)) == len(cols)


def clarify(ctx: Context) -> Context:
    """Drop duplicate rows and duplicate columns, keeping first occurrences.

    The concept lattice is unchanged up to renaming: equal rows describe the
    same object intent and equal columns the same attribute extent.
    """
    seen_rows: set[int] = set()
    keep_rows: list[int] = []
    for i, bits in enumerate(ctx.row_bits()):
        if bits not in seen_rows:
            seen_rows.add(bits)
            keep_rows.append(i)
    interim = _select(ctx, keep_rows, list(range(ctx.universe.size)))
    seen_cols: set[int] = set()
    keep_cols: list[int] = []
    for j, bits in enumerate(interim.column_bits()):
        if bits not in seen_cols:
            seen_cols.add(bits)
            keep_cols.append(j)
    return _select(interim, list(range(interim.objects)), keep_cols)


def _meet_of_others(values: Sequence[int], skip: int, top: int) -> int:
    """Intersection of all other family members containing ``values[skip]``.

    The empty family intersects to ``top``, which is what flags full rows and
    full columns as redundant.
    """
    target = values[skip]
    acc = top
    for j, value in enumerate(values):
        if j != skip and value & target == target:
            acc &= value
    return acc


def is_reduced(ctx: Context) -> bool:
    rows = ctx.row_bits()
    for i in range(len(rows)):
        if _meet_of_others(rows, i, ctx.universe.mask) == rows[i]:
            return False
    cols = ctx.column_bits()
    objects_mask = (1 << ctx.objects) - 1
    for j in range(len(cols)):
        if _meet_of_others(cols, j, objects_mask) == cols[j]:
            return False
    return True


def reduce(ctx: Context) -> Context:
    """Drop every row and column that is an intersection of others.

    Requires a clarified context.  Full rows and full columns count as empty
    intersections and go as well, so afterwards nothing is implied by the
    empty set.  The closure system on the surviving attributes is exactly the
    projection of the original one.  Raises :class:`DegenerateContext` when
    nothing would remain on one of the two axes.
    """
    if not is_clarified(ctx):
        raise NotClarified("reduce requires a clarified context")
    current = ctx
    while True:
        rows = current.row_bits()
        keep_rows = [
            i
            for i in range(len(rows))
            if _meet_of_others(rows, i, current.universe.mask) != rows[i]
        ]
        if len(keep_rows) != len(rows):
            current = _select(current, keep_rows, list(range(current.universe.size)))
            if current.objects == 0:
                raise DegenerateContext("reduction removed every object")
            continue
        cols = current.column_bits()
        objects_mask = (1 << current.objects) - 1
        keep_cols = [
            j
            for j in range(len(cols))
            if _meet_of_others(cols, j, objects_mask) != cols[j]
        ]
        if len(keep_cols) != len(cols):
            if not keep_cols:
                raise DegenerateContext("reduction removed every attribute")
            current = _select(current, list(range(current.objects)), keep_cols)
            continue
        return current


def _select(ctx: Context, row_idx: Sequence[int], col_idx: Sequence[int]) -> Context:
    """Sub-context on the given rows and columns, preserving labels."""
    if len(col_idx) == ctx.universe.size:
        universe = ctx.universe
        rows = [ctx.rows[i] for i in row_idx]
    else:
        names = (
            [ctx.universe.label(j) for j in col_idx]
            if ctx.universe.names is not None
            else None
        )
        universe = Universe(size=len(col_idx), names=names)
        old_rows = ctx.row_bits()
        rows = []
        for i in row_idx:
            bits = 0
            source = old_rows[i]
            for new_j, old_j in enumerate(col_idx):
                if source >> old_j & 1:
                    bits |= 1 << new_j
            rows.append(AttributeSet(universe, bits))
    object_names = (
        [ctx.object_label(i) for i in row_idx] if ctx.object_names is not None else None
    )
    return Context(universe, rows, object_names)


def is_standard(ctx: Context) -> bool:
    return is_clarified(ctx) and is_reduced(ctx)


def require_standard(ctx: Context) -> None:
    if not is_standard(ctx):
        raise NotStandardContext("a clarified and reduced context is required")


# -- synthetic generation ----------------------------------------------------


def gen_synthetic(objects: int, attributes: int, density: float, seed: int) -> Context:
    """Seeded random context, clarified and reduced before it is returned.

    Each incidence cell is an independent Bernoulli(``density``) draw.  The
    same arguments always produce the same context, byte for byte when
    written to disk.  Raises :class:`DegenerateContext` when clarification
    and reduction leave no rows or no columns (likely at extreme densities);
    callers should retry with a different seed.
    """
    if objects < 1:
        raise ValueError("at least one object is required")
    if attributes < 1:
        raise ValueError("at least one attribute is required")
    if not 0.0 < density < 1.0:
        raise ValueError("density must lie strictly between 0 and 1")
    universe = Universe(names=[f"m{j + 1}" for j in range(attributes)])
    rng = random.Random(seed)
    rows = []
    for _ in range(objects):
        bits = 0
        for j in range(attributes):
            if rng.random() < density:
                bits |= 1 << j
        rows.append(AttributeSet(universe, bits))
    raw = Context(universe, rows, [f"g{i + 1}" for i in range(objects)])
    reduced = reduce(clarify(raw))
    if reduced.objects == 0:
        raise DegenerateContext("generated context reduced to no objects")
    return reduced


# -- Burmeister .cxt format --------------------------------------------------


def render_cxt(ctx: Context) -> str:
    """Serialise to the Burmeister layout: ``B``, blank line, counts, blank
    line, object names, attribute names, then one ``.``/``X`` line per row."""
    if ctx.objects < 1 or ctx.universe.size < 1:
        raise MalformedCxt("cxt files need at least one object and one attribute")
    lines = ["B", "", str(ctx.objects), str(ctx.universe.size), ""]
    lines.extend(ctx.object_label(i) for i in range(ctx.objects))
    lines.extend(ctx.universe.label(j) for j in range(ctx.universe.size))
    for bits in ctx.row_bits():
        lines.append(
            "".join("X" if bits >> j & 1 else "." for j in range(ctx.universe.size))
        )
    return "\n".join(lines) + "\n"


def parse_cxt(text: str) -> Context:
    """Parse the Burmeister layout; inverse of :func:`render_cxt`."""
    lines = text.splitlines()
    pos = 0

    def next_line(allow_blank: bool = False) -> str:
        nonlocal pos
        while pos < len(lines):
            line = lines[pos].rstrip("\r")
            pos += 1
            if line.strip() or allow_blank:
                return line
        raise MalformedCxt("unexpected end of file")

    magic = next_line()
    if magic.strip() != "B":
        raise MalformedCxt(f"expected 'B' header, found {magic!r}")

    def next_count(label: str) -> int:
        token = next_line().strip()
        if not token.isdigit():
            raise MalformedCxt(f"expected {label} count, found {token!r}")
        value = int(token)
        if value < 1:
            raise MalformedCxt(f"{label} count must be positive")
        return value

    n_objects = next_count("object")
    n_attributes = next_count("attribute")
    object_names = [next_line() for _ in range(n_objects)]
    attribute_names = [next_line() for _ in range(n_attributes)]
    try:
        universe = Universe(names=attribute_names)
    except ValueError as exc:
        raise MalformedCxt(str(exc)) from exc
    rows = []
    for i in range(n_objects):
        line = next_line().strip()
        if len(line) != n_attributes:
            raise MalformedCxt(
                f"row {i}: expected {n_attributes} incidence cells, found {len(line)}"
            )
        bits = 0
        for j, cell in enumerate(line):
            if cell == "X":
                bits |= 1 << j
            elif cell != ".":
                raise MalformedCxt(f"row {i}: unexpected cell {cell!r}")
        rows.append(AttributeSet(universe, bits))
    while pos < len(lines):
        if lines[pos].strip():
            raise MalformedCxt("trailing content after incidence rows")
        pos += 1
    return Context(universe, rows, object_names)


def read_cxt(path: str | Path) -> Context:
    return parse_cxt(Path(path).read_text(encoding="utf-8"))


def write_cxt(ctx: Context, path: str | Path) -> None:
    Path(path).write_text(render_cxt(ctx), encoding="utf-8")
