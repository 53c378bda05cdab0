"""Attribute universes, bit-vector attribute sets, implications, and bases.

This module is the vocabulary for everything else in the package: a
:class:`Universe` fixes the attribute alphabet once, an :class:`AttributeSet`
is an immutable bit vector over it, an :class:`Implication` is a single
dependency ``lhs -> rhs`` with a non-empty left-hand side, and a
:class:`Basis` is an ordered sequence of implications tagged with the
construction that produced it.

All values are immutable after construction, so they can be shared freely
across threads and processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import (
    EmptyLhs,
    ImplicationSyntaxError,
    InvalidBasis,
    UniverseMismatch,
    UnknownAttribute,
)

#: Hard cap on universe width; keeps bit masks and file formats sane.
MAX_UNIVERSE_SIZE = 1024


class Universe:
    """A fixed, ordered alphabet of at most ``MAX_UNIVERSE_SIZE`` attributes.

    Attributes are addressed by position.  Optional display names must be
    unique; when absent, the decimal position doubles as the display label.
    """

    __slots__ = ("size", "names", "mask", "_index")

    def __init__(self, size: int | None = None, names: Sequence[str] | None = None):
        if names is not None:
            names = tuple(names)
            if size is None:
                size = len(names)
            elif size != len(names):
                raise ValueError("size does not match the number of names")
            if len(set(names)) != len(names):
                raise ValueError("attribute names must be unique")
        if size is None:
            raise ValueError("either size or names is required")
        if not 1 <= size <= MAX_UNIVERSE_SIZE:
            raise ValueError(f"universe size must be in 1..{MAX_UNIVERSE_SIZE}")
        self.size: int = size
        self.names: tuple[str, ...] | None = names
        self.mask: int = (1 << size) - 1
        self._index: dict[str, int] = (
            {name: i for i, name in enumerate(names)} if names else {}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Universe):
            return NotImplemented
        return self.size == other.size and self.names == other.names

    def __hash__(self) -> int:
        return hash((self.size, self.names))

    def __repr__(self) -> str:
        shown = " ".join(self.label(i) for i in range(min(self.size, 8)))
        tail = " ..." if self.size > 8 else ""
        return f"Universe({self.size}: {shown}{tail})"

    def label(self, index: int) -> str:
        """Display label of one attribute position."""
        if self.names is not None:
            return self.names[index]
        return str(index)

    def resolve(self, token: str) -> int:
        """Map an attribute name or decimal position to its index."""
        if token in self._index:
            return self._index[token]
        if token.isdigit():
            index = int(token)
            if 0 <= index < self.size:
                return index
        raise UnknownAttribute(f"unknown attribute {token!r}")

    def empty(self) -> AttributeSet:
        return AttributeSet(self, 0)

    def full(self) -> AttributeSet:
        return AttributeSet(self, self.mask)

    def subset(self, items: Iterable[int | str]) -> AttributeSet:
        """Build a set from attribute indices and/or names."""
        bits = 0
        for item in items:
            index = item if isinstance(item, int) else self.resolve(item)
            if not 0 <= index < self.size:
                raise UnknownAttribute(f"attribute index {index} out of range")
            bits |= 1 << index
        return AttributeSet(self, bits)


@dataclass(frozen=True, slots=True)
class AttributeSet:
    """An immutable subset of a universe, stored as an int bit vector.

    Bit ``i`` corresponds to attribute position ``i``; bits beyond the
    universe size are masked off at construction, so every operation is total.
    """

    universe: Universe
    bits: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", self.bits & self.universe.mask)

    def _check(self, other: AttributeSet) -> None:
        if self.universe != other.universe:
            raise UniverseMismatch("operands belong to different universes")

    def union(self, other: AttributeSet) -> AttributeSet:
        self._check(other)
        return AttributeSet(self.universe, self.bits | other.bits)

    def intersection(self, other: AttributeSet) -> AttributeSet:
        self._check(other)
        return AttributeSet(self.universe, self.bits & other.bits)

    def difference(self, other: AttributeSet) -> AttributeSet:
        self._check(other)
        return AttributeSet(self.universe, self.bits & ~other.bits)

    def issubset(self, other: AttributeSet) -> bool:
        self._check(other)
        return self.bits & other.bits == self.bits

    def complement(self) -> AttributeSet:
        return AttributeSet(self.universe, ~self.bits)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __le__ = issubset

    def __lt__(self, other: AttributeSet) -> bool:
        return self.issubset(other) and self.bits != other.bits

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.universe.size and bool(self.bits >> index & 1)

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def indices(self) -> tuple[int, ...]:
        return tuple(self)

    def labels(self) -> tuple[str, ...]:
        return tuple(self.universe.label(i) for i in self)

    def __str__(self) -> str:
        return " ".join(self.labels())

    def __repr__(self) -> str:
        return f"AttributeSet([{self}])"


class SetOp(Enum):
    """The attribute-set operations that an instrumented run accounts for."""

    UNION = "union"
    INTERSECT = "intersect"
    DIFF = "diff"
    SUBSET_TEST = "subset-test"


def set_ops_counted(a: AttributeSet, b: AttributeSet, op: SetOp, counter) -> AttributeSet | bool:
    """Perform one set operation and charge exactly one tick to ``counter``.

    ``counter`` is any object with an ``attribute_ops`` int field (usually a
    ``Metrics``).  One call is one logical operation regardless of universe
    width, which keeps the accounting hardware independent.
    """
    counter.attribute_ops += 1
    if op is SetOp.UNION:
        return a.union(b)
    if op is SetOp.INTERSECT:
        return a.intersection(b)
    if op is SetOp.DIFF:
        return a.difference(b)
    if op is SetOp.SUBSET_TEST:
        return a.issubset(b)
    raise ValueError(f"unsupported operation {op!r}")


def lectic_key(bits: int, size: int) -> int:
    """Sort key realising the lectic order on subsets.

    Earlier attribute positions weigh more, so ``sorted(..., key=...)`` lists
    sets exactly in ascending lectic order: of two distinct sets the smaller
    is the one missing the smallest attribute in which they differ.
    """
    key = 0
    for i in range(size):
        if bits >> i & 1:
            key |= 1 << (size - 1 - i)
    return key


@dataclass(frozen=True, slots=True)
class Implication:
    """One dependency ``lhs -> rhs`` over a shared universe.

    The left-hand side is never empty; both sides live in the same universe.
    The right-hand side may legitimately be empty (such an implication never
    adds anything and is kept only if a caller builds it explicitly).
    """

    lhs: AttributeSet
    rhs: AttributeSet

    def __post_init__(self) -> None:
        if self.lhs.universe != self.rhs.universe:
            raise UniverseMismatch("lhs and rhs belong to different universes")
        if not self.lhs:
            raise EmptyLhs("implication left-hand side must be non-empty")

    @property
    def universe(self) -> Universe:
        return self.lhs.universe

    def __str__(self) -> str:
        return format_implication(self)

    def __repr__(self) -> str:
        return f"Implication({self})"


class BasisKind(str, Enum):
    """How a basis was constructed; drives validation and algorithm choice."""

    RAW = "raw"
    CDUB = "cdub"
    DBASIS = "dbasis"
    DG = "dg"


class Basis:
    """An ordered, immutable sequence of implications with a kind tag.

    ``sigma0_len`` is meaningful for :attr:`BasisKind.DBASIS` only: the first
    ``sigma0_len`` implications form the binary prefix (single-attribute
    left-hand sides) that the direct algorithms pre-close against.  Structural
    rules are enforced at construction:

    * every implication shares the basis universe,
    * ``cdub`` and ``dg`` bases never repeat a left-hand side,
    * a ``dbasis`` prefix has unit left-hand sides and its tail has
      left-hand sides of at least two attributes.

    Derived read-only structures (bit pairs, per-attribute occurrence lists,
    reachability over the binary prefix) are built lazily once and then
    shared; they never mutate the logical value.
    """

    __slots__ = ("implications", "kind", "sigma0_len", "universe", "_cache")

    def __init__(
        self,
        implications: Iterable[Implication],
        kind: BasisKind = BasisKind.RAW,
        sigma0_len: int = 0,
        universe: Universe | None = None,
    ):
        impls = tuple(implications)
        if universe is None:
            if not impls:
                raise ValueError("an empty basis needs an explicit universe")
            universe = impls[0].universe
        for impl in impls:
            if impl.universe != universe:
                raise UniverseMismatch("implication universe differs from basis universe")
        kind = BasisKind(kind)
        if kind is BasisKind.DBASIS:
            if not 0 <= sigma0_len <= len(impls):
                raise InvalidBasis("sigma0_len out of range")
            for impl in impls[:sigma0_len]:
                if len(impl.lhs) != 1:
                    raise InvalidBasis("binary prefix requires unit left-hand sides")
            for impl in impls[sigma0_len:]:
                if len(impl.lhs) < 2:
                    raise InvalidBasis("dbasis tail requires left-hand sides of size >= 2")
        else:
            if sigma0_len != 0:
                raise InvalidBasis("sigma0_len is only meaningful for a dbasis")
            if kind in (BasisKind.CDUB, BasisKind.DG):
                seen: set[int] = set()
                for impl in impls:
                    if impl.lhs.bits in seen:
                        raise InvalidBasis(f"duplicate left-hand side {{{impl.lhs}}}")
                    seen.add(impl.lhs.bits)
        self.implications = impls
        self.kind = kind
        self.sigma0_len = sigma0_len
        self.universe = universe
        self._cache: dict[str, object] = {}

    def __len__(self) -> int:
        return len(self.implications)

    def __iter__(self) -> Iterator[Implication]:
        return iter(self.implications)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Basis):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.sigma0_len == other.sigma0_len
            and self.universe == other.universe
            and self.implications == other.implications
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.sigma0_len, self.implications))

    def __repr__(self) -> str:
        return f"Basis({self.kind.value}, {len(self.implications)} implications)"

    # -- derived read-only structures ------------------------------------

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Implications as raw ``(lhs_bits, rhs_bits)`` pairs."""
        got = self._cache.get("pairs")
        if got is None:
            got = tuple((i.lhs.bits, i.rhs.bits) for i in self.implications)
            self._cache["pairs"] = got
        return got  # type: ignore[return-value]

    def attr_lists(self) -> tuple[tuple[int, ...], ...]:
        """Per attribute: indices of implications whose lhs contains it."""
        got = self._cache.get("attr_lists")
        if got is None:
            lists: list[list[int]] = [[] for _ in range(self.universe.size)]
            for idx, (lhs, _) in enumerate(self.pairs()):
                while lhs:
                    low = lhs & -lhs
                    lists[low.bit_length() - 1].append(idx)
                    lhs ^= low
            got = tuple(tuple(entry) for entry in lists)
            self._cache["attr_lists"] = got
        return got  # type: ignore[return-value]

    def attr_masks(self) -> tuple[int, ...]:
        """Per attribute: bit mask over implication indices, same content as
        :meth:`attr_lists` but usable with int arithmetic."""
        got = self._cache.get("attr_masks")
        if got is None:
            masks = [0] * self.universe.size
            for idx, (lhs, _) in enumerate(self.pairs()):
                while lhs:
                    low = lhs & -lhs
                    masks[low.bit_length() - 1] |= 1 << idx
                    lhs ^= low
            got = tuple(masks)
            self._cache["attr_masks"] = got
        return got  # type: ignore[return-value]

    def binary_reach(self) -> tuple[int, ...]:
        """Per attribute: everything reachable from it over the binary prefix.

        ``reach[a]`` always contains ``a`` itself.  Only meaningful for a
        ``dbasis``; callers guard the kind.
        """
        got = self._cache.get("binary_reach")
        if got is None:
            n = self.universe.size
            succ = [0] * n
            for impl in self.implications[: self.sigma0_len]:
                succ[next(iter(impl.lhs))] |= impl.rhs.bits
            reach = [(1 << a) | succ[a] for a in range(n)]
            changed = True
            while changed:
                changed = False
                for a in range(n):
                    acc = reach[a]
                    rest = acc
                    while rest:
                        low = rest & -rest
                        acc |= reach[low.bit_length() - 1]
                        rest ^= low
                    if acc != reach[a]:
                        reach[a] = acc
                        changed = True
            got = tuple(reach)
            self._cache["binary_reach"] = got
        return got  # type: ignore[return-value]


def _merge_pairs(
    impls: Sequence[Implication],
) -> list[Implication]:
    """RHS-union implications that share a lhs, keeping first-seen order."""
    order: list[int] = []
    merged: dict[int, int] = {}
    universe = impls[0].universe if impls else None
    for impl in impls:
        key = impl.lhs.bits
        if key in merged:
            merged[key] |= impl.rhs.bits
        else:
            merged[key] = impl.rhs.bits
            order.append(key)
    assert universe is not None or not order
    return [
        Implication(AttributeSet(universe, lhs), AttributeSet(universe, merged[lhs]))
        for lhs in order
    ]


def merge_same_lhs(basis: Basis) -> Basis:
    """Collapse implications sharing a left-hand side into one.

    The right-hand sides are unioned and the first occurrence keeps its
    position.  For a ``dbasis`` the binary prefix and the tail are merged
    separately, so the prefix boundary stays meaningful.  Equivalence is
    preserved: a merged implication fires exactly when each of its parts did.
    """
    if basis.kind is BasisKind.DBASIS:
        prefix = _merge_pairs(basis.implications[: basis.sigma0_len])
        tail = _merge_pairs(basis.implications[basis.sigma0_len :])
        return Basis(
            prefix + tail,
            kind=BasisKind.DBASIS,
            sigma0_len=len(prefix),
            universe=basis.universe,
        )
    merged = _merge_pairs(basis.implications)
    return Basis(merged, kind=basis.kind, universe=basis.universe)


def unit_expand(basis: Basis) -> set[tuple[int, int]]:
    """The basis as a set of unit dependencies ``(lhs_bits, attribute)``.

    Reflexive units (attribute already in the lhs) are kept out, so two bases
    compare equal here exactly when they state the same unit dependencies.
    """
    units: set[tuple[int, int]] = set()
    for lhs, rhs in basis.pairs():
        rest = rhs & ~lhs
        while rest:
            low = rest & -rest
            units.add((lhs, low.bit_length() - 1))
            rest ^= low
    return units


# -- text format -----------------------------------------------------------

ARROW = "->"


def parse_implication(text: str, universe: Universe) -> Implication:
    """Parse ``"a b -> c d"`` over the given universe.

    Attribute tokens are display names or decimal positions.  Raises
    :class:`ImplicationSyntaxError` for a missing arrow,
    :class:`EmptyLhs` for an empty left side, and
    :class:`UnknownAttribute` for an unresolvable token.
    """
    head, sep, tail = text.partition(ARROW)
    if not sep:
        raise ImplicationSyntaxError(f"missing {ARROW!r} in {text!r}")
    if ARROW in tail:
        raise ImplicationSyntaxError(f"more than one {ARROW!r} in {text!r}")
    lhs_tokens = head.split()
    rhs_tokens = tail.split()
    if not lhs_tokens:
        raise EmptyLhs(f"empty left-hand side in {text!r}")
    return Implication(universe.subset(lhs_tokens), universe.subset(rhs_tokens))


def format_implication(impl: Implication) -> str:
    """Render an implication in the same shape :func:`parse_implication` reads."""
    return f"{impl.lhs} {ARROW} {impl.rhs}".rstrip()


def render_basis(basis: Basis) -> str:
    """Canonical text form: kind header, prefix length for a dbasis, the
    universe line, then one implication per line."""
    lines = [f"# kind: {basis.kind.value}"]
    if basis.kind is BasisKind.DBASIS:
        lines.append(f"# sigma0_len: {basis.sigma0_len}")
    labels = " ".join(basis.universe.label(i) for i in range(basis.universe.size))
    lines.append(f"universe: {labels}")
    lines.extend(format_implication(impl) for impl in basis.implications)
    return "\n".join(lines) + "\n"


def parse_basis(text: str, universe: Universe | None = None) -> Basis:
    """Parse the text form produced by :func:`render_basis`.

    ``# kind:`` and ``# sigma0_len:`` comments are honoured; other comments
    and blank lines are ignored.  A leading ``universe:`` line fixes the
    alphabet; without one (and without an explicit ``universe`` argument) the
    alphabet is inferred from the tokens in order of first appearance, and
    every token is then treated as a name.
    """
    kind = BasisKind.RAW
    sigma0_len = 0
    body: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            key, _, value = comment.partition(":")
            key = key.strip().lower()
            value = value.strip()
            if key == "kind" and value:
                try:
                    kind = BasisKind(value.lower())
                except ValueError as exc:
                    raise ImplicationSyntaxError(f"unknown basis kind {value!r}") from exc
            elif key == "sigma0_len" and value:
                if not value.isdigit():
                    raise ImplicationSyntaxError(f"bad sigma0_len {value!r}")
                sigma0_len = int(value)
            continue
        if line.lower().startswith("universe:"):
            names = line.partition(":")[2].split()
            if not names:
                raise ImplicationSyntaxError("empty universe line")
            declared = Universe(names=names)
            if universe is not None and universe != declared:
                raise UniverseMismatch("declared universe differs from the expected one")
            universe = declared
            continue
        body.append(line)
    if universe is None:
        seen: list[str] = []
        for line in body:
            for token in line.replace(ARROW, " ").split():
                if token not in seen:
                    seen.append(token)
        if not seen:
            raise ImplicationSyntaxError("cannot infer a universe from an empty basis")
        universe = Universe(names=seen)
    impls = [parse_implication(line, universe) for line in body]
    if kind is not BasisKind.DBASIS:
        sigma0_len = 0
    return Basis(impls, kind=kind, sigma0_len=sigma0_len, universe=universe)


def read_basis(path: str | Path, universe: Universe | None = None) -> Basis:
    return parse_basis(Path(path).read_text(encoding="utf-8"), universe)


def write_basis(basis: Basis, path: str | Path) -> None:
    Path(path).write_text(render_basis(basis), encoding="utf-8")
