"""Construction of implication bases from a standard formal context.

Three constructions, all requiring a clarified and reduced context so that no
attribute is implied by the empty set:

* :func:`build_cdub` - the canonical direct unit basis: one unit implication
  per (minimal generator, implied attribute) pair, right-hand sides merged
  per left-hand side.  One simultaneous round computes any closure.
* :func:`build_dbasis` - the ordered direct basis: all unit binary
  implications first, then the minimal generators of size two or more that
  survive the redundancy filter against the binary prefix.  One in-order
  round computes any closure once the prefix comes first.
* :func:`build_dg` - the minimum-cardinality basis: one implication per
  pseudo-closed set, found in lectic order with closures taken under the
  implication list discovered so far.

Plus the predicates that tests and the command line lean on: pseudo-closed
membership, basis equivalence, and directness verification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .closure import _fixpoint_bits
from .context import Context, require_standard
from .errors import UniverseMismatch
from .sets import (
    AttributeSet,
    Basis,
    BasisKind,
    Implication,
    _merge_pairs,
    lectic_key,
)

__all__ = [
    "PseudoClosedWitness",
    "build_cdub",
    "build_dbasis",
    "build_dg",
    "is_pseudo_closed",
    "enumerate_pseudo_closed",
    "check_equiv",
    "verify_direct",
    "direct_witness",
]


# -- minimal generators -------------------------------------------------------


def _minimal_transversals(edges: list[int]) -> list[int]:
    """All inclusion-minimal bit sets hitting every edge.

    An empty edge admits no transversal; an empty family is hit by the empty
    set.  Classic incremental construction: extend the running antichain one
    edge at a time and keep only minimal elements.
    """
    if any(edge == 0 for edge in edges):
        return []
    unique = sorted(set(edges), key=int.bit_count)
    kept: list[int] = []
    for edge in unique:
        if not any(prev & edge == prev for prev in kept):
            kept.append(edge)
    trans: list[int] = [0]
    for edge in kept:
        hit: list[int] = []
        miss: list[int] = []
        for t in trans:
            (hit if t & edge else miss).append(t)
        if not miss:
            continue
        candidates: set[int] = set()
        for t in miss:
            rest = edge
            while rest:
                low = rest & -rest
                candidates.add(t | low)
                rest ^= low
        fresh = [c for c in candidates if not any(h & c == h for h in hit)]
        fresh.sort(key=int.bit_count)
        minimal: list[int] = []
        for c in fresh:
            if not any(m & c == m for m in minimal):
                minimal.append(c)
        trans = hit + minimal
    return trans


def _proper_premises(ctx: Context) -> list[list[int]]:
    """Per attribute ``m``: every minimal set not containing ``m`` whose
    closure contains ``m``.

    A set implies ``m`` exactly when it clashes with every object row missing
    ``m``, so the premises are the minimal transversals of those row
    complements (with ``m`` itself excluded from play).
    """
    n = ctx.universe.size
    mask = ctx.universe.mask
    rows = ctx.row_bits()
    out: list[list[int]] = []
    for m in range(n):
        mbit = 1 << m
        edges = [(mask & ~row) & ~mbit for row in rows if not row & mbit]
        out.append(_minimal_transversals(edges))
    return out


# -- builders -----------------------------------------------------------------


def build_cdub(ctx: Context) -> Basis:
    """Canonical direct unit basis of a standard context.

    Emits the unit implication ``A -> m`` for every minimal generator ``A``
    of every attribute ``m``, then merges right-hand sides per left-hand
    side.  The result is direct: one simultaneous round reaches any closure.
    """
    require_standard(ctx)
    universe = ctx.universe
    premises = _proper_premises(ctx)
    units: list[Implication] = []
    for m in range(universe.size):
        target = AttributeSet(universe, 1 << m)
        for lhs_bits in sorted(premises[m], key=lambda b: lectic_key(b, universe.size)):
            units.append(Implication(AttributeSet(universe, lhs_bits), target))
    return Basis(_merge_pairs(units), kind=BasisKind.CDUB, universe=universe)


def build_dbasis(ctx: Context) -> Basis:
    """Ordered direct basis of a standard context.

    The binary prefix lists ``a -> c`` for every attribute ``c`` in the
    closure of the single attribute ``a``; it is transitively closed by
    construction.  The tail keeps a minimal generator ``A`` of ``c`` (size
    two or more) only if the prefix alone neither reaches ``c`` from ``A``
    nor reaches some other minimal generator of ``c``.  Prefix first and the
    tail in lectic order of the left-hand side, right-hand sides merged
    within the tail only, so the prefix stays in unit form.
    """
    require_standard(ctx)
    universe = ctx.universe
    n = universe.size
    single_closures = [ctx.closure_bits(1 << a) for a in range(n)]
    prefix: list[Implication] = []
    for a in range(n):
        implied = single_closures[a] & ~(1 << a)
        while implied:
            low = implied & -implied
            prefix.append(
                Implication(
                    AttributeSet(universe, 1 << a),
                    AttributeSet(universe, low),
                )
            )
            implied ^= low
    premises = _proper_premises(ctx)
    tail_units: list[tuple[int, int]] = []
    for c in range(n):
        plist = premises[c]
        for lhs in plist:
            if lhs.bit_count() < 2:
                continue
            reach = 0
            rest = lhs
            while rest:
                low = rest & -rest
                reach |= single_closures[low.bit_length() - 1]
                rest ^= low
            if reach >> c & 1:
                continue
            if any(other != lhs and other & reach == other for other in plist):
                continue
            tail_units.append((lhs, c))
    tail_units.sort(key=lambda unit: (lectic_key(unit[0], n), unit[1]))
    tail = _merge_pairs(
        [
            Implication(AttributeSet(universe, lhs), AttributeSet(universe, 1 << c))
            for lhs, c in tail_units
        ]
    )
    return Basis(
        prefix + tail,
        kind=BasisKind.DBASIS,
        sigma0_len=len(prefix),
        universe=universe,
    )


def _list_close(bits: int, impls: list[tuple[int, int]]) -> int:
    """Smallest superset closed under the given implication list."""
    changed = True
    while changed:
        changed = False
        for lhs, rhs in impls:
            if lhs & bits == lhs and rhs & ~bits:
                bits |= rhs
                changed = True
    return bits


def _next_list_closed(bits: int, n: int, impls: list[tuple[int, int]]) -> int:
    """Lectically next set closed under the implication list."""
    for i in range(n - 1, -1, -1):
        bit = 1 << i
        if bits & bit:
            bits &= ~bit
        else:
            prefix = bit - 1
            candidate = _list_close((bits & prefix) | bit, impls)
            if candidate & prefix == bits & prefix:
                return candidate
    raise RuntimeError("no lectic successor; the full set should have ended the walk")


def build_dg(ctx: Context) -> Basis:
    """Minimum-cardinality basis of a standard context.

    Walks the sets closed under the implications found so far in lectic
    order; each one that the context closure still enlarges is pseudo-closed
    and contributes ``P -> closure(P) \\ P``.  The walk ends at the full
    universe.  In a standard context the empty set is closed, so no
    left-hand side is ever empty.
    """
    require_standard(ctx)
    universe = ctx.universe
    full = universe.mask
    found: list[tuple[int, int]] = []
    bits = 0
    while bits != full:
        closed = ctx.closure_bits(bits)
        if closed != bits:
            found.append((bits, closed))
        bits = _next_list_closed(bits, universe.size, found)
    return Basis(
        [
            Implication(
                AttributeSet(universe, p),
                AttributeSet(universe, c & ~p),
            )
            for p, c in found
        ],
        kind=BasisKind.DG,
        universe=universe,
    )


# -- predicates ---------------------------------------------------------------


@dataclass(frozen=True)
class PseudoClosedWitness:
    """A pseudo-closed set together with its closure under the basis."""

    pseudo_closed: AttributeSet
    closure: AttributeSet


def _pseudo_closed_family(
    target: int, pairs: tuple[tuple[int, int], ...]
) -> list[tuple[int, int]]:
    """All pseudo-closed subsets of ``target`` with their closures.

    Bottom-up over the subset lattice: a candidate only needs the
    pseudo-closed sets of strictly smaller cardinality, which are already
    known.  Cost grows with ``2**popcount(target)``.
    """
    submasks = []
    s = target
    while True:
        submasks.append(s)
        if s == 0:
            break
        s = (s - 1) & target
    submasks.sort(key=int.bit_count)
    family: list[tuple[int, int]] = []
    for s in submasks:
        closed = _fixpoint_bits(s, pairs)
        if closed == s:
            continue
        ok = True
        for p, pc in family:
            if p != s and p & s == p and pc & ~s:
                ok = False
                break
        if ok:
            family.append((s, closed))
    return family


def is_pseudo_closed(x: AttributeSet, basis: Basis) -> bool:
    """Is ``x`` pseudo-closed under the basis?

    ``x`` must not be closed, and the closure of every pseudo-closed proper
    subset must stay inside ``x``.  Evaluated bottom-up over the subsets of
    ``x``, so the cost grows with ``2**len(x)``.
    """
    if x.universe != basis.universe:
        raise UniverseMismatch("set universe differs from basis universe")
    pairs = basis.pairs()
    if _fixpoint_bits(x.bits, pairs) == x.bits:
        return False
    family = _pseudo_closed_family(x.bits, pairs)
    return any(p == x.bits for p, _ in family)


def enumerate_pseudo_closed(basis: Basis) -> list[PseudoClosedWitness]:
    """Every pseudo-closed set of the basis, in lectic order.

    Exhaustive over the powerset; intended for small universes in tests and
    diagnostics.
    """
    universe = basis.universe
    family = _pseudo_closed_family(universe.mask, basis.pairs())
    family.sort(key=lambda pc: lectic_key(pc[0], universe.size))
    return [
        PseudoClosedWitness(AttributeSet(universe, p), AttributeSet(universe, c))
        for p, c in family
    ]


def check_equiv(b1: Basis, b2: Basis) -> bool:
    """Do both bases induce the same closure operator?

    Each implication of one must follow from the other: its rhs must be
    contained in the closure of its lhs computed under the other basis.
    """
    if b1.universe != b2.universe:
        raise UniverseMismatch("bases live in different universes")
    p1, p2 = b1.pairs(), b2.pairs()
    for lhs, rhs in p1:
        if rhs & ~_fixpoint_bits(lhs, p2):
            return False
    for lhs, rhs in p2:
        if rhs & ~_fixpoint_bits(lhs, p1):
            return False
    return True


def _single_round_bits(bits: int, pairs: tuple[tuple[int, int], ...], ordered: bool) -> int:
    if ordered:
        for lhs, rhs in pairs:
            if lhs & bits == lhs:
                bits |= rhs
        return bits
    acc = 0
    for lhs, rhs in pairs:
        if lhs & bits == lhs:
            acc |= rhs
    return bits | acc


def direct_witness(
    basis: Basis,
    exhaustive_limit: int = 12,
    samples: int = 2048,
    seed: int = 0,
) -> AttributeSet | None:
    """A set whose closure one round misses, or ``None`` if none was found.

    For a ``dbasis`` the round is the in-order sweep (ordered directness);
    for every other kind it is the simultaneous round.  Exhaustive over the
    powerset up to ``exhaustive_limit`` attributes, seeded sampling beyond.
    """
    n = basis.universe.size
    pairs = basis.pairs()
    ordered = basis.kind is BasisKind.DBASIS
    if n <= exhaustive_limit:
        candidates = range(1 << n)
    else:
        rng = random.Random(seed)
        candidates = (rng.getrandbits(n) for _ in range(samples))
    for bits in candidates:
        if _single_round_bits(bits, pairs, ordered) != _fixpoint_bits(bits, pairs):
            return AttributeSet(basis.universe, bits)
    return None


def verify_direct(
    basis: Basis,
    exhaustive_limit: int = 12,
    samples: int = 2048,
    seed: int = 0,
) -> bool:
    """Does one round always reach the closure?  See :func:`direct_witness`
    for the round used per kind and the exhaustiveness policy."""
    return direct_witness(basis, exhaustive_limit, samples, seed) is None
