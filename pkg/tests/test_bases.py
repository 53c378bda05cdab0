"""The three basis constructions and the predicates around them."""

from __future__ import annotations

import random

import pytest

from conftest import (
    EX51_IMP,
    aset,
    closed_family,
    contranominal,
    ctx_from_rows,
    random_standard_context,
)
from implbase.bases import (
    build_cdub,
    build_dbasis,
    build_dg,
    check_equiv,
    direct_witness,
    enumerate_pseudo_closed,
    is_pseudo_closed,
    verify_direct,
)
from implbase.closure import oracle_closure
from implbase.context import Context, context_closure
from implbase.errors import NotStandardContext, UniverseMismatch
from implbase.sets import (
    AttributeSet,
    Basis,
    BasisKind,
    Universe,
    merge_same_lhs,
    read_basis,
    unit_expand,
)

BUILDERS = (build_cdub, build_dbasis, build_dg)


def impl_strings(basis: Basis) -> list[str]:
    return [str(impl) for impl in basis]


# -- exact contents on the worked example -----------------------------------------


def test_cdub_on_worked_example(ex51):
    basis = build_cdub(ex51)
    assert basis.kind is BasisKind.CDUB
    assert impl_strings(basis) == [
        "b d -> a",
        "b c -> a d",
        "a d -> b",
        "d -> c",
        "a b -> c d",
    ]


def test_dbasis_on_worked_example(ex51):
    basis = build_dbasis(ex51)
    assert basis.kind is BasisKind.DBASIS
    assert basis.sigma0_len == 1
    assert impl_strings(basis) == [
        "d -> c",
        "b c -> a d",
        "a d -> b",
        "a b -> c d",
    ]
    assert basis == read_basis(EX51_IMP)


def test_dbasis_unit_form(ex51):
    # as unit dependencies: d->c, bc->a, bc->d, ad->b, ab->c, ab->d
    basis = build_dbasis(ex51)
    u = basis.universe
    expected = {
        (aset(u, "d").bits, 2),
        (aset(u, "b c").bits, 0),
        (aset(u, "b c").bits, 3),
        (aset(u, "a d").bits, 1),
        (aset(u, "a b").bits, 2),
        (aset(u, "a b").bits, 3),
    }
    assert unit_expand(basis) == expected


def test_dbasis_tail_drops_premises_reached_through_the_prefix(ex51):
    # {b,d} generates a, but the prefix turns {b,d} into {b,c,d}, which
    # contains the other generator {b,c}; the tail therefore skips b d -> a
    basis = build_dbasis(ex51)
    tail_lhs = {str(impl.lhs) for impl in basis.implications[basis.sigma0_len :]}
    assert tail_lhs == {"b c", "a d", "a b"}
    cdub_lhs = {str(impl.lhs) for impl in build_cdub(ex51)}
    assert "b d" in cdub_lhs


def test_dg_on_worked_example(ex51):
    basis = build_dg(ex51)
    assert basis.kind is BasisKind.DG
    assert impl_strings(basis) == [
        "d -> c",
        "b c -> a d",
        "a c d -> b",
        "a b -> c d",
    ]


def test_builders_are_deterministic(ex51):
    for build in BUILDERS:
        assert build(ex51) == build(ex51)


# -- small special contexts ---------------------------------------------------------


def test_chain_context_bases(chain3):
    cdub = build_cdub(chain3)
    dbasis = build_dbasis(chain3)
    dg = build_dg(chain3)
    assert impl_strings(cdub) == ["c -> a b", "b -> a"]
    # the prefix stays in unit form; the whole basis is binary, no tail
    assert impl_strings(dbasis) == ["b -> a", "c -> a", "c -> b"]
    assert dbasis.sigma0_len == 3
    assert impl_strings(dg) == ["c -> a b", "b -> a"]
    assert unit_expand(cdub) == unit_expand(dbasis)


def test_contranominal_contexts_have_empty_bases():
    for n in (3, 4):
        ctx = contranominal(n)
        for build in BUILDERS:
            basis = build(ctx)
            assert len(basis) == 0
            assert basis.universe == ctx.universe


def test_single_attribute_standard_context():
    ctx = ctx_from_rows(["a"], [""])
    for build in BUILDERS:
        assert len(build(ctx)) == 0


def test_builders_reject_nonstandard_contexts():
    unreduced = ctx_from_rows(["a"], ["a"])
    unclarified = ctx_from_rows(["p", "q"], ["p", "p"])
    for build in BUILDERS:
        with pytest.raises(NotStandardContext):
            build(unreduced)
        with pytest.raises(NotStandardContext):
            build(unclarified)


# -- soundness, completeness, minimality of premises -----------------------------------


def test_bases_reproduce_the_context_closure_exhaustively():
    rng = random.Random(61)
    for _ in range(30):
        ctx = random_standard_context(rng, rng.randint(2, 8))
        u = ctx.universe
        bases = [build(ctx) for build in BUILDERS]
        for bits in range(1 << u.size):
            x = AttributeSet(u, bits)
            expected = context_closure(ctx, x)
            for basis in bases:
                assert oracle_closure(x, basis) == expected


def test_cdub_premises_are_minimal_generators():
    rng = random.Random(62)
    for _ in range(25):
        ctx = random_standard_context(rng, rng.randint(2, 7))
        for impl in build_cdub(ctx):
            lhs = impl.lhs
            closed = context_closure(ctx, lhs)
            for m in impl.rhs:
                assert m in closed
                assert m not in lhs
                for a in lhs:
                    smaller = AttributeSet(ctx.universe, lhs.bits & ~(1 << a))
                    assert m not in context_closure(ctx, smaller)


def test_dbasis_units_are_a_subset_of_cdub_units():
    rng = random.Random(63)
    for _ in range(25):
        ctx = random_standard_context(rng, rng.randint(2, 7))
        assert unit_expand(build_dbasis(ctx)) <= unit_expand(build_cdub(ctx))


def test_merged_sizes_are_ordered():
    rng = random.Random(64)
    for _ in range(25):
        ctx = random_standard_context(rng, rng.randint(2, 8))
        cdub = build_cdub(ctx)
        dbasis = merge_same_lhs(build_dbasis(ctx))
        dg = build_dg(ctx)
        assert len(dg) <= len(dbasis) <= len(cdub)


# -- directness ------------------------------------------------------------------------


def test_built_bases_directness(ex51):
    assert verify_direct(build_cdub(ex51))
    assert verify_direct(build_dbasis(ex51))
    assert not verify_direct(build_dg(ex51))


def test_direct_witness_for_plain_rounds_on_the_ordered_basis(ex51):
    # under a simultaneous round (raw kind) the ordered basis misses exactly
    # one input: {b,d}, whose pass stops at {b,c,d}
    dbasis = build_dbasis(ex51)
    raw = Basis(dbasis.implications, kind=BasisKind.RAW, universe=dbasis.universe)
    witness = direct_witness(raw)
    assert witness is not None
    assert str(witness) == "b d"


def test_prefix_must_come_first_for_the_ordered_round(ex51):
    # one in-order sweep over tail-then-prefix misses the closure of {b,d}
    dbasis = build_dbasis(ex51)
    u = dbasis.universe
    shuffled = (
        dbasis.implications[dbasis.sigma0_len :] + dbasis.implications[: dbasis.sigma0_len]
    )
    bits = aset(u, "b d").bits
    for impl in shuffled:
        if impl.lhs.bits & bits == impl.lhs.bits:
            bits |= impl.rhs.bits
    assert bits == aset(u, "b c d").bits
    assert oracle_closure(aset(u, "b d"), dbasis).bits == u.mask


def test_random_built_bases_verify_direct():
    rng = random.Random(65)
    for _ in range(15):
        ctx = random_standard_context(rng, rng.randint(2, 7))
        assert verify_direct(build_cdub(ctx))
        assert verify_direct(build_dbasis(ctx))


def test_direct_witness_sampling_path():
    # above the exhaustive limit the check falls back to seeded sampling
    rng = random.Random(66)
    ctx = random_standard_context(rng, 8, objects=20)
    basis = build_cdub(ctx)
    assert direct_witness(basis, exhaustive_limit=4, samples=512) is None


# -- pseudo-closed sets -----------------------------------------------------------------


def test_pseudo_closed_family_on_worked_example(ex51):
    dg = build_dg(ex51)
    witnesses = enumerate_pseudo_closed(dg)
    assert [str(w.pseudo_closed) for w in witnesses] == ["d", "b c", "a c d", "a b"]
    for w in witnesses:
        assert w.closure == oracle_closure(w.pseudo_closed, dg)


def test_is_pseudo_closed_predicates(ex51):
    dg = build_dg(ex51)
    u = dg.universe
    assert is_pseudo_closed(aset(u, "d"), dg)
    assert is_pseudo_closed(aset(u, "a c d"), dg)
    assert not is_pseudo_closed(aset(u, "b d"), dg)  # {d} closes outside of it
    assert not is_pseudo_closed(aset(u, "c"), dg)  # already closed
    assert not is_pseudo_closed(u.empty(), dg)
    assert not is_pseudo_closed(u.full(), dg)
    with pytest.raises(UniverseMismatch):
        is_pseudo_closed(Universe(size=4).empty(), dg)


def test_dg_lhs_are_exactly_the_pseudo_closed_sets():
    rng = random.Random(67)
    for _ in range(20):
        ctx = random_standard_context(rng, rng.randint(2, 7))
        dg = build_dg(ctx)
        family = {w.pseudo_closed.bits for w in enumerate_pseudo_closed(dg)}
        assert {impl.lhs.bits for impl in dg} == family
        for impl in dg:
            assert is_pseudo_closed(impl.lhs, dg)


def test_dg_rhs_is_closure_minus_premise(ex51):
    for impl in build_dg(ex51):
        closed = context_closure(ex51, impl.lhs)
        assert impl.rhs.bits == closed.bits & ~impl.lhs.bits


# -- equivalence and minimality ------------------------------------------------------------


def test_check_equiv_positive(ex51):
    bases = [build(ex51) for build in BUILDERS]
    for i in range(3):
        for j in range(3):
            assert check_equiv(bases[i], bases[j])


def test_check_equiv_negative(ex51):
    dg = build_dg(ex51)
    for drop in range(len(dg)):
        impls = [impl for i, impl in enumerate(dg) if i != drop]
        weaker = Basis(impls, kind=BasisKind.RAW, universe=dg.universe)
        assert not check_equiv(dg, weaker)


def test_check_equiv_rejects_foreign_bases(ex51):
    dg = build_dg(ex51)
    other = Basis([], universe=Universe(size=4))
    with pytest.raises(UniverseMismatch):
        check_equiv(dg, other)


def test_dg_is_minimum_and_irredundant():
    rng = random.Random(68)
    for _ in range(15):
        ctx = random_standard_context(rng, rng.randint(2, 7))
        dg = build_dg(ctx)
        cdub = build_cdub(ctx)
        dbasis = build_dbasis(ctx)
        assert len(dg) <= len(cdub)
        assert check_equiv(dg, cdub)
        assert check_equiv(dg, dbasis)
        for drop in range(len(dg)):
            impls = [impl for i, impl in enumerate(dg) if i != drop]
            weaker = Basis(impls, kind=BasisKind.RAW, universe=dg.universe)
            assert not check_equiv(dg, weaker)


def test_bases_induce_the_same_closed_family():
    rng = random.Random(69)
    for _ in range(10):
        ctx = random_standard_context(rng, rng.randint(2, 7))
        u = ctx.universe
        expected = closed_family(ctx)
        for build in BUILDERS:
            basis = build(ctx)
            got = frozenset(
                bits
                for bits in range(1 << u.size)
                if oracle_closure(AttributeSet(u, bits), basis).bits == bits
            )
            assert got == expected
