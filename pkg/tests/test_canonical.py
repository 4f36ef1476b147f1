import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codelattice.canonical import (
    LengthCapError,
    SearchBudgetError,
    are_equivalent,
    automorphism_order,
    canonical_form,
    canonical_search,
    group_order,
    pair_orbit,
    point_orbits,
)
from codelattice.classify import generate
from codelattice.gf2core import BitMatrix, dot
from codelattice.selfdual import SelfDualCode, verify_self_dual


def test_group_order_of_small_groups() -> None:
    assert group_order([(1, 0, 2)], 3) == 2
    assert group_order([(1, 2, 0), (1, 0, 2)], 3) == 6
    assert group_order([], 4) == 1


def test_orbits_of_points_and_pairs() -> None:
    gens = [(1, 0, 3, 2)]
    assert point_orbits(gens, 4) == [0, 0, 2, 2]
    assert pair_orbit(gens, frozenset({0, 2})) == {frozenset({0, 2}), frozenset({1, 3})}


def test_automorphism_group_of_e8(e8_code: SelfDualCode) -> None:
    info = automorphism_order(e8_code.gen)
    assert info.order == 1344
    for g in info.generators:
        assert e8_code.gen.permuted(g).same_space(e8_code.gen)


def test_automorphism_group_of_i2_power(i2_power4: SelfDualCode) -> None:
    assert automorphism_order(i2_power4.gen).order == 384


def test_inequivalent_codes_have_different_certificates(e8_code: SelfDualCode, i2_power4: SelfDualCode) -> None:
    assert canonical_form(e8_code.gen).certificate_hash != canonical_form(i2_power4.gen).certificate_hash
    assert not are_equivalent(e8_code.gen, i2_power4.gen)


def test_canonical_form_spans_a_permuted_copy(e8_code: SelfDualCode) -> None:
    form = canonical_form(e8_code.gen)
    assert e8_code.gen.permuted(form.ordering).same_space(form.canonical_generator)


def test_length_cap() -> None:
    with pytest.raises(LengthCapError):
        canonical_search(BitMatrix(65, (1,)))


def test_length_cap_from_caller(e8_code: SelfDualCode) -> None:
    with pytest.raises(LengthCapError):
        canonical_search(e8_code.gen, max_length=6)
    with pytest.raises(LengthCapError):
        automorphism_order(e8_code.gen, max_length=6)
    assert canonical_form(e8_code.gen, max_length=8).certificate_hash == canonical_form(e8_code.gen).certificate_hash


def test_node_budget(e8_code: SelfDualCode) -> None:
    with pytest.raises(SearchBudgetError):
        canonical_search(e8_code.gen, max_nodes=1)


def _neighbour(code: SelfDualCode, x: int) -> SelfDualCode:
    """(C meet x-perp) + x for an even-weight x outside C, else C itself."""
    if x.bit_count() % 2 or code.contains(x):
        return code
    rows = list(code.gen.rows)
    pivot = next(g for g in rows if dot(g, x))
    kept = [g ^ pivot if dot(g, x) else g for g in rows if g != pivot]
    return verify_self_dual(BitMatrix(code.n, (*kept, x)))


@st.composite
def self_dual_codes(draw: st.DrawFn) -> SelfDualCode:
    n = draw(st.sampled_from(range(8, 25, 2)))
    code = verify_self_dual(BitMatrix(n, tuple(0b11 << (2 * i) for i in range(n // 2))))
    for x in draw(st.lists(st.integers(min_value=1, max_value=(1 << n) - 1), min_size=3, max_size=8)):
        code = _neighbour(code, x)
    return code


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_certificate_is_permutation_invariant(data: st.DataObject) -> None:
    code = data.draw(self_dual_codes())
    p = data.draw(st.permutations(list(range(code.n))))
    first = canonical_form(code.gen)
    second = canonical_form(code.gen.permuted(p))
    assert first.certificate() == second.certificate()
    assert first.certificate_hash == second.certificate_hash


def _direct_sum(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix(a.n + b.n, (*a.rows, *(row << a.n for row in b.rows)))


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_automorphisms_of_a_doubled_code(n: int) -> None:
    for record in generate(n, 2).classes:
        order = automorphism_order(record.code.gen).order
        doubled = automorphism_order(_direct_sum(record.code.gen, record.code.gen)).order
        assert doubled % (2 * order * order) == 0
