import math

import pytest

from codelattice.classify import (
    BudgetExceededError,
    EvenWeightExtensionError,
    InputNotQualifyingError,
    brute_force_classes,
    enumerate_self_dual_spaces,
    classify_via_neighbors,
    extend_by_two,
    generate,
    mass_formula_total,
    parent_test,
    subcode_functionals,
    subcode_sweep,
)
from codelattice.gf2core import BitMatrix, BitVector
from codelattice.models import CodeKind, ValidationError
from codelattice.selfdual import SelfDualCode, check_extremal_profile, verify_self_dual


@pytest.mark.parametrize("n, total", [(2, 1), (4, 3), (6, 15), (8, 135), (12, 75735)])
def test_mass_formula(n: int, total: int) -> None:
    assert mass_formula_total(n) == total


def test_extend_by_two(e8_code: SelfDualCode) -> None:
    child = extend_by_two(e8_code, BitVector.from_string("10000000"))
    assert child.n == 10
    assert child.kind is CodeKind.SINGLY_EVEN
    with pytest.raises(EvenWeightExtensionError):
        extend_by_two(e8_code, BitVector.from_string("11000000"))
    with pytest.raises(ValidationError):
        extend_by_two(e8_code, BitVector.from_string("100"))


def test_brute_force_length_8() -> None:
    classes = brute_force_classes(8)
    assert sorted(count for _, count in classes.values()) == [30, 105]
    assert sum(count for _, count in classes.values()) == mass_formula_total(8)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, pytest.param(12, marks=pytest.mark.long)])
def test_every_self_dual_code_is_built_once(n: int) -> None:
    spaces = enumerate_self_dual_spaces(n)
    assert len(spaces) == mass_formula_total(n)
    assert len({s.rows for s in spaces}) == len(spaces)
    assert all(verify_self_dual(s).n == n for s in spaces[:200])


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, pytest.param(12, marks=pytest.mark.long)])
def test_generation_agrees_with_brute_force(n: int) -> None:
    run = generate(n, 2)
    assert {r.form.certificate_hash for r in run.classes} == set(brute_force_classes(n))
    assert run.mass() == mass_formula_total(n)


def test_length_8_classes(e8_code: SelfDualCode) -> None:
    run = generate(8, 2)
    assert run.counts_by_kind() == (1, 1)
    assert sorted(r.aut_order for r in run.classes) == [384, 1344]
    for record in run.classes:
        assert parent_test(record.code)


@pytest.mark.parametrize("n, floor, counts", [(16, 4, (2, 1)), (24, 8, (1, 0))])
def test_classes_above_a_floor(n: int, floor: int, counts: tuple[int, int]) -> None:
    run = generate(n, floor, threads=2)
    assert run.counts_by_kind() == counts
    assert all(r.minimum_weight >= floor for r in run.classes)
    assert run.stats.parents_processed > 0


def test_golay_code_group_order() -> None:
    (golay,) = generate(24, 8).classes
    assert golay.aut_order == 244823040


@pytest.mark.long
def test_length_32_extremal_classes() -> None:
    run = generate(32, 8, threads=4)
    assert run.counts_by_kind() == (5, 3)


def test_generation_limits() -> None:
    with pytest.raises(ValidationError):
        generate(9, 2)
    with pytest.raises(ValidationError):
        generate(8, 6)
    with pytest.raises(BudgetExceededError):
        generate(34, 8)


def test_subcodes_of_e8(e8_code: SelfDualCode) -> None:
    sweep = subcode_sweep(e8_code, 0)
    assert sweep.subcodes == 7
    assert sweep.orbit_sizes == [7]
    assert sweep.classes == 1
    assert sweep.minimum_weights == [4]


def test_e8_has_no_extremal_singly_even_neighbour(e8_code: SelfDualCode) -> None:
    assert classify_via_neighbors([e8_code], 0) == []


def test_neighbour_inputs_must_qualify(i2_power4: SelfDualCode, e8_code: SelfDualCode) -> None:
    with pytest.raises(InputNotQualifyingError):
        classify_via_neighbors([i2_power4], 1)
    with pytest.raises(InputNotQualifyingError):
        classify_via_neighbors([e8_code], 2)


def test_functionals_avoid_every_tetrad(bmap_c10: SelfDualCode) -> None:
    assert len(subcode_functionals(bmap_c10, 10)) == 1 << 10
    assert len(subcode_functionals(bmap_c10, 10, all_subcodes=True)) == (1 << 19) - 1


def test_pipeline_neighbour_is_extremal(extremal_c40: SelfDualCode) -> None:
    assert extremal_c40.kind is CodeKind.SINGLY_EVEN
    assert extremal_c40.minimum_weight == 8


@pytest.mark.long
def test_classify_neighbours_of_bmap(bmap_c10: SelfDualCode) -> None:
    found = classify_via_neighbors([bmap_c10], 10)
    assert len(found) == 1
    assert all(check_extremal_profile(c).beta == 10 for c in found)


def test_brute_force_rejects_long_lengths() -> None:
    with pytest.raises(BudgetExceededError):
        brute_force_classes(14)


def test_mass_of_length_8_by_hand() -> None:
    assert math.factorial(8) // 1344 + math.factorial(8) // 384 == mass_formula_total(8)
    assert verify_self_dual(BitMatrix.from_strings(["11"])).kind is CodeKind.SINGLY_EVEN


def test_tetrad_avoiding_subcodes_form_one_class(bmap_c10: SelfDualCode) -> None:
    sweep = subcode_sweep(bmap_c10, 10)
    assert sweep.subcodes == 1024
    assert sweep.classes == 1
    assert sweep.minimum_weights == [8]
