from fractions import Fraction

import pytest

from codelattice.gf2core import BitMatrix
from codelattice.lattice import (
    ConstructionError,
    CongruenceLattice,
    EnumerationBudgetError,
    EvenLatticeError,
    Frame,
    FrameInvalidError,
    MixedNormError,
    NotDoublyEvenError,
    code_lattice_vectors,
    construct_A4,
    construct_L_odd,
    construct_LA,
    construct_LB,
    construct_LC,
    enumerate_short_vectors,
    lattice_shadow_counts,
    lll_reduce,
    odd_shadow_theta_from_code,
    shadow_norm2_split,
    short_vector_list,
    short_vectors,
    spherical_design_moments,
    standard_frame,
    theta_from_code,
    verify_frame,
    z4_code_from_4frame,
)
from codelattice.models import FrameType, LatticeConstruction, ValidationError, Z4Type
from codelattice.qseries import ThetaSeries, extremal_odd_theta_family, fit_theta, shadow_theta
from codelattice.selfdual import SelfDualCode
from codelattice.z4codes import NotSelfDualError, Z4Code, z4_self_dual_check


E8_SHELLS = {0: 1, 2: 240, 4: 2160}


def _shells(theta: ThetaSeries) -> dict[Fraction, int]:
    return theta.shells()


def test_congruence_lattice_from_basis() -> None:
    z2 = CongruenceLattice.from_basis(1, [[1, 0], [0, 1]])
    assert z2.is_unimodular()
    assert not z2.is_even()
    assert z2.contains([3, -2])
    with pytest.raises(ValidationError):
        CongruenceLattice.from_basis(1, [[1, 2], [2, 4]])


def test_lll_reduce() -> None:
    reduced = lll_reduce([[1, 0], [5, 1]])
    assert sorted(sum(x * x for x in row) for row in reduced) == [1, 1]


def test_la_of_e8(hamming8: BitMatrix) -> None:
    la = construct_LA(hamming8)
    assert la.is_unimodular()
    assert la.is_even()
    assert _shells(short_vectors(la, 4)) == E8_SHELLS
    assert _shells(theta_from_code(LatticeConstruction.LA, hamming8, 4)) == E8_SHELLS


def test_lb_of_e8(hamming8: BitMatrix) -> None:
    lb = construct_LB(hamming8)
    assert lb.gram_determinant() == 4
    assert not lb.is_unimodular()
    enumerated = short_vectors(lb, 2)
    assert enumerated[2] == 112
    assert _shells(enumerated) == _shells(theta_from_code(LatticeConstruction.LB, hamming8, 2))


def test_lc_of_e8_is_e8(hamming8: BitMatrix) -> None:
    lc = construct_LC(hamming8)
    assert lc.is_unimodular()
    assert lc.is_even()
    assert _shells(short_vectors(lc, 4)) == E8_SHELLS
    assert _shells(theta_from_code(LatticeConstruction.LC, hamming8, 4)) == E8_SHELLS


def test_odd_neighbour_of_e8_is_z8(hamming8: BitMatrix) -> None:
    lodd = construct_L_odd(hamming8)
    assert lodd.is_unimodular()
    assert not lodd.is_even()
    assert short_vectors(lodd, 1)[1] == 16
    assert theta_from_code(LatticeConstruction.LODD, hamming8, 1)[1] == 16
    assert lattice_shadow_counts(lodd, 2)[2] == 256
    assert odd_shadow_theta_from_code(hamming8, 2)[2] == 256


def test_shadow_of_even_lattice(hamming8: BitMatrix) -> None:
    with pytest.raises(EvenLatticeError):
        lattice_shadow_counts(construct_LA(hamming8), 2)


def test_constructions_need_doubly_even_codes(i2_power4: SelfDualCode) -> None:
    with pytest.raises(NotDoublyEvenError):
        construct_LA(i2_power4.gen)
    with pytest.raises(NotDoublyEvenError):
        theta_from_code(LatticeConstruction.LB, i2_power4.gen, 2)


def test_a4_of_octacode_is_e8(octacode: Z4Code) -> None:
    a4 = construct_A4(octacode)
    assert a4.is_unimodular()
    assert a4.is_even()
    assert _shells(short_vectors(a4, 4)) == E8_SHELLS
    with pytest.raises(NotSelfDualError):
        construct_A4(Z4Code.from_strings(["1100"]))


def test_parallel_enumeration_agrees(hamming8: BitMatrix) -> None:
    la = construct_LA(hamming8)
    assert short_vectors(la, 4, threads=2) == short_vectors(la, 4)


def test_enumeration_budget(hamming8: BitMatrix) -> None:
    with pytest.raises(EnumerationBudgetError):
        enumerate_short_vectors(construct_LA(hamming8), 4, max_nodes=1)


def test_vector_listing_matches_enumeration(hamming8: BitMatrix) -> None:
    listed = code_lattice_vectors(LatticeConstruction.LA, hamming8, 2)
    assert len(listed) == 240
    assert listed == short_vector_list(construct_LA(hamming8), 2)
    assert len(code_lattice_vectors(LatticeConstruction.LB, hamming8, 2)) == 112


def test_frames(hamming8: BitMatrix) -> None:
    la, lb, lc = construct_LA(hamming8), construct_LB(hamming8), construct_LC(hamming8)
    assert verify_frame(la, standard_frame(la)) is FrameType.A
    assert verify_frame(lb, standard_frame(lb)) is FrameType.B
    assert verify_frame(lc, standard_frame(lc)) is FrameType.C
    skewed = Frame(tuple(tuple(1 for _ in range(8)) for _ in range(8)))
    assert verify_frame(la, skewed) is FrameType.INVALID


def test_standard_frame_needs_square_scale(octacode: Z4Code) -> None:
    with pytest.raises(ConstructionError):
        standard_frame(construct_A4(octacode))


def test_code_from_4frame(hamming8: BitMatrix) -> None:
    la = construct_LA(hamming8)
    code = z4_code_from_4frame(la, standard_frame(la))
    assert z4_self_dual_check(code) is Z4Type.TYPE_II
    assert short_vectors(construct_A4(code), 2)[2] == 240
    with pytest.raises(FrameInvalidError):
        z4_code_from_4frame(la, Frame(tuple(tuple(1 for _ in range(8)) for _ in range(8))))


def test_spherical_designs(hamming8: BitMatrix) -> None:
    roots = short_vector_list(construct_LA(hamming8), 2)
    assert spherical_design_moments(roots, 3)
    units = [tuple(s if j == i else 0 for j in range(4)) for i in range(4) for s in (1, -1)]
    assert spherical_design_moments(units, 3)
    assert not spherical_design_moments([(1, 0), (-1, 0)], 2)
    with pytest.raises(MixedNormError):
        spherical_design_moments([(1, 0), (1, 1)], 1)


def test_lb_of_extremal_code(extremal_d40: SelfDualCode) -> None:
    theta = theta_from_code(LatticeConstruction.LB, extremal_d40.gen, 4, extremal_d40.distribution)
    assert _shells(theta) == {0: 1, 4: 39600}


def test_lc_of_extremal_code(extremal_d40: SelfDualCode) -> None:
    theta = theta_from_code(LatticeConstruction.LC, extremal_d40.gen, 6, extremal_d40.distribution)
    assert _shells(theta) == {0: 1, 4: 39600, 6: 93043200}


def test_odd_neighbour_of_extremal_code(extremal_d40: SelfDualCode) -> None:
    theta = theta_from_code(LatticeConstruction.LODD, extremal_d40.gen, 5, extremal_d40.distribution)
    assert _shells(theta) == {0: 1, 4: 39600, 5: 1048576}
    shadow = odd_shadow_theta_from_code(extremal_d40.gen, 6)
    assert _shells(shadow) == {2: 80, 4: 36480, 6: 87938240}
    assert shadow_norm2_split(extremal_d40.gen) == (80, 0)


def test_odd_neighbour_fits_the_extremal_family(extremal_d40: SelfDualCode) -> None:
    theta = theta_from_code(LatticeConstruction.LODD, extremal_d40.gen, 5, extremal_d40.distribution)
    a = fit_theta(theta, 40)
    assert a[4] == 256 * 80
    expected_theta, expected_shadow = extremal_odd_theta_family().at(80)
    assert theta[4] == expected_theta[4]
    assert shadow_theta(a, 40, 24).terms() == {k: v for k, v in expected_shadow.items() if v}


@pytest.mark.long
def test_a4_of_d1(d1: Z4Code) -> None:
    a4 = construct_A4(d1)
    assert a4.is_unimodular()
    assert not a4.is_even()
    theta = short_vectors(a4, 4, threads=4)
    assert theta.min_norm() == 4
    assert theta[4] == 19120
    assert fit_theta(theta, 40) == [1, -80, 1360, -2560, 0, 0]


@pytest.mark.long
def test_lb_enumeration_matches_the_code_series(extremal_d40: SelfDualCode) -> None:
    lb = construct_LB(extremal_d40.gen)
    assert short_vectors(lb, 4, threads=4)[4] == 39600
