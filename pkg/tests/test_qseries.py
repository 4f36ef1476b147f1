from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codelattice.models import JacobiKind, ValidationError
from codelattice.qseries import (
    InconsistentSeriesError,
    InvalidAlphaError,
    QSeries,
    ThetaError,
    ThetaSeries,
    extremal_odd_theta_family,
    fit_theta,
    jacobi_series,
    shadow_theta,
    theta_from_coefficients,
    theta_matches,
    validate_alpha,
)


def _terms(kind: JacobiKind, order: int) -> dict[Fraction, int]:
    return jacobi_series(kind, order).terms()


def test_jacobi_series_expansions() -> None:
    assert _terms(JacobiKind.THETA3, 16) == {0: 1, 1: 2, 4: 2}
    assert _terms(JacobiKind.THETA4, 16) == {0: 1, 1: -2, 4: 2}
    assert _terms(JacobiKind.THETA2, 12) == {Fraction(1, 4): 2, Fraction(9, 4): 2}
    assert _terms(JacobiKind.DELTA8, 12) == {1: 1, 2: -8, 3: 28}


def test_theta2_eighth_power() -> None:
    terms = jacobi_series(JacobiKind.THETA2, 16).power(8).terms()
    assert min(terms) == 2
    assert terms[Fraction(2)] == 256


def test_jacobi_identity() -> None:
    order = 80
    t2, t3, t4 = (jacobi_series(k, order).power(4) for k in (JacobiKind.THETA2, JacobiKind.THETA3, JacobiKind.THETA4))
    assert t3 == t2 + t4


def test_order_limits() -> None:
    with pytest.raises(ValidationError):
        jacobi_series(JacobiKind.THETA3, -1)


def test_series_validation() -> None:
    with pytest.raises(ValidationError):
        QSeries(())
    series = QSeries((1, 0, 0, 0, 2))
    assert series.coefficient(1) == 2
    with pytest.raises(ValidationError):
        series.coefficient(Fraction(1, 3))
    with pytest.raises(ValidationError):
        series.coefficient(2)


def test_theta_series_validation() -> None:
    with pytest.raises(ValidationError):
        ThetaSeries({Fraction(0): -1}, Fraction(1))
    with pytest.raises(ValidationError):
        ThetaSeries({Fraction(3): 1}, Fraction(2))
    with pytest.raises(InconsistentSeriesError):
        ThetaSeries({Fraction(0): 1, Fraction(1, 3): 2}, Fraction(1)).as_qseries()


def test_fit_e8() -> None:
    theta = ThetaSeries({Fraction(0): 1, Fraction(2): 240}, Fraction(2))
    assert fit_theta(theta, 8) == [1, -16]
    assert theta.kissing_number() == 240


def test_fit_integer_lattices() -> None:
    assert fit_theta(ThetaSeries({Fraction(0): 1, Fraction(1): 16}, Fraction(1)), 8) == [1, 0]
    assert fit_theta(ThetaSeries({Fraction(0): 1, Fraction(1): 32}, Fraction(1)), 16) == [1, 0, 0]


def test_fit_rejects_inconsistent_series() -> None:
    with pytest.raises(InconsistentSeriesError):
        fit_theta(ThetaSeries({Fraction(0): 2}, Fraction(1)), 8)
    with pytest.raises(InconsistentSeriesError):
        fit_theta(ThetaSeries({Fraction(0): 1, Fraction(2): 200}, Fraction(2)), 8)
    with pytest.raises(InconsistentSeriesError):
        fit_theta(ThetaSeries({Fraction(0): 1}, Fraction(0)), 24)


def test_shadow_of_even_lattice_is_itself() -> None:
    shadow = shadow_theta([1, -16], 8, 12)
    assert shadow.terms() == theta_from_coefficients([1, -16], 8, 12).terms()
    assert shadow.terms() == {0: 1, 2: 240}


def test_shadows_of_integer_lattices() -> None:
    assert shadow_theta([1], 1, 4).terms() == {Fraction(1, 4): 2}
    assert shadow_theta([1, 0], 8, 8).terms() == {2: 256}


def test_shadow_must_be_integral() -> None:
    with pytest.raises(InconsistentSeriesError):
        shadow_theta([1, 1], 8, 8)


def test_extremal_odd_family() -> None:
    family = extremal_odd_theta_family()
    alpha = family.alpha
    assert all(family.theta[k] == 0 for k in (1, 2, 3))
    assert family.theta[4] == 19120 + 256 * alpha
    assert family.theta[5] == 1376256 - 4096 * alpha
    assert family.shadow[Fraction(2)] == alpha
    assert family.shadow[Fraction(4)] == 40960 - 56 * alpha
    assert family.shadow[Fraction(6)] == 87818240 + 1500 * alpha
    assert family.a[4] == 256 * alpha


def test_family_member_with_eighty_shadow_vectors() -> None:
    theta, shadow = extremal_odd_theta_family().at(80)
    assert theta[4] == 39600
    assert theta[5] == 1048576
    assert shadow[Fraction(2)] == 80
    assert shadow[Fraction(4)] == 36480
    assert shadow[Fraction(6)] == 87938240


def test_dimension_without_a_free_coefficient() -> None:
    with pytest.raises(ThetaError):
        extremal_odd_theta_family(32)


@pytest.mark.parametrize("alpha", [-2, 3, 79, 82])
def test_invalid_alpha(alpha: int) -> None:
    with pytest.raises(InvalidAlphaError):
        validate_alpha(alpha)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=40))
def test_every_even_alpha_gives_nonnegative_counts(half: int) -> None:
    theta, shadow = extremal_odd_theta_family().at(2 * half)
    assert all(v >= 0 for v in theta.values())
    assert all(v >= 0 for v in shadow.values())


def test_theta_matches() -> None:
    theta = ThetaSeries({Fraction(0): 1, Fraction(2): 240}, Fraction(2))
    assert theta_matches(theta, {2: 240, 1: 0})
    assert not theta_matches(theta, {2: 239})
