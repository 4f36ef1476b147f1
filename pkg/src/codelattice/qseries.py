"""Truncated q-series, Jacobi theta functions and theta series of unimodular lattices.

Exponents are stored in quarter steps so that theta_2, with exponents
(m + 1/2)^2, fits the same integer grid as theta_3, theta_4 and Delta_8.
A unimodular lattice of dimension n has

    theta_L = sum_j a_j theta_3(q)^(n-8j) Delta_8(q)^j
    theta_S = sum_j (-1)^j 16^(-j) a_j theta_2(q)^(n-8j) theta_4(q^2)^(8j)

for one coefficient vector a_0 .. a_floor(n/8).
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Union

import numpy as np
import sympy

from codelattice.models import ComputationError, JacobiKind, ValidationError


logger = logging.getLogger(__name__)

QUARTER = 4
MAX_ORDER = 10_000
EXTREMAL_ODD_LENGTH = 40
MAX_ALPHA = 80

Number = Union[int, Fraction]


class ThetaError(ComputationError):
    """Base exception for theta-series computations."""


class InconsistentSeriesError(ThetaError):
    """Raised when a series is not of the unimodular shape."""


class InvalidAlphaError(ThetaError):
    """Raised for a shadow parameter that no extremal lattice can have."""


@dataclass(frozen=True)
class QSeries:
    """sum_e coeffs[e] q^(e/4) for 0 <= e <= order."""

    coeffs: tuple[int, ...]

    def validate(self) -> None:
        """Validate the coefficient vector.

        Raises:
            ValidationError: If the series is empty or holds non-integers.
        """
        if not self.coeffs:
            raise ValidationError("a q-series needs at least the constant term")
        if any(not isinstance(c, (int, np.integer)) for c in self.coeffs):
            raise ValidationError("q-series coefficients must be integers")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    @classmethod
    def from_array(cls, values: Any) -> "QSeries":
        return cls(tuple(int(v) for v in values))

    @property
    def order(self) -> int:
        """Truncation order in quarter steps."""
        return len(self.coeffs) - 1

    def _array(self, order: int) -> np.ndarray:
        out = np.zeros(order + 1, dtype=object)
        known = min(order, self.order) + 1
        out[:known] = self.coeffs[:known]
        return out

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coeffs[: order + 1])

    def __add__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        return QSeries.from_array(self._array(order) + other._array(order))

    def __mul__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        left, right = self._array(order), other._array(order)
        out = np.zeros(order + 1, dtype=object)
        for e, c in enumerate(left):
            if c:
                out[e:] += c * right[: order + 1 - e]
        return QSeries.from_array(out)

    def scale(self, factor: int) -> "QSeries":
        return QSeries(tuple(factor * c for c in self.coeffs))

    def power(self, k: int) -> "QSeries":
        if k < 0:
            raise ValidationError(f"negative power {k}")
        result = QSeries((1,) + (0,) * self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def substitute_square(self) -> "QSeries":
        """The series in q^2, kept to the same order."""
        out = [0] * (self.order + 1)
        for e in range(0, self.order // 2 + 1):
            out[2 * e] = self.coeffs[e]
        return QSeries(tuple(out))

    def coefficient(self, exponent: Number) -> int:
        """Coefficient of q^exponent; exponent must lie on the quarter grid."""
        e = Fraction(exponent) * QUARTER
        if e.denominator != 1 or e < 0 or e > self.order:
            raise ValidationError(f"exponent {exponent} outside the quarter grid up to {self.order}")
        return self.coeffs[int(e)]

    def terms(self) -> dict[Fraction, int]:
        """Nonzero terms as {exponent: coefficient}."""
        return {Fraction(e, QUARTER): c for e, c in enumerate(self.coeffs) if c}

    def to_json(self) -> dict[str, int]:
        return {_fraction_key(e): c for e, c in self.terms().items()}


def _fraction_key(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ThetaSeries:
    """Vector counts per norm, exact up to max_norm."""

    counts: dict[Fraction, int] = field(default_factory=dict)
    max_norm: Fraction = Fraction(0)

    def validate(self) -> None:
        """Validate the series.

        Raises:
            ValidationError: If a count is negative or a norm lies beyond max_norm.
        """
        for norm, count in self.counts.items():
            if count < 0:
                raise ValidationError(f"negative count at norm {norm}")
            if norm < 0 or norm > self.max_norm:
                raise ValidationError(f"norm {norm} outside [0, {self.max_norm}]")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    def __getitem__(self, norm: Number) -> int:
        return self.counts.get(Fraction(norm), 0)

    def shells(self) -> dict[Fraction, int]:
        return {k: self.counts[k] for k in sorted(self.counts) if self.counts[k]}

    def min_norm(self) -> Optional[Fraction]:
        nonzero = [k for k, v in self.counts.items() if k > 0 and v]
        return min(nonzero) if nonzero else None

    def kissing_number(self) -> int:
        low = self.min_norm()
        return 0 if low is None else self.counts[low]

    def to_json(self) -> dict[str, int]:
        return {_fraction_key(k): v for k, v in self.shells().items()}

    def as_qseries(self) -> QSeries:
        order = int(self.max_norm * QUARTER)
        out = [0] * (order + 1)
        for norm, count in self.counts.items():
            e = norm * QUARTER
            if e.denominator != 1:
                raise InconsistentSeriesError(f"norm {norm} is off the quarter grid")
            out[int(e)] = count
        return QSeries(tuple(out))


def _theta3(order: int) -> np.ndarray:
    out = np.zeros(order + 1, dtype=object)
    m = 0
    while QUARTER * m * m <= order:
        out[QUARTER * m * m] += 1 if m == 0 else 2
        m += 1
    return out


def _theta4(order: int) -> np.ndarray:
    out = np.zeros(order + 1, dtype=object)
    m = 0
    while QUARTER * m * m <= order:
        out[QUARTER * m * m] += 1 if m == 0 else 2 * (-1) ** m
        m += 1
    return out


def _theta2(order: int) -> np.ndarray:
    out = np.zeros(order + 1, dtype=object)
    m = 0
    while (2 * m + 1) ** 2 <= order:
        out[(2 * m + 1) ** 2] += 2
        m += 1
    return out


def _delta8(order: int) -> np.ndarray:
    """q prod (1 - q^(2m-1))^8 (1 - q^(4m))^8, built in whole steps."""
    top = order // QUARTER
    series = np.zeros(top + 1, dtype=object)
    if top >= 1:
        series[1] = 1
    for a in range(1, top + 1):
        if a % 2 == 1 or a % 4 == 0:
            for _ in range(8):
                series[a:] = series[a:] - series[:-a]
    out = np.zeros(order + 1, dtype=object)
    out[::QUARTER] = series
    return out


@lru_cache(maxsize=64)
def jacobi_series(kind: JacobiKind, order: int) -> QSeries:
    """Exact expansion to order quarter steps.

    Raises:
        ValidationError: If the order is negative or above the supported maximum.
    """
    if order < 0 or order > MAX_ORDER:
        raise ValidationError(f"order must be in [0, {MAX_ORDER}], got {order}")
    builders = {
        JacobiKind.THETA2: _theta2,
        JacobiKind.THETA3: _theta3,
        JacobiKind.THETA4: _theta4,
        JacobiKind.DELTA8: _delta8,
    }
    return QSeries.from_array(builders[kind](order))


def _basis_term(n: int, j: int, order: int) -> QSeries:
    theta3 = jacobi_series(JacobiKind.THETA3, order)
    delta8 = jacobi_series(JacobiKind.DELTA8, order)
    return theta3.power(n - 8 * j) * delta8.power(j)


def _shadow_term(n: int, j: int, order: int) -> QSeries:
    theta2 = jacobi_series(JacobiKind.THETA2, order)
    theta4_sq = jacobi_series(JacobiKind.THETA4, order).substitute_square()
    return theta2.power(n - 8 * j) * theta4_sq.power(8 * j)


def theta_from_coefficients(a: Sequence[int], n: int, order: int) -> QSeries:
    """sum_j a_j theta_3^(n-8j) Delta_8^j to order quarter steps."""
    total = QSeries((0,) * (order + 1))
    for j, aj in enumerate(a):
        if aj:
            total = total + _basis_term(n, j, order).scale(aj)
    return total


def _solve_shells(shells: Sequence[int], n: int, order: int) -> list[int]:
    """Triangular solve for a_0 .. a_k from the shells at norms 0 .. k."""
    columns = [_basis_term(n, j, order) for j in range(len(shells))]
    a: list[int] = []
    for k, count in enumerate(shells):
        a.append(count - sum(a[j] * columns[j].coeffs[QUARTER * k] for j in range(k)))
    return a


def fit_theta(theta: ThetaSeries, n: int) -> list[int]:
    """Solve for a_0 .. a_floor(n/8) from the shells at norms 0 .. floor(n/8).

    When only the top shell is missing and 8 divides n, a_(n/8) = 0 from
    the vanishing constant term of the shadow series. Shells beyond
    floor(n/8) that the input carries are checked against the fit.

    Raises:
        InconsistentSeriesError: If the input is not the theta series of an
            n-dimensional unimodular lattice.
    """
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n}")
    top = n // 8
    if theta[0] != 1:
        raise InconsistentSeriesError(f"constant term is {theta[0]}, expected 1")
    known = int(theta.max_norm)
    if known < top - 1 or (known < top and n % 8):
        raise InconsistentSeriesError(f"need shells up to norm {top}, have {theta.max_norm}")
    order = QUARTER * max(top, known)
    a = _solve_shells([theta[k] for k in range(min(top, known) + 1)], n, order)
    if known < top:
        logger.info(f"Norm-{top} shell unavailable; taking a_{top} = 0 from the shadow constant")
        a.append(0)
    for norm in theta.counts:
        if norm.denominator != 1:
            raise InconsistentSeriesError(f"norm {norm} is not integral for a unimodular lattice")
    fitted = theta_from_coefficients(a, n, order)
    for k in range(known + 1):
        if fitted.coeffs[QUARTER * k] != theta[k]:
            raise InconsistentSeriesError(
                f"shell at norm {k} has {theta[k]} vectors, the fit predicts {fitted.coeffs[QUARTER * k]}"
            )
    return a


def _rational(x: Number) -> sympy.Rational:
    value = Fraction(x)
    return sympy.Rational(value.numerator, value.denominator)


def _shadow_fractions(a: Sequence[Any], n: int, order: int) -> list[Any]:
    total: list[Any] = [0] * (order + 1)
    for j, aj in enumerate(a):
        if aj == 0:
            continue
        weight = aj * Fraction((-1) ** j, 16**j)
        term = _shadow_term(n, j, order)
        for e, c in enumerate(term.coeffs):
            if c:
                total[e] += weight * c
    return total


def shadow_theta(a: Sequence[int], n: int, order: int) -> QSeries:
    """Shadow series from the a_j, to order quarter steps.

    Raises:
        InconsistentSeriesError: If a coefficient comes out non-integral.
    """
    values = _shadow_fractions(a, n, order)
    out = []
    for e, v in enumerate(values):
        v = Fraction(v)
        if v.denominator != 1:
            raise InconsistentSeriesError(f"shadow coefficient at q^{Fraction(e, QUARTER)} is {v}")
        out.append(int(v))
    return QSeries(tuple(out))


def validate_alpha(alpha: int) -> None:
    """An extremal odd 40-dimensional lattice has alpha even and 0 <= alpha <= 80.

    Raises:
        InvalidAlphaError: Otherwise.
    """
    if alpha % 2 or not 0 <= alpha <= MAX_ALPHA:
        raise InvalidAlphaError(f"alpha must be even with 0 <= alpha <= {MAX_ALPHA}, got {alpha}")


@dataclass(frozen=True)
class ExtremalThetaFamily:
    """Theta and shadow coefficients of extremal odd lattices, as polynomials in alpha."""

    n: int
    alpha: sympy.Symbol
    a: tuple[sympy.Expr, ...]
    theta: dict[int, sympy.Expr]
    shadow: dict[Fraction, sympy.Expr]

    def at(self, alpha: int) -> tuple[dict[int, int], dict[Fraction, int]]:
        """Integer coefficients at a validated alpha."""
        validate_alpha(alpha)
        theta = {k: int(v.subs(self.alpha, alpha)) for k, v in self.theta.items()}
        shadow = {k: int(v.subs(self.alpha, alpha)) for k, v in self.shadow.items()}
        return theta, shadow


def extremal_odd_theta_family(n: int = EXTREMAL_ODD_LENGTH, max_norm: int = 6) -> ExtremalThetaFamily:
    """Symbolic theta and shadow series of an extremal odd unimodular lattice.

    Minimum norm mu = 2 floor(n/24) + 2 forces a_0 .. a_(mu-1). Exactly one
    further a_j may stay free; it is normalised so that alpha is the
    leading shadow coefficient.

    Raises:
        ThetaError: If the dimension leaves no free coefficient or more than one.
    """
    top = n // 8
    mu = 2 * (n // 24) + 2
    free = [j for j in range(mu, top + 1) if not (n % 8 == 0 and j == top)]
    if len(free) != 1:
        raise ThetaError(f"dimension {n} has {len(free)} free theta coefficients, expected 1")
    j_free = free[0]
    order = QUARTER * max(max_norm, top)
    base = _solve_shells([1] + [0] * (mu - 1), n, order)
    alpha = sympy.Symbol("alpha", integer=True)
    a_fixed = list(base[:mu]) + [0] * (top + 1 - mu)
    slope = (-1) ** j_free * sympy.Integer(2) ** (12 * j_free - n)
    a: list[sympy.Expr] = [sympy.Integer(x) for x in a_fixed]
    a[j_free] = slope * alpha

    theta_fixed = theta_from_coefficients(a_fixed, n, order)
    theta_unit = _basis_term(n, j_free, order)
    theta = {
        k: sympy.expand(theta_fixed.coeffs[QUARTER * k] + slope * alpha * theta_unit.coeffs[QUARTER * k])
        for k in range(max_norm + 1)
    }
    shadow_fixed = _shadow_fractions(a_fixed, n, order)
    unit = [0] * (top + 1)
    unit[j_free] = 1
    shadow_unit = _shadow_fractions(unit, n, order)
    shadow: dict[Fraction, sympy.Expr] = {}
    for e in range(order + 1):
        value = _rational(shadow_fixed[e]) + slope * alpha * _rational(shadow_unit[e])
        value = sympy.expand(value)
        if value != 0:
            shadow[Fraction(e, QUARTER)] = value
    logger.debug(f"Extremal odd theta family in dimension {n}: free a_{j_free}")
    return ExtremalThetaFamily(n, alpha, tuple(a), theta, shadow)


def theta_matches(theta: ThetaSeries, expected: Mapping[Number, int]) -> bool:
    """Whether every listed shell has the expected count."""
    return all(theta[k] == v for k, v in expected.items())
