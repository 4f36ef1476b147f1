"""Unimodular lattices from codes.

Every lattice is stored with integer coordinates z and a scale s, the norm
of z being (z . z) / s.  Units are e_i/2 for L_A and L_B (s = 2), e_i/4 for
L_C and the odd neighbour (s = 8) and halved unit vectors for A4 (s = 4),
where the frame vectors e_i have norm 2.
"""

import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Union

import numpy as np
import numpy.typing as npt
import sympy

from codelattice.gf2core import BitMatrix, codeword_array, dot, weight, weight_distribution, weights_of
from codelattice.models import (
    ComputationError,
    FrameType,
    LatticeConstruction,
    ValidationError,
    WeightDistribution,
    Z4Type,
)
from codelattice.qseries import ThetaSeries
from codelattice.selfdual import verify_self_dual
from codelattice.z4codes import NotSelfDualError, Z4Code, z4_self_dual_check


logger = logging.getLogger(__name__)

DEFAULT_MAX_LATTICE_NODES = 50_000_000
LLL_DELTA = Fraction(3, 4)

Norm = Union[int, Fraction]


class LatticeError(ComputationError):
    """Base exception for lattice operations."""


class NotDoublyEvenError(LatticeError):
    """Raised when a construction needs a doubly even code."""


class ConstructionError(LatticeError):
    """Raised when the preconditions of a construction fail."""


class EnumerationBudgetError(LatticeError):
    """Raised when short-vector enumeration exceeds its node budget."""


class EvenLatticeError(LatticeError):
    """Raised when a shadow is requested for an even lattice."""


class MixedNormError(LatticeError):
    """Raised when a design check receives vectors of different norms."""


class FrameInvalidError(LatticeError):
    """Raised when a frame fails (e_i, e_j) = 2 delta_ij or e_i +- e_j in L."""


def _hermite_basis(generators: Sequence[Sequence[int]], n: int, modulus: int) -> list[list[int]]:
    """Upper triangular Hermite basis of span(generators) + modulus * Z^n.

    Entries right of the current column are kept reduced mod modulus, which
    the implicit rows modulus * u_j allow.
    """
    pool = [[x % modulus for x in row] for row in generators]
    basis: list[list[int]] = []
    for col in range(n):
        unit = [0] * n
        unit[col] = modulus
        active = [row for row in pool if row[col]] + [unit]
        pool = [row for row in pool if not row[col]]
        while len(active) > 1:
            active.sort(key=lambda row: abs(row[col]))
            pivot = active[0]
            survivors = [pivot]
            for row in active[1:]:
                q = row[col] // pivot[col]
                reduced = [a - q * b for a, b in zip(row, pivot)]
                for j in range(col + 1, n):
                    reduced[j] %= modulus
                if reduced[col]:
                    survivors.append(reduced)
                elif any(reduced):
                    pool.append(reduced)
            active = survivors
        pivot = active[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        for j in range(col + 1, n):
            pivot[j] %= modulus
        basis.append(pivot)
    for j in range(n):
        for i in range(j):
            q = basis[i][j] // basis[j][j]
            if q:
                basis[i] = [a - q * b for a, b in zip(basis[i], basis[j])]
    return basis


@dataclass(frozen=True)
class CongruenceLattice:
    """{z in Z^n : z in span(generators) + modulus * Z^n}, norm (z . z) / scale."""

    n: int
    scale: int
    modulus: int
    generators: tuple[tuple[int, ...], ...] = ()
    construction: Optional[LatticeConstruction] = None

    def validate(self) -> None:
        """Validate the congruence data.

        Raises:
            ValidationError: If the scale or modulus is not positive or a generator is misshapen.
        """
        if self.n < 1:
            raise ValidationError(f"dimension must be positive, got {self.n}")
        if self.scale < 1 or self.modulus < 1:
            raise ValidationError("scale and modulus must be positive")
        for i, g in enumerate(self.generators):
            if len(g) != self.n:
                raise ValidationError(f"generator {i} has length {len(g)}, expected {self.n}")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    @classmethod
    def from_basis(cls, scale: int, rows: Sequence[Sequence[int]]) -> "CongruenceLattice":
        """Lattice spanned by n independent integer rows."""
        n = len(rows)
        det = int(sympy.Matrix([list(r) for r in rows]).det())
        if det == 0:
            raise ValidationError("basis rows are dependent")
        return cls(n, scale, abs(det), tuple(tuple(r) for r in rows))

    @cached_property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(r) for r in _hermite_basis(self.generators, self.n, self.modulus))

    @property
    def index(self) -> int:
        """[Z^n : L], the product of the Hermite diagonal."""
        return math.prod(self.basis[i][i] for i in range(self.n))

    def gram_determinant(self) -> Fraction:
        return Fraction(self.index**2, self.scale**self.n)

    def is_unimodular(self) -> bool:
        return self.is_integral() and self.gram_determinant() == 1

    def inner(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        return Fraction(sum(a * b for a, b in zip(x, y)), self.scale)

    def norm(self, x: Sequence[int]) -> Fraction:
        return self.inner(x, x)

    def is_integral(self) -> bool:
        rows = self.basis
        return all(
            sum(a * b for a, b in zip(rows[i], rows[j])) % self.scale == 0
            for i in range(self.n)
            for j in range(i, self.n)
        )

    def is_even(self) -> bool:
        return self.is_integral() and all(self.norm(b) % 2 == 0 for b in self.basis)

    def contains(self, z: Sequence[int]) -> bool:
        if len(z) != self.n:
            return False
        residual = list(z)
        for col, row in enumerate(self.basis):
            if residual[col] % row[col]:
                return False
            q = residual[col] // row[col]
            if q:
                residual = [a - q * b for a, b in zip(residual, row)]
        return not any(residual)


def _require_doubly_even(d: BitMatrix) -> None:
    rows = d.rows
    if any(weight(r) % 4 for r in rows) or any(dot(a, b) for i, a in enumerate(rows) for b in rows[i + 1 :]):
        logger.error(f"Construction input of length {d.n} is not doubly even")
        raise NotDoublyEvenError("the construction needs a doubly even code")


def _unit(n: int, i: int, value: int) -> tuple[int, ...]:
    return tuple(value if j == i else 0 for j in range(n))


def _bits(x: int, n: int, value: int = 1) -> tuple[int, ...]:
    return tuple(value if (x >> i) & 1 else 0 for i in range(n))


def construct_LA(d: BitMatrix) -> CongruenceLattice:
    """z with z mod 2 in D, norm (z . z)/2."""
    _require_doubly_even(d)
    gens = tuple(_bits(r, d.n) for r in d.rows)
    return CongruenceLattice(d.n, 2, 2, gens, LatticeConstruction.LA)


def _lb_generators(d: BitMatrix, factor: int) -> tuple[tuple[int, ...], ...]:
    n = d.n
    gens = [_bits(r, n, factor) for r in d.rows]
    for i in range(1, n):
        gens.append(tuple(2 * factor if j in (0, i) else 0 for j in range(n)))
    gens.append(_unit(n, 0, 4 * factor))
    return tuple(gens)


def construct_LB(d: BitMatrix) -> CongruenceLattice:
    """z = 2 lambda + x, x in D, with lambda of even coordinate sum."""
    _require_doubly_even(d)
    return CongruenceLattice(d.n, 2, 4, _lb_generators(d, 1), LatticeConstruction.LB)


def _glued(d: BitMatrix, parity: int, label: LatticeConstruction) -> CongruenceLattice:
    code = verify_self_dual(d)
    if not code.is_doubly_even or d.n % 8:
        logger.error(f"Glue construction refused for length {d.n}")
        raise ConstructionError("the glue constructions need a doubly even self-dual code of length 0 mod 8")
    n = d.n
    glue = tuple(1 + (4 * parity if i == 0 else 0) for i in range(n))
    return CongruenceLattice(n, 8, 8, _lb_generators(d, 2) + (glue,), label)


def lc_parity(n: int) -> int:
    """epsilon = n/8 mod 2."""
    return (n // 8) % 2


def construct_LC(d: BitMatrix) -> CongruenceLattice:
    """L_B(D) glued with Lambda_eps + e_x/2 + e_1/4, eps = n/8 mod 2: even unimodular."""
    return _glued(d, lc_parity(d.n), LatticeConstruction.LC)


def construct_L_odd(d: BitMatrix) -> CongruenceLattice:
    """The other neighbour of L_C(D) through L_B(D), glued with Lambda_(1-eps): odd unimodular."""
    return _glued(d, 1 - lc_parity(d.n), LatticeConstruction.LODD)


def construct_A4(c: Z4Code) -> CongruenceLattice:
    """z with z mod 4 in c, norm (z . z)/4.

    Raises:
        NotSelfDualError: If c is not self-dual.
    """
    if z4_self_dual_check(c) is Z4Type.NOT_SELF_DUAL:
        logger.error(f"A4 construction refused: Z4-code of length {c.n} is not self-dual")
        raise NotSelfDualError("the A4 construction needs a self-dual Z4-code")
    return CongruenceLattice(c.n, 4, 4, c.rows, LatticeConstruction.A4)


def _size_reduce(b: list[list[int]], mu: list[list[Fraction]], k: int, l: int) -> None:
    if abs(mu[k][l]) <= Fraction(1, 2):
        return
    q = math.floor(mu[k][l] + Fraction(1, 2))
    b[k] = [x - q * y for x, y in zip(b[k], b[l])]
    mu[k][l] -= q
    for i in range(l):
        mu[k][i] -= q * mu[l][i]


def _swap(b: list[list[int]], mu: list[list[Fraction]], big_b: list[Fraction], k: int) -> None:
    b[k], b[k - 1] = b[k - 1], b[k]
    for j in range(k - 1):
        mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
    m = mu[k][k - 1]
    total = big_b[k] + m * m * big_b[k - 1]
    mu[k][k - 1] = m * big_b[k - 1] / total
    big_b[k] = big_b[k - 1] * big_b[k] / total
    big_b[k - 1] = total
    for i in range(k + 1, len(b)):
        t = mu[i][k]
        mu[i][k] = mu[i][k - 1] - m * t
        mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]


def gram_schmidt(rows: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact coefficients mu[i][j] and squared lengths B[i] of the orthogonalised rows."""
    n = len(rows)
    gram = [[sum(a * b for a, b in zip(rows[i], rows[j])) for j in range(n)] for i in range(n)]
    mu = [[Fraction(0)] * n for _ in range(n)]
    big_b = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            acc = Fraction(gram[i][j]) - sum((mu[j][t] * mu[i][t] * big_b[t] for t in range(j)), Fraction(0))
            mu[i][j] = acc / big_b[j]
        big_b[i] = gram[i][i] - sum((mu[i][t] ** 2 * big_b[t] for t in range(i)), Fraction(0))
        if big_b[i] <= 0:
            raise LatticeError("rows are linearly dependent")
    return mu, big_b


def lll_reduce(rows: Sequence[Sequence[int]], delta: Fraction = LLL_DELTA) -> list[list[int]]:
    """LLL-reduced basis in exact rational arithmetic."""
    b = [list(r) for r in rows]
    n = len(b)
    if n < 2:
        return b
    mu, big_b = gram_schmidt(b)
    k = 1
    while k < n:
        _size_reduce(b, mu, k, k - 1)
        if big_b[k] < (delta - mu[k][k - 1] ** 2) * big_b[k - 1]:
            _swap(b, mu, big_b, k)
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                _size_reduce(b, mu, k, l)
            k += 1
    return b


@dataclass
class _Branch:
    """One top-level branch of the enumeration tree."""

    rows: list[list[int]]
    mu: list[list[Fraction]]
    big_b: list[Fraction]
    bound: int
    top_value: int
    collect: bool
    max_nodes: int
    counts: Counter[int] = field(default_factory=Counter)
    vectors: list[tuple[int, ...]] = field(default_factory=list)
    nodes: int = 0


def _candidates(center: Fraction, radius_sq: Fraction, nonnegative: bool) -> list[int]:
    """Integers x with (x - center)^2 <= radius_sq, nearest first."""
    if radius_sq < 0:
        return []
    reach = math.isqrt(math.floor(radius_sq)) + 1
    low = math.floor(center) - reach
    high = math.ceil(center) + reach
    if nonnegative:
        low = max(low, 0)
    values = [x for x in range(low, high + 1) if (x - center) ** 2 <= radius_sq]
    return sorted(values, key=lambda x: (abs(x - center), x))


def _descend(task: _Branch, level: int, x: list[int], partial: Fraction, top_zero: bool) -> None:
    task.nodes += 1
    if task.nodes > task.max_nodes:
        raise EnumerationBudgetError(f"enumeration exceeded {task.max_nodes} nodes")
    n = len(task.rows)
    center = -sum((x[j] * task.mu[j][level] for j in range(level + 1, n)), Fraction(0))
    radius_sq = (task.bound - partial) / task.big_b[level]
    for value in _candidates(center, radius_sq, top_zero):
        x[level] = value
        reached = partial + (value - center) ** 2 * task.big_b[level]
        if level == 0:
            if top_zero and value == 0:
                continue
            z = [0] * n
            for i, c in enumerate(x):
                if c:
                    z = [a + c * b for a, b in zip(z, task.rows[i])]
            task.counts[sum(v * v for v in z)] += 2
            if task.collect:
                task.vectors.append(tuple(z))
                task.vectors.append(tuple(-v for v in z))
        else:
            _descend(task, level - 1, x, reached, top_zero and value == 0)
    x[level] = 0


def _run_branch(task: _Branch) -> _Branch:
    n = len(task.rows)
    x = [0] * n
    x[n - 1] = task.top_value
    partial = Fraction(task.top_value**2) * task.big_b[n - 1]
    if n == 1:
        if task.top_value:
            task.counts[task.top_value**2 * task.rows[0][0] ** 2] += 2
            if task.collect:
                z = (task.top_value * task.rows[0][0],)
                task.vectors.extend([z, (-z[0],)])
        return task
    _descend(task, n - 2, x, partial, task.top_value == 0)
    return task


@dataclass(frozen=True)
class ShortVectors:
    """Result of one enumeration: shell counts and, when collected, the vectors."""

    theta: ThetaSeries
    vectors: tuple[tuple[int, ...], ...] = ()
    nodes: int = 0


def enumerate_short_vectors(
    l: CongruenceLattice,
    max_norm: Norm,
    threads: int = 1,
    collect: bool = False,
    max_nodes: int = DEFAULT_MAX_LATTICE_NODES,
) -> ShortVectors:
    """Fincke-Pohst enumeration of all z in L with norm <= max_norm.

    The basis is LLL-reduced first. Only one of each pair +-z is visited.
    Branches over the last coefficient run in separate processes when
    threads > 1; max_nodes applies to each branch.

    Raises:
        EnumerationBudgetError: If a branch exceeds max_nodes.
    """
    limit = Fraction(max_norm)
    bound = math.floor(limit * l.scale)
    rows = lll_reduce(l.basis)
    mu, big_b = gram_schmidt(rows)
    top = len(rows) - 1
    tops = _candidates(Fraction(0), Fraction(bound) / big_b[top], True)
    tasks = [_Branch(rows, mu, big_b, bound, v, collect, max_nodes) for v in sorted(tops)]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            done = list(pool.map(_run_branch, tasks))
    else:
        done = [_run_branch(t) for t in tasks]
    counts: Counter[int] = Counter({0: 1})
    vectors: list[tuple[int, ...]] = []
    nodes = 0
    for task in done:
        counts.update(task.counts)
        vectors.extend(task.vectors)
        nodes += task.nodes
    logger.info(f"Enumerated norm <= {limit} in dimension {l.n}: {nodes} nodes")
    shells = {Fraction(k, l.scale): c for k, c in counts.items() if c}
    return ShortVectors(ThetaSeries(shells, limit), tuple(sorted(vectors)), nodes)


def short_vectors(
    l: CongruenceLattice,
    max_norm: Norm,
    threads: int = 1,
    max_nodes: int = DEFAULT_MAX_LATTICE_NODES,
) -> ThetaSeries:
    """Exact vector counts per norm shell up to max_norm."""
    return enumerate_short_vectors(l, max_norm, threads, False, max_nodes).theta


def short_vector_list(
    l: CongruenceLattice,
    max_norm: Norm,
    threads: int = 1,
    max_nodes: int = DEFAULT_MAX_LATTICE_NODES,
) -> list[tuple[int, ...]]:
    """All nonzero vectors of norm <= max_norm, sorted."""
    return list(enumerate_short_vectors(l, max_norm, threads, True, max_nodes).vectors)


def even_sublattice(l: CongruenceLattice) -> CongruenceLattice:
    """L0, the vectors of even norm.

    Raises:
        EvenLatticeError: If L is already even.
    """
    if not l.is_integral():
        raise LatticeError("the even sublattice needs an integral lattice")
    basis = l.basis
    odd = [b for b in basis if l.norm(b) % 2]
    if not odd:
        raise EvenLatticeError("the lattice is even")
    anchor = odd[0]
    gens = [b if l.norm(b) % 2 == 0 else tuple(x + y for x, y in zip(b, anchor)) for b in basis if b != anchor]
    gens.append(tuple(2 * x for x in anchor))
    return CongruenceLattice(l.n, l.scale, 2 * l.modulus, tuple(gens))


def lattice_shadow_counts(
    l: CongruenceLattice,
    max_norm: Norm,
    threads: int = 1,
    max_nodes: int = DEFAULT_MAX_LATTICE_NODES,
) -> ThetaSeries:
    """Norm shells of the shadow L0* minus L of an odd unimodular lattice.

    L0* is built from the exact inverse of the L0 basis and rescaled to
    integer coordinates before enumeration.

    Raises:
        EvenLatticeError: If L is even.
    """
    l0 = even_sublattice(l)
    inverse = sympy.Matrix([list(r) for r in l0.basis]).inv().T * l.scale
    denominator = int(sympy.ilcm(*[sympy.fraction(v)[1] for v in inverse], 1))
    dual_rows = [[int(v * denominator) for v in inverse.row(i)] for i in range(l.n)]
    modulus = 2 * l.modulus * denominator
    dual = CongruenceLattice(l.n, l.scale * denominator**2, modulus, tuple(tuple(r) for r in dual_rows))
    found = enumerate_short_vectors(dual, max_norm, threads, True, max_nodes)
    counts: Counter[Fraction] = Counter()
    for y in found.vectors:
        if all(v % denominator == 0 for v in y) and l.contains([v // denominator for v in y]):
            continue
        counts[dual.norm(y)] += 1
    logger.info(f"Shadow shells up to norm {max_norm}: {dict(sorted(counts.items()))}")
    return ThetaSeries(dict(counts), Fraction(max_norm))


def _class_series(modulus: int, residue: int, bound: int) -> npt.NDArray[np.object_]:
    """c[k] = #{z = residue mod modulus : z^2 = k}."""
    out = np.zeros(bound + 1, dtype=object)
    r = math.isqrt(bound)
    for z in range(-r, r + 1):
        if z % modulus == residue:
            out[z * z] += 1
    return out


def _mul(a: npt.NDArray[np.object_], b: npt.NDArray[np.object_]) -> npt.NDArray[np.object_]:
    size = len(a)
    out = np.zeros(size, dtype=object)
    for i, c in enumerate(a):
        if c:
            out[i:] += c * b[: size - i]
    return out


def _powers(a: npt.NDArray[np.object_], top: int) -> list[npt.NDArray[np.object_]]:
    one = np.zeros(len(a), dtype=object)
    one[0] = 1
    out = [one]
    for _ in range(top):
        out.append(_mul(out[-1], a))
    return out


def _coset_series(
    wd: WeightDistribution,
    n: int,
    outside: tuple[npt.NDArray[np.object_], npt.NDArray[np.object_]],
    inside: tuple[npt.NDArray[np.object_], npt.NDArray[np.object_]],
    parity: Optional[int],
) -> npt.NDArray[np.object_]:
    """Sum over codewords x of prod_i (series for x_i), optionally fixing the parity of sum(lambda).

    outside and inside hold the series of coordinates off and on the support
    of x, split by the parity of lambda_i.
    """
    plus_out, plus_in = _powers(outside[0] + outside[1], n), _powers(inside[0] + inside[1], n)
    minus_out, minus_in = _powers(outside[0] - outside[1], n), _powers(inside[0] - inside[1], n)
    total = np.zeros(len(outside[0]), dtype=object)
    for w, count in wd.nonzero().items():
        term = _mul(plus_out[n - w], plus_in[w])
        if parity is not None:
            twist = _mul(minus_out[n - w], minus_in[w])
            term = term + twist if parity == 0 else term - twist
        total += count * term
    if parity is not None:
        if any(v % 2 for v in total):
            raise LatticeError("parity split produced an odd count")
        total = total // 2
    return total


def _split(modulus: int, residues: tuple[int, int], bound: int) -> tuple[npt.NDArray[np.object_], npt.NDArray[np.object_]]:
    return _class_series(modulus, residues[0], bound), _class_series(modulus, residues[1], bound)


def _to_theta(series: npt.NDArray[np.object_], scale: int, max_norm: Fraction) -> ThetaSeries:
    return ThetaSeries({Fraction(k, scale): int(c) for k, c in enumerate(series) if c}, max_norm)


def theta_from_code(
    construction: LatticeConstruction,
    d: BitMatrix,
    max_norm: Norm,
    wd: Optional[WeightDistribution] = None,
) -> ThetaSeries:
    """Theta series of L_A, L_B, L_C or L_odd from the weight distribution of D.

    Each codeword x contributes the product over coordinates of the series
    of the residue class z_i lies in; the even-sum condition on lambda is
    imposed by averaging with the sign-twisted product.
    """
    _require_doubly_even(d)
    limit = Fraction(max_norm)
    wd = wd or weight_distribution(d)
    n = d.n
    if construction in (LatticeConstruction.LA, LatticeConstruction.LB):
        bound = math.floor(limit * 2)
        outside, inside = _split(4, (0, 2), bound), _split(4, (1, 3), bound)
        parity = None if construction is LatticeConstruction.LA else 0
        return _to_theta(_coset_series(wd, n, outside, inside, parity), 2, limit)
    if construction in (LatticeConstruction.LC, LatticeConstruction.LODD):
        verify_self_dual(d)
        if n % 8:
            raise ConstructionError("the glue constructions need length 0 mod 8")
        eps = lc_parity(n) if construction is LatticeConstruction.LC else 1 - lc_parity(n)
        bound = math.floor(limit * 8)
        base = _coset_series(wd, n, _split(8, (0, 4), bound), _split(8, (2, 6), bound), 0)
        glue = _coset_series(wd, n, _split(8, (1, 5), bound), _split(8, (3, 7), bound), eps)
        return _to_theta(base + glue, 8, limit)
    raise ValidationError(f"no code theta series for {construction.value}")


def _odd_shadow_parts(d: BitMatrix, max_norm: Norm) -> tuple[ThetaSeries, ThetaSeries]:
    verify_self_dual(d)
    _require_doubly_even(d)
    if d.n % 8:
        raise ConstructionError("the glue constructions need length 0 mod 8")
    limit = Fraction(max_norm)
    wd = weight_distribution(d)
    bound = math.floor(limit * 8)
    frame_coset = _coset_series(wd, d.n, _split(8, (0, 4), bound), _split(8, (2, 6), bound), 1)
    glue_coset = _coset_series(wd, d.n, _split(8, (1, 5), bound), _split(8, (3, 7), bound), lc_parity(d.n))
    return _to_theta(frame_coset, 8, limit), _to_theta(glue_coset, 8, limit)


def odd_shadow_theta_from_code(d: BitMatrix, max_norm: Norm) -> ThetaSeries:
    """Shadow of L_odd(D): the odd-sum half of L_A(D) together with the L_C glue coset."""
    frame_coset, glue_coset = _odd_shadow_parts(d, max_norm)
    counts = Counter(frame_coset.counts)
    counts.update(glue_coset.counts)
    return ThetaSeries(dict(counts), frame_coset.max_norm)


def shadow_norm2_split(d: BitMatrix) -> tuple[int, int]:
    """Norm-2 shadow vectors of L_odd(D) in each of the two shadow cosets."""
    frame_coset, glue_coset = _odd_shadow_parts(d, 2)
    return frame_coset[2], glue_coset[2]


def _lifts(pattern: Sequence[int], target: int) -> Iterable[list[int]]:
    """Integer z with z_i = pattern_i mod 2 and z . z = target."""
    n = len(pattern)
    suffix_min = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + pattern[i]
    z = [0] * n

    def walk(i: int, remaining: int) -> Iterable[list[int]]:
        if i == n:
            if remaining == 0:
                yield list(z)
            return
        r = math.isqrt(remaining)
        for v in range(-r, r + 1):
            if v % 2 != pattern[i] or v * v + suffix_min[i + 1] > remaining:
                continue
            z[i] = v
            yield from walk(i + 1, remaining - v * v)
        z[i] = 0

    return walk(0, target)


def code_lattice_vectors(construction: LatticeConstruction, d: BitMatrix, norm: Norm) -> list[tuple[int, ...]]:
    """Vectors of exactly the given norm in L_A(D) or L_B(D), listed codeword by codeword."""
    if construction not in (LatticeConstruction.LA, LatticeConstruction.LB):
        raise ValidationError(f"vector listing supports la and lb, not {construction.value}")
    _require_doubly_even(d)
    target = Fraction(norm) * 2
    if target.denominator != 1:
        return []
    t = int(target)
    words = codeword_array(d)
    chosen = words[weights_of(words) <= t]
    out: list[tuple[int, ...]] = []
    for word in sorted(int(w) for w in chosen):
        pattern = _bits(word, d.n)
        for z in _lifts(pattern, t):
            if construction is LatticeConstruction.LB and sum((a - b) // 2 for a, b in zip(z, pattern)) % 2:
                continue
            out.append(tuple(z))
    return sorted(out)


@dataclass(frozen=True)
class Frame:
    """Vectors e_1 .. e_n in lattice coordinates."""

    vectors: tuple[tuple[int, ...], ...]
    kind: FrameType = FrameType.INVALID


def standard_frame(l: CongruenceLattice) -> Frame:
    """e_i = c u_i with c^2 / scale = 2."""
    c = math.isqrt(2 * l.scale)
    if c * c != 2 * l.scale:
        raise ConstructionError(f"scale {l.scale} has no integral norm-2 frame along the axes")
    return Frame(tuple(_unit(l.n, i, c) for i in range(l.n)))


def _frame_condition(l: CongruenceLattice, f: Frame) -> bool:
    e = f.vectors
    if len(e) != l.n:
        return False
    for i in range(l.n):
        if l.norm(e[i]) != 2:
            return False
        for j in range(i + 1, l.n):
            if l.inner(e[i], e[j]) != 0:
                return False
            plus = [a + b for a, b in zip(e[i], e[j])]
            minus = [a - b for a, b in zip(e[i], e[j])]
            if not (l.contains(plus) and l.contains(minus)):
                return False
    return True


def verify_frame(l: CongruenceLattice, f: Frame) -> FrameType:
    """Type A if every e_i lies in L, B if L lies in (1/2) sum Z e_i, C otherwise."""
    if not _frame_condition(l, f):
        return FrameType.INVALID
    if all(l.contains(e) for e in f.vectors):
        return FrameType.A
    # v lies in (1/2) sum Z e_i iff every (v, e_i) is an integer
    if all(l.inner(b, e).denominator == 1 for b in l.basis for e in f.vectors):
        return FrameType.B
    return FrameType.C


def z4_code_from_4frame(l: CongruenceLattice, f: Frame) -> Z4Code:
    """Self-dual Z4-code c with A4(c) isometric to L.

    The 4-frame is e_(2i-1) +- e_(2i); each lattice vector v has integer
    coordinates (v, f_j) on it, and their residues mod 4 form c.

    Raises:
        FrameInvalidError: If f fails the frame condition or n is odd.
    """
    if l.n % 2 or not _frame_condition(l, f):
        raise FrameInvalidError("the 4-frame needs a valid frame in even dimension")
    e = f.vectors
    four_frame: list[list[int]] = []
    for i in range(0, l.n, 2):
        four_frame.append([a + b for a, b in zip(e[i], e[i + 1])])
        four_frame.append([a - b for a, b in zip(e[i], e[i + 1])])
    rows = []
    for b in l.basis:
        coords = [l.inner(b, g) for g in four_frame]
        if any(c.denominator != 1 for c in coords):
            raise FrameInvalidError("lattice vector with non-integral frame coordinate")
        rows.append(tuple(int(c) % 4 for c in coords))
    code = Z4Code(l.n, tuple(rows))
    logger.debug(f"4-frame code of length {l.n}: k1={code.k1}, k2={code.k2}")
    return code


def spherical_design_moments(vectors: Sequence[Sequence[int]], t: int) -> bool:
    """Moment test of degree up to t (at most 3) for vectors of one norm.

    Degree 1: sum v = 0. Degree 2: sum v v^T is a multiple of the identity.
    Degree 3: sum v_i v_j v_k = 0 for all i, j, k.

    Raises:
        MixedNormError: If the vectors do not share a norm.
    """
    if not 1 <= t <= 3:
        raise ValidationError(f"moment test supports 1 <= t <= 3, got {t}")
    arr = np.asarray(vectors, dtype=np.int64)
    if arr.ndim != 2 or len(arr) == 0:
        raise ValidationError("need a nonempty list of equal-length vectors")
    norms = (arr * arr).sum(axis=1)
    if np.any(norms != norms[0]):
        raise MixedNormError("vectors have different norms")
    n = arr.shape[1]
    if np.any(arr.sum(axis=0)):
        return False
    if t >= 2:
        second = arr.T @ arr
        trace = int(norms.sum())
        if trace % n or np.any(second != np.eye(n, dtype=np.int64) * (trace // n)):
            return False
    if t >= 3:
        for j in range(n):
            for k in range(j, n):
                if np.any(arr.T @ (arr[:, j] * arr[:, k])):
                    return False
    return True
