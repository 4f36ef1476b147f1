"""Self-dual binary codes: shadows, neighbours, extremal profiles and cosets."""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cache, cached_property
from typing import Optional, Union

import numpy as np
import numpy.typing as npt
import sympy
from tqdm import tqdm

from codelattice.gf2core import (
    BitMatrix,
    DEFAULT_MAX_CODEWORDS,
    NUMPY_WORD_BITS,
    codeword_array,
    dual_code,
    histogram,
    lex_key,
    mask,
    rref,
    reduce_vector,
    support,
    weight,
    weight_distribution,
    weights_of,
    words_of_weight,
)
from codelattice.models import CodeKind, ComputationError, ValidationError, WeightDistribution


logger = logging.getLogger(__name__)

EXTREMAL_LENGTH = 40
ALLOWED_BETAS = frozenset({0, 1, 2, 3, 4, 5, 6, 7, 8, 10})
DEFAULT_MAX_SYNDROME_BITS = 24
UNSET = np.uint8(255)
FRONTIER_CHUNK = 1 << 15  # syndromes expanded per block in the coset-leader fill


class SelfDualError(ComputationError):
    """Base exception for self-dual code operations."""


class NotSelfOrthogonalError(SelfDualError):
    """Raised when G G^T is not zero."""


class WrongDimensionError(SelfDualError):
    """Raised when a self-orthogonal code is not of dimension n/2."""


class CodeIsDoublyEvenError(SelfDualError):
    """Raised when an operation needs a singly even code."""


class CodeIsSinglyEvenError(SelfDualError):
    """Raised when an operation needs a doubly even code."""


class LengthNotDivisibleError(SelfDualError):
    """Raised when n is not a multiple of 8."""


class SubcodeInvalidError(SelfDualError):
    """Raised when a subcode is not a codimension-1 subcode containing the all-one vector."""


class ProfileMismatchError(SelfDualError):
    """Raised when a code does not carry an extremal length-40 enumerator."""


class ShadowInconsistencyError(SelfDualError):
    """Raised when weight-4 shadow vectors appear in both shadow cosets."""


class ResourceCapError(SelfDualError):
    """Raised when a syndrome table would not fit the configured cap."""


@dataclass(frozen=True)
class SelfDualCode:
    """A verified self-dual code; gen is kept in reduced row-echelon form."""

    gen: BitMatrix
    kind: CodeKind
    max_codewords: int = field(default=DEFAULT_MAX_CODEWORDS, compare=False, repr=False)

    def validate(self) -> None:
        """Validate the shape.

        Raises:
            ValidationError: If the length is odd or the row count is not n/2.
        """
        if self.gen.n % 2:
            raise ValidationError("self-dual codes have even length")
        if self.gen.k != self.gen.n // 2:
            raise ValidationError(f"expected {self.gen.n // 2} rows, got {self.gen.k}")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    @property
    def n(self) -> int:
        return self.gen.n

    @property
    def is_doubly_even(self) -> bool:
        return self.kind is CodeKind.DOUBLY_EVEN

    @cached_property
    def pivots(self) -> list[int]:
        return rref(self.gen)[2]

    @cached_property
    def distribution(self) -> WeightDistribution:
        return weight_distribution(self.gen, self.max_codewords)

    @property
    def minimum_weight(self) -> int:
        d = self.distribution.min_nonzero_weight()
        assert d is not None
        return d

    def contains(self, x: int) -> bool:
        return reduce_vector(x, self.gen.rows, self.pivots) == 0


@dataclass(frozen=True)
class CosetDescription:
    """A coset of C0: the basis of C0 and a least minimum-weight representative."""

    basis: BitMatrix
    representative: int
    distribution: WeightDistribution


@dataclass(frozen=True)
class ShadowDecomposition:
    """The four cosets of C0 in C0-perp; the shadow is C1 together with C3."""

    c0: CosetDescription
    c1: CosetDescription
    c2: CosetDescription
    c3: CosetDescription

    @property
    def shadow_weight_distribution(self) -> WeightDistribution:
        counts = Counter(self.c1.distribution.counts)
        counts.update(self.c3.distribution.counts)
        return WeightDistribution(dict(counts))


@dataclass(frozen=True)
class TDecomposition:
    """Disjoint tetrads whose pairwise unions support codewords."""

    tetrads: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        """Validate tetrad sizes and disjointness.

        Raises:
            ValidationError: On a tetrad of the wrong size or an overlap.
        """
        seen: set[int] = set()
        for t in self.tetrads:
            if len(t) != 4:
                raise ValidationError(f"tetrad {t} does not have 4 coordinates")
            if seen & set(t):
                raise ValidationError(f"tetrad {t} overlaps an earlier tetrad")
            seen |= set(t)

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    def is_partition(self, n: int) -> bool:
        return 4 * len(self.tetrads) == n


@dataclass(frozen=True)
class ExtremalProfile:
    """Parameter beta of an extremal length-40 singly even code and its enumerators."""

    beta: int
    code_enumerator: WeightDistribution
    shadow_enumerator: WeightDistribution


def verify_self_dual(gen: BitMatrix, max_codewords: int = DEFAULT_MAX_CODEWORDS) -> SelfDualCode:
    """Check C = C-perp and classify the parity.

    max_codewords caps the enumeration behind the weight distribution.

    Raises:
        NotSelfOrthogonalError: If two rows (or a row with itself) are not orthogonal.
        WrongDimensionError: If the rank is not n/2.
    """
    reduced, k, _ = rref(gen)
    if not reduced.is_self_orthogonal():
        raise NotSelfOrthogonalError("generator rows are not mutually orthogonal")
    if 2 * k != gen.n:
        raise WrongDimensionError(f"rank {k} is not half of the length {gen.n}")
    doubly = all(weight(row) % 4 == 0 for row in reduced.rows)
    return SelfDualCode(reduced, CodeKind.DOUBLY_EVEN if doubly else CodeKind.SINGLY_EVEN, max_codewords)


def extremal_bound(n: int) -> int:
    """Upper bound on the minimum weight of a self-dual code of length n."""
    if n < 2 or n % 2:
        raise ValidationError(f"length must be even and at least 2, got {n}")
    base = 4 * (n // 24)
    return base + 6 if n % 24 == 22 else base + 4


def is_extremal(c: SelfDualCode) -> bool:
    return c.minimum_weight == extremal_bound(c.n)


def doubly_even_subcode(c: SelfDualCode) -> tuple[BitMatrix, int]:
    """Basis of C0 and a codeword of weight 2 mod 4 (the C2 representative).

    Half the weight mod 2 is linear on a self-orthogonal code, so adding one
    weight-2-mod-4 row to every other such row leaves a basis of its kernel.
    """
    if c.is_doubly_even:
        raise CodeIsDoublyEvenError("the doubly even subcode of a doubly even code is the code")
    rows = c.gen.rows
    r2 = next(r for r in rows if weight(r) % 4 == 2)
    basis = tuple(r ^ r2 if weight(r) % 4 == 2 else r for r in rows if r != r2)
    return BitMatrix(c.n, basis), r2


def _coset(basis: BitMatrix, words: npt.NDArray[np.uint64], offset: int) -> CosetDescription:
    coset = words ^ np.uint64(offset)
    wts = weights_of(coset)
    low = int(wts.min())
    candidates = (int(x) for x in coset[wts == low])
    rep = min(candidates, key=lambda x: lex_key(x, basis.n))
    return CosetDescription(basis, rep, histogram(coset, basis.n))


def shadow(c: SelfDualCode) -> ShadowDecomposition:
    """Split C0-perp into C0, C1, C2, C3.

    C1 is the shadow coset with the smaller minimum weight, ties broken by the
    lexicographically least minimum-weight vector.

    Raises:
        CodeIsDoublyEvenError: If c is doubly even.
        ShadowInconsistencyError: If an extremal length-40 code has weight-4
            shadow vectors in both cosets.
    """
    if c.n > NUMPY_WORD_BITS:
        raise ResourceCapError(f"shadow enumeration needs n <= {NUMPY_WORD_BITS}")
    c0_basis, r2 = doubly_even_subcode(c)
    s = next(v for v in dual_code(c0_basis).rows if not c.contains(v))
    words = codeword_array(c0_basis, c.max_codewords)
    c0 = _coset(c0_basis, words, 0)
    c2 = _coset(c0_basis, words, r2)
    a = _coset(c0_basis, words, s)
    b = _coset(c0_basis, words, s ^ r2)

    def order_key(desc: CosetDescription) -> tuple[int, int]:
        return weight(desc.representative), lex_key(desc.representative, c.n)

    c1, c3 = sorted((a, b), key=order_key)
    if c.n == EXTREMAL_LENGTH and c1.distribution[4] and c3.distribution[4]:
        if c.minimum_weight == extremal_bound(c.n):
            raise ShadowInconsistencyError("weight-4 shadow vectors lie in both C1 and C3")
    logger.debug(f"Shadow of n={c.n} code: min weights {weight(c1.representative)}, {weight(c3.representative)}")
    return ShadowDecomposition(c0=c0, c1=c1, c2=c2, c3=c3)


def shadow_weight4_cosets(sd: ShadowDecomposition) -> tuple[int, int]:
    """Weight-4 vector counts in C1 and in C3."""
    return sd.c1.distribution[4], sd.c3.distribution[4]


def doubly_even_neighbors(c: SelfDualCode) -> tuple[SelfDualCode, SelfDualCode]:
    """The doubly even self-dual neighbours C0 + C1 and C0 + C3.

    Raises:
        LengthNotDivisibleError: If n is not a multiple of 8.
        CodeIsDoublyEvenError: If c is doubly even.
    """
    if c.n % 8:
        raise LengthNotDivisibleError(f"length {c.n} is not divisible by 8")
    sd = shadow(c)
    out = []
    for coset in (sd.c1, sd.c3):
        neighbor = verify_self_dual(sd.c0.basis.with_rows([coset.representative]), c.max_codewords)
        if not neighbor.is_doubly_even:
            raise SelfDualError("shadow neighbour is not doubly even")
        out.append(neighbor)
    return out[0], out[1]


def singly_even_neighbor(d: SelfDualCode, subcode: BitMatrix) -> SelfDualCode:
    """The singly even self-dual code between subcode and subcode-perp.

    Raises:
        CodeIsSinglyEvenError: If d is not doubly even.
        SubcodeInvalidError: If subcode is not a codimension-1 subcode of d containing 1.
    """
    if not d.is_doubly_even:
        raise CodeIsSinglyEvenError("the ambient code must be doubly even")
    reduced, k, pivots = rref(subcode)
    if subcode.n != d.n or k != d.n // 2 - 1:
        raise SubcodeInvalidError(f"subcode must have dimension {d.n // 2 - 1}")
    if reduce_vector(mask(d.n), reduced.rows, pivots):
        raise SubcodeInvalidError("subcode does not contain the all-one vector")
    if not all(d.contains(r) for r in reduced.rows):
        raise SubcodeInvalidError("subcode is not contained in the code")
    w = next(r for r in d.gen.rows if reduce_vector(r, reduced.rows, pivots))
    v = next(x for x in dual_code(reduced).rows if not d.contains(x))
    for extra in (v, v ^ w):
        candidate = verify_self_dual(reduced.with_rows([extra]), d.max_codewords)
        if candidate.kind is CodeKind.SINGLY_EVEN:
            return candidate
    raise SubcodeInvalidError("no singly even neighbour through this subcode")


def find_t_decomposition(c: SelfDualCode, beta: int) -> Optional[TDecomposition]:
    """Test whether the weight-4 supports form a (partial) T-decomposition.

    There must be exactly beta weight-4 codewords, pairwise disjoint, with
    every pairwise union supporting a codeword.  For beta = n/4 this is a
    full partition of the coordinates.
    """
    if not 1 <= beta <= c.n // 4:
        raise ValidationError(f"beta must lie in 1..{c.n // 4}, got {beta}")
    fours = words_of_weight(c.gen, 4, c.max_codewords)
    if len(fours) != beta:
        return None
    for i, a in enumerate(fours):
        for b in fours[i + 1 :]:
            if a & b or not c.contains(a | b):
                return None
    tetrads = sorted(support(t) for t in fours)
    return TDecomposition(tuple(tetrads))


@cache
def _gleason_family(n: int) -> tuple[dict[int, sympy.Expr], dict[int, sympy.Expr]]:
    """Code and shadow enumerators of extremal singly even codes in the symbol beta."""
    y, beta = sympy.symbols("y beta")
    m = n // 8
    a = sympy.symbols(f"a0:{m + 1}")
    terms = [(1 + y**2) ** (n // 2 - 4 * j) * (y**2 * (1 - y**2) ** 2) ** j for j in range(m + 1)]
    code = sympy.Poly(sum(a[j] * terms[j] for j in range(m + 1)), y)
    shadow_poly = sympy.Poly(
        sum(
            (-1) ** j * a[j] * sympy.Rational(2) ** (n // 2 - 6 * j) * y ** (n // 2 - 4 * j) * (1 - y**4) ** (2 * j)
            for j in range(m + 1)
        ),
        y,
    )
    d = extremal_bound(n)
    equations = [code.coeff_monomial(1) - 1]
    equations += [code.coeff_monomial(y**w) for w in range(2, d, 2)]
    equations.append(code.coeff_monomial(y**d) - (125 + 16 * beta))
    equations.append(shadow_poly.coeff_monomial(1))
    solution = sympy.solve(equations, a, dict=True)[0]
    code_coeffs = {w: sympy.expand(code.coeff_monomial(y**w).subs(solution)) for w in range(n + 1)}
    shadow_coeffs = {w: sympy.expand(shadow_poly.coeff_monomial(y**w).subs(solution)) for w in range(n + 1)}
    return code_coeffs, shadow_coeffs


def extremal_enumerators(beta: Union[int, sympy.Symbol]) -> tuple[dict[int, sympy.Expr], dict[int, sympy.Expr]]:
    """W_{40,C,beta} and W_{40,S,beta} as weight -> coefficient maps.

    With an integer beta the coefficients are integers; with a symbol they
    are linear expressions in it.
    """
    code, shadow_coeffs = _gleason_family(EXTREMAL_LENGTH)
    symbol = sympy.Symbol("beta")
    code_out = {w: sympy.expand(e.subs(symbol, beta)) for w, e in code.items()}
    shadow_out = {w: sympy.expand(e.subs(symbol, beta)) for w, e in shadow_coeffs.items()}
    return (
        {w: e for w, e in code_out.items() if e != 0},
        {w: e for w, e in shadow_out.items() if e != 0},
    )


def extremal_weight_enumerator(beta: int) -> WeightDistribution:
    """W_{40,C,beta} for an admissible beta."""
    if beta not in ALLOWED_BETAS:
        raise ProfileMismatchError(f"no extremal singly even [40,20,8] code has beta={beta}")
    code, _ = extremal_enumerators(beta)
    return WeightDistribution({w: int(e) for w, e in code.items()})


def extremal_shadow_enumerator(beta: int) -> WeightDistribution:
    """W_{40,S,beta} for an admissible beta."""
    if beta not in ALLOWED_BETAS:
        raise ProfileMismatchError(f"no extremal singly even [40,20,8] code has beta={beta}")
    _, shadow_coeffs = extremal_enumerators(beta)
    return WeightDistribution({w: int(e) for w, e in shadow_coeffs.items()})


def check_extremal_profile(c: SelfDualCode) -> ExtremalProfile:
    """Read beta from A_8 and verify both enumerators coefficient by coefficient.

    Raises:
        ProfileMismatchError: If c is not extremal singly even of length 40,
            beta is not admissible, or an enumerator disagrees.
    """
    if c.n != EXTREMAL_LENGTH or c.is_doubly_even:
        raise ProfileMismatchError("profile checks apply to singly even codes of length 40")
    wd = c.distribution
    if wd.min_nonzero_weight() != extremal_bound(c.n):
        raise ProfileMismatchError(f"minimum weight {wd.min_nonzero_weight()} is not extremal")
    excess = wd[8] - 125
    if excess % 16:
        raise ProfileMismatchError(f"A_8 = {wd[8]} is not of the form 125 + 16 beta")
    beta = excess // 16
    if beta not in ALLOWED_BETAS:
        raise ProfileMismatchError(f"beta = {beta} is impossible for an extremal code")
    expected = extremal_weight_enumerator(beta)
    if wd.nonzero() != expected.nonzero():
        raise ProfileMismatchError(f"weight distribution differs from W_40,C,{beta}")
    shadow_wd = shadow(c).shadow_weight_distribution
    expected_shadow = extremal_shadow_enumerator(beta)
    if shadow_wd.nonzero() != expected_shadow.nonzero():
        raise ProfileMismatchError(f"shadow distribution differs from W_40,S,{beta}")
    logger.info(f"Extremal profile verified with beta={beta}")
    return ExtremalProfile(beta, wd, shadow_wd)


@dataclass(frozen=True)
class SyndromeTable:
    """Coset-leader weights (255 = unfilled) and leaders, indexed by syndrome."""

    weights: npt.NDArray[np.uint8]
    leaders: npt.NDArray[np.uint64]
    columns: tuple[int, ...]

    @property
    def covering_radius(self) -> int:
        return int(self.weights.max())


def _syndrome_columns(c: SelfDualCode, max_syndrome_bits: int) -> tuple[int, ...]:
    if c.n > NUMPY_WORD_BITS:
        raise ResourceCapError(f"syndrome tables need n <= {NUMPY_WORD_BITS}")
    h = dual_code(c.gen).rows
    if len(h) > max_syndrome_bits:
        logger.error(f"Syndrome table of 2^{len(h)} entries refused (cap 2^{max_syndrome_bits})")
        raise ResourceCapError(f"{len(h)} syndrome bits exceed the cap {max_syndrome_bits}")
    return tuple(sum(((row >> i) & 1) << r for r, row in enumerate(h)) for i in range(c.n))


def _expand(
    syndromes: npt.NDArray[np.uint64],
    leaders: npt.NDArray[np.uint64],
    columns: npt.NDArray[np.uint64],
    unit: npt.NDArray[np.uint64],
) -> tuple[npt.NDArray[np.uint64], npt.NDArray[np.uint64]]:
    """Neighbours one bit away, reduced to the least leader per syndrome."""
    cand_s = (syndromes[:, None] ^ columns[None, :]).ravel()
    cand_l = (leaders[:, None] ^ unit[None, :]).ravel()
    grow = (leaders[:, None] & unit[None, :]).ravel() == 0
    cand_s, cand_l = cand_s[grow], cand_l[grow]
    order = np.lexsort((cand_l, cand_s))
    cand_s, cand_l = cand_s[order], cand_l[order]
    first = np.ones(len(cand_s), dtype=bool)
    first[1:] = cand_s[1:] != cand_s[:-1]
    return cand_s[first], cand_l[first]


def syndrome_table(
    c: SelfDualCode,
    threads: int = 1,
    max_syndrome_bits: int = DEFAULT_MAX_SYNDROME_BITS,
) -> SyndromeTable:
    """Fill every syndrome with a minimum-weight coset leader, weight by weight.

    The leader kept for a syndrome is the least integer among the weight-w
    vectors reached from the weight-(w-1) leaders, independent of threading.

    Raises:
        ResourceCapError: If n - k exceeds max_syndrome_bits or n > 64.
    """
    columns_t = _syndrome_columns(c, max_syndrome_bits)
    r = c.n - c.gen.k
    size = 1 << r
    weights = np.full(size, UNSET, dtype=np.uint8)
    leaders = np.zeros(size, dtype=np.uint64)
    weights[0] = 0
    columns = np.array(columns_t, dtype=np.uint64)
    unit = np.array([1 << i for i in range(c.n)], dtype=np.uint64)
    frontier = np.zeros(1, dtype=np.uint64)
    filled = 1
    w = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while filled < size:
            w += 1
            chunks = [frontier[i : i + FRONTIER_CHUNK] for i in range(0, len(frontier), FRONTIER_CHUNK)]
            jobs = [pool.submit(_expand, ch, leaders[ch.astype(np.int64)], columns, unit) for ch in chunks]
            for job in jobs:
                s, lead = job.result()
                idx = s.astype(np.int64)
                fresh = weights[idx] == UNSET
                same = weights[idx] == w
                leaders[idx[same]] = np.minimum(leaders[idx[same]], lead[same])
                weights[idx[fresh]] = w
                leaders[idx[fresh]] = lead[fresh]
            frontier = np.nonzero(weights == w)[0].astype(np.uint64)
            filled += len(frontier)
            logger.debug(f"Coset leaders of weight {w}: {len(frontier)} syndromes")
            if len(frontier) == 0:
                raise SelfDualError("syndrome fill stalled before covering the space")
    return SyndromeTable(weights, leaders, columns_t)


def covering_radius(
    c: SelfDualCode,
    threads: int = 1,
    max_syndrome_bits: int = DEFAULT_MAX_SYNDROME_BITS,
) -> int:
    """Largest coset-leader weight over all 2^(n-k) cosets."""
    radius = syndrome_table(c, threads, max_syndrome_bits).covering_radius
    logger.info(f"Covering radius of the n={c.n} code: {radius}")
    return radius


EnumeratorKey = tuple[tuple[int, int], ...]


def coset_weight_distribution(
    c: SelfDualCode,
    min_weight_filter: int,
    threads: int = 1,
    max_syndrome_bits: int = DEFAULT_MAX_SYNDROME_BITS,
) -> dict[EnumeratorKey, int]:
    """Histogram of full coset weight enumerators over cosets of the given minimum weight.

    Keys are the enumerators as increasing (weight, count) pairs.
    """
    table = syndrome_table(c, threads, max_syndrome_bits)
    chosen = table.leaders[table.weights == min_weight_filter]
    words = codeword_array(c.gen, c.max_codewords)
    logger.info(f"Enumerating {len(chosen)} cosets of minimum weight {min_weight_filter}")

    def enumerate_coset(leader: np.uint64) -> EnumeratorKey:
        counts = np.bincount(weights_of(words ^ leader), minlength=c.n + 1)
        return tuple((i, int(x)) for i, x in enumerate(counts) if x)

    census: Counter[EnumeratorKey] = Counter()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(enumerate_coset, chosen)
        for key in tqdm(results, total=len(chosen), desc="cosets", disable=None):
            census[key] += 1
    return dict(sorted(census.items()))


def design_check(c: SelfDualCode, weight_class: int, t: int) -> Optional[tuple[int, int, int]]:
    """Whether the weight-w supports form a t-(n, w, lambda) design.

    Returns:
        (v, k, lambda) or None.
    """
    if t not in (1, 2):
        raise ValidationError(f"design strength must be 1 or 2, got {t}")
    words = codeword_array(c.gen, c.max_codewords)
    block_words = words[weights_of(words) == weight_class]
    if len(block_words) == 0:
        return None
    bits = np.arange(c.n, dtype=np.uint64)
    incidence = ((block_words[:, None] >> bits[None, :]) & np.uint64(1)).astype(np.int64)
    if t == 1:
        per_point = incidence.sum(axis=0)
        if np.all(per_point == per_point[0]):
            return c.n, weight_class, int(per_point[0])
        return None
    pairs = incidence.T @ incidence
    off = pairs[~np.eye(c.n, dtype=bool)]
    if off.size and np.all(off == off[0]):
        return c.n, weight_class, int(off[0])
    return None


def subcodes_containing_one(d: SelfDualCode) -> list[BitMatrix]:
    """All codimension-1 subcodes of d containing the all-one vector (small codes only)."""
    one = coordinates(mask(d.n), d)
    return [
        kernel_of_functional(d, f)
        for f in range(1, 1 << d.gen.k)
        if (one & f).bit_count() % 2 == 0
    ]


def coordinates(x: int, d: SelfDualCode) -> int:
    """Coefficients of x in the reduced basis of d, as a bit mask."""
    coeffs = 0
    for i, p in enumerate(d.pivots):
        if (x >> p) & 1:
            coeffs |= 1 << i
    return coeffs


def kernel_of_functional(d: SelfDualCode, f: int) -> BitMatrix:
    """Kernel of the functional taking basis row i of d to bit i of f."""
    rows = list(d.gen.rows)
    pivot = (f & -f).bit_length() - 1
    kernel = [row ^ rows[pivot] if (f >> i) & 1 else row for i, row in enumerate(rows) if i != pivot]
    return BitMatrix(d.n, tuple(kernel))
