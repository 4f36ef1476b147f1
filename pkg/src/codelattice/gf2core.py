"""Bit-packed linear algebra over GF(2).

Coordinate i of a length-n vector is bit i of a Python int, so a vector is
its own integer and addition is XOR.  Matrices are immutable tuples of such
rows.  Codeword streams use Gray-code order, and bulk weight counts go
through numpy uint64 arrays with hardware population counts.
"""

import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from codelattice.models import ComputationError, ValidationError, WeightDistribution


logger = logging.getLogger(__name__)

DEFAULT_MAX_CODEWORDS = 1 << 24
NUMPY_WORD_BITS = 64  # codeword arrays need n <= 64


class GF2Error(ComputationError):
    """Base exception for GF(2) operations."""


class DimensionTooLargeError(GF2Error):
    """Raised when an exhaustive enumeration would exceed its cap."""


def mask(n: int) -> int:
    """Integer with the low n bits set (the all-one vector of length n)."""
    return (1 << n) - 1


def weight(x: int) -> int:
    """Hamming weight of a packed vector."""
    return x.bit_count()


def dot(x: int, y: int) -> int:
    """Standard inner product over GF(2)."""
    return (x & y).bit_count() & 1


def support(x: int) -> tuple[int, ...]:
    """Coordinates where x is 1, increasing."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return tuple(out)


def from_support(coords: Iterable[int]) -> int:
    """Packed vector with ones at the given coordinates."""
    x = 0
    for i in coords:
        x |= 1 << i
    return x


def permute_bits(x: int, perm: Sequence[int]) -> int:
    """Move coordinate i of x to coordinate perm[i]."""
    y = 0
    while x:
        low = x & -x
        y |= 1 << perm[low.bit_length() - 1]
        x ^= low
    return y


def vector_to_string(x: int, n: int) -> str:
    """Render as n characters, coordinate 0 first."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def string_to_vector(s: str) -> int:
    """Parse a 0/1 string, coordinate 0 first.

    Raises:
        ValidationError: If a character is not 0 or 1.
    """
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValidationError(f"invalid binary character {ch!r} at column {i}")
    return x


def lex_key(x: int, n: int) -> int:
    """Sort key reproducing the string order of vector_to_string."""
    return int(vector_to_string(x, n)[::-1], 2) if n else 0


@dataclass(frozen=True)
class BitVector:
    """A vector of F_2^n."""

    length: int
    bits: int = 0

    def validate(self) -> None:
        """Validate the vector.

        Raises:
            ValidationError: If bits reach past the length.
        """
        if self.length < 0:
            raise ValidationError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValidationError(f"bits set beyond length {self.length}")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        return cls(len(s), string_to_vector(s))

    @property
    def weight(self) -> int:
        return weight(self.bits)

    def support(self) -> tuple[int, ...]:
        return support(self.bits)

    def dot(self, other: "BitVector") -> int:
        return dot(self.bits, other.bits)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if other.length != self.length:
            raise ValidationError("length mismatch")
        return BitVector(self.length, self.bits ^ other.bits)

    def __str__(self) -> str:
        return vector_to_string(self.bits, self.length)


@dataclass(frozen=True)
class BitMatrix:
    """A k x n matrix over GF(2), one packed int per row."""

    n: int
    rows: tuple[int, ...] = ()

    def validate(self) -> None:
        """Validate the matrix.

        Raises:
            ValidationError: If a row does not fit in n columns.
        """
        if self.n < 0:
            raise ValidationError("n must be nonnegative")
        for i, row in enumerate(self.rows):
            if row < 0 or row >> self.n:
                raise ValidationError(f"row {i} has bits beyond column {self.n}")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    @classmethod
    def from_strings(cls, lines: Sequence[str], n: Optional[int] = None) -> "BitMatrix":
        width = n if n is not None else (len(lines[0]) if lines else 0)
        for i, line in enumerate(lines):
            if len(line) != width:
                raise ValidationError(f"row {i} has length {len(line)}, expected {width}")
        return cls(width, tuple(string_to_vector(line) for line in lines))

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], n: int) -> "BitMatrix":
        for v in vectors:
            if v.length != n:
                raise ValidationError(f"vector of length {v.length} in a matrix of width {n}")
        return cls(n, tuple(v.bits for v in vectors))

    @property
    def k(self) -> int:
        """Number of rows (not necessarily the rank)."""
        return len(self.rows)

    def to_strings(self) -> list[str]:
        return [vector_to_string(r, self.n) for r in self.rows]

    def vectors(self) -> list[BitVector]:
        return [BitVector(self.n, r) for r in self.rows]

    def rank(self) -> int:
        return rref(self)[1]

    def with_rows(self, extra: Iterable[int]) -> "BitMatrix":
        return BitMatrix(self.n, self.rows + tuple(extra))

    def permuted(self, perm: Sequence[int]) -> "BitMatrix":
        """Apply a coordinate permutation: column i moves to perm[i]."""
        return BitMatrix(self.n, tuple(permute_bits(r, perm) for r in self.rows))

    def direct_sum(self, other: "BitMatrix") -> "BitMatrix":
        shifted = tuple(r << self.n for r in other.rows)
        return BitMatrix(self.n + other.n, self.rows + shifted)

    def contains(self, x: int) -> bool:
        """Whether x lies in the row space."""
        reduced, _, pivots = rref(self)
        return reduce_vector(x, reduced.rows, pivots) == 0

    def same_space(self, other: "BitMatrix") -> bool:
        """Row-space equality (compares reduced forms)."""
        return self.n == other.n and rref(self)[0].rows == rref(other)[0].rows

    def is_self_orthogonal(self) -> bool:
        """G G^T = 0, diagonal included."""
        rows = self.rows
        return all(dot(rows[i], rows[j]) == 0 for i in range(len(rows)) for j in range(i, len(rows)))


def rref(m: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row-echelon form with pivots in increasing column order.

    The reduced form of a row space is unique, so comparing the returned rows
    decides row-space equality.

    Args:
        m: Input matrix.

    Returns:
        (reduced matrix without zero rows, rank, pivot columns).
    """
    rows = list(m.rows)
    pivots: list[int] = []
    r = 0
    for col in range(m.n):
        if r == len(rows):
            break
        bit = 1 << col
        pr = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pivot_row = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pivot_row
        pivots.append(col)
        r += 1
    return BitMatrix(m.n, tuple(rows[:r])), r, pivots


def reduce_vector(x: int, reduced_rows: Sequence[int], pivots: Sequence[int]) -> int:
    """Remainder of x modulo a row space given in reduced form."""
    for row, p in zip(reduced_rows, pivots):
        if (x >> p) & 1:
            x ^= row
    return x


def dual_code(m: BitMatrix) -> BitMatrix:
    """Generator matrix of {x : x.g = 0 for every row g of m}.

    One generator per non-pivot column c: e_c plus the pivots of the reduced
    rows that have a one in column c.
    """
    reduced, _, pivots = rref(m)
    pivot_set = set(pivots)
    out = []
    for c in range(m.n):
        if c in pivot_set:
            continue
        v = 1 << c
        for row, p in zip(reduced.rows, pivots):
            if (row >> c) & 1:
                v |= 1 << p
        out.append(v)
    return BitMatrix(m.n, tuple(out))


def _checked_basis(m: BitMatrix, max_codewords: int) -> tuple[int, ...]:
    reduced, k, _ = rref(m)
    if k >= 63 or (1 << k) > max_codewords:
        logger.error(f"Refusing to enumerate 2^{k} codewords (cap {max_codewords})")
        raise DimensionTooLargeError(f"dimension {k} exceeds the enumeration cap {max_codewords}")
    return reduced.rows


def iter_codeword_ints(m: BitMatrix, max_codewords: int = DEFAULT_MAX_CODEWORDS) -> Iterator[int]:
    """Codewords as packed ints in Gray-code order, starting at zero."""
    basis = _checked_basis(m, max_codewords)
    word = 0
    yield word
    for i in range(1, 1 << len(basis)):
        word ^= basis[(i & -i).bit_length() - 1]
        yield word


def enumerate_codewords(m: BitMatrix, max_codewords: int = DEFAULT_MAX_CODEWORDS) -> Iterator[BitVector]:
    """Yield each codeword exactly once, one row XOR per step.

    Raises:
        DimensionTooLargeError: If 2^rank exceeds max_codewords.
    """
    for word in iter_codeword_ints(m, max_codewords):
        yield BitVector(m.n, word)


def span_array(basis: Sequence[int]) -> npt.NDArray[np.uint64]:
    """All 2^k combinations of the given rows; entry j combines the rows set in j."""
    arr = np.zeros(1, dtype=np.uint64)
    for row in basis:
        arr = np.concatenate([arr, arr ^ np.uint64(row)])
    return arr


def codeword_array(m: BitMatrix, max_codewords: int = DEFAULT_MAX_CODEWORDS) -> npt.NDArray[np.uint64]:
    """Every codeword in a uint64 array (n <= 64).

    Raises:
        GF2Error: If n exceeds 64.
        DimensionTooLargeError: If 2^rank exceeds max_codewords.
    """
    if m.n > NUMPY_WORD_BITS:
        raise GF2Error(f"codeword arrays need n <= {NUMPY_WORD_BITS}, got {m.n}")
    return span_array(_checked_basis(m, max_codewords))


def weights_of(arr: npt.NDArray[np.uint64]) -> npt.NDArray[np.uint8]:
    """Elementwise population count."""
    return np.bitwise_count(arr)


def histogram(arr: npt.NDArray[np.uint64], n: int) -> WeightDistribution:
    """Weight distribution of an array of packed words."""
    counts = np.bincount(weights_of(arr), minlength=n + 1)
    return WeightDistribution({i: int(c) for i, c in enumerate(counts) if c})


def weight_distribution(m: BitMatrix, max_codewords: int = DEFAULT_MAX_CODEWORDS) -> WeightDistribution:
    """A_i = number of codewords of weight i.

    Raises:
        DimensionTooLargeError: If 2^rank exceeds max_codewords.
    """
    if m.n <= NUMPY_WORD_BITS:
        return histogram(codeword_array(m, max_codewords), m.n)
    counts = [0] * (m.n + 1)
    for word in iter_codeword_ints(m, max_codewords):
        counts[word.bit_count()] += 1
    return WeightDistribution({i: c for i, c in enumerate(counts) if c})


def minimum_weight(m: BitMatrix, max_codewords: int = DEFAULT_MAX_CODEWORDS) -> Optional[int]:
    """Smallest nonzero weight, or None for the zero code."""
    return weight_distribution(m, max_codewords).min_nonzero_weight()


def words_of_weight(m: BitMatrix, w: int, max_codewords: int = DEFAULT_MAX_CODEWORDS) -> list[int]:
    """All codewords of weight w as packed ints, increasing."""
    if m.n <= NUMPY_WORD_BITS:
        arr = codeword_array(m, max_codewords)
        return sorted(int(x) for x in arr[weights_of(arr) == w])
    return sorted(x for x in iter_codeword_ints(m, max_codewords) if x.bit_count() == w)


def krawtchouk(n: int, j: int, i: int) -> int:
    """K_j(i) for length n."""
    return sum((-1) ** s * math.comb(i, s) * math.comb(n - i, j - s) for s in range(j + 1))


def macwilliams_transform(wd: WeightDistribution, n: int) -> WeightDistribution:
    """Weight distribution of the dual code, from the code's own distribution.

    Raises:
        GF2Error: If the input does not come from a linear code.
    """
    size = wd.total
    if size <= 0 or size & (size - 1):
        raise GF2Error(f"code size {size} is not a power of two")
    out: dict[int, int] = {}
    for j in range(n + 1):
        total = sum(count * krawtchouk(n, j, i) for i, count in wd.counts.items())
        if total % size:
            raise GF2Error(f"non-integral dual count at weight {j}")
        if total:
            out[j] = total // size
    return WeightDistribution(out)
