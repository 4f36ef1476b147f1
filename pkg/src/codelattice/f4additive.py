"""Additive F4-codes under the trace inner product and the B-map to binary codes.

An element a*w + b of F4 = {0, 1, w, w^2} is stored as the bit pair (a, b),
and a length-n vector as two n-bit masks.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from codelattice.canonical import DEFAULT_MAX_SEARCH_NODES, MAX_CANONICAL_LENGTH, canonical_search, group_order
from codelattice.gf2core import BitMatrix, histogram, mask, rref, span_array
from codelattice.models import ComputationError, ValidationError, WeightDistribution
from codelattice.selfdual import SelfDualCode, verify_self_dual


logger = logging.getLogger(__name__)

MAX_ENUMERATION_LENGTH = 16
SYMBOLS = "01wW"  # W stands for w^2
RHO_TETRAD = {1: 0b0011, 2: 0b0101, 3: 0b0110}  # 1 -> 1100, w -> 1010, w^2 -> 0110
IMAGE_TRIPLE = {1: 0b011, 2: 0b101, 3: 0b110}  # 1 -> 110, w -> 101, w^2 -> 011


class AdditiveCodeError(ComputationError):
    """Base exception for additive F4-code operations."""


class NotEvenSelfDualError(AdditiveCodeError):
    """Raised when the B-map input is not even self-dual."""


def f4_add(x: int, y: int) -> int:
    return x ^ y


def f4_mul(x: int, y: int) -> int:
    """Product of elements encoded as 2a + b for a*w + b."""
    a, b = x >> 1, x & 1
    c, d = y >> 1, y & 1
    return (((a & c) ^ (a & d) ^ (b & c)) << 1) | ((a & c) ^ (b & d))


def trace_product_entry(x: int, y: int) -> int:
    """x*y^2 + x^2*y, which lies in {0, 1}."""
    value = f4_add(f4_mul(x, f4_mul(y, y)), f4_mul(f4_mul(x, x), y))
    if value > 1:
        raise AdditiveCodeError(f"trace form left F2 on ({x}, {y})")
    return value


@dataclass(frozen=True)
class AdditiveF4Code:
    """GF(2)-span of k rows over F4, each row a pair of n-bit masks (w part, 1 part)."""

    n: int
    rows: tuple[tuple[int, int], ...]

    def validate(self) -> None:
        """Validate the rows.

        Raises:
            ValidationError: If a mask is too wide or the rows are dependent.
        """
        for a, b in self.rows:
            if a >> self.n or b >> self.n or a < 0 or b < 0:
                raise ValidationError(f"row does not fit in length {self.n}")
        if rref(self.packed())[1] != len(self.rows):
            raise ValidationError("generator rows are not GF(2)-independent")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "AdditiveF4Code":
        n = len(lines[0]) if lines else 0
        rows = []
        for r, line in enumerate(lines):
            if len(line) != n:
                raise ValidationError(f"row {r} has length {len(line)}, expected {n}")
            a = b = 0
            for i, ch in enumerate(line):
                if ch not in SYMBOLS:
                    raise ValidationError(f"invalid F4 symbol {ch!r} in row {r}")
                value = SYMBOLS.index(ch)
                a |= (value >> 1) << i
                b |= (value & 1) << i
            rows.append((a, b))
        return cls(n, tuple(rows))

    @property
    def k(self) -> int:
        return len(self.rows)

    def entry(self, row: int, i: int) -> int:
        a, b = self.rows[row]
        return (((a >> i) & 1) << 1) | ((b >> i) & 1)

    def to_strings(self) -> list[str]:
        return ["".join(SYMBOLS[self.entry(r, i)] for i in range(self.n)) for r in range(self.k)]

    def packed(self) -> BitMatrix:
        """Rows as 2n-bit binary vectors: the w part then the 1 part."""
        return BitMatrix(2 * self.n, tuple(a | (b << self.n) for a, b in self.rows))

    def transformed(self, perm: Sequence[int], symbol_maps: Sequence[Sequence[int]]) -> "AdditiveF4Code":
        """Apply per-coordinate permutations of {1, w, w^2} then move coordinate i to perm[i].

        symbol_maps[i] lists the images of 1, w, w^2 at coordinate i.
        """
        rows = []
        for r in range(self.k):
            a = b = 0
            for i in range(self.n):
                value = self.entry(r, i)
                if value:
                    value = symbol_maps[i][value - 1]
                a |= (value >> 1) << perm[i]
                b |= (value & 1) << perm[i]
            rows.append((a, b))
        return AdditiveF4Code(self.n, tuple(rows))

    @cached_property
    def codewords(self) -> np.ndarray:
        """All 2^k codewords packed as in packed()."""
        if self.n > MAX_ENUMERATION_LENGTH:
            raise AdditiveCodeError(f"enumeration limited to n <= {MAX_ENUMERATION_LENGTH}")
        return span_array(self.packed().rows)


def trace_product(x: tuple[int, int], y: tuple[int, int]) -> int:
    """Trace inner product of two packed vectors."""
    (a1, b1), (a2, b2) = x, y
    return ((a1 & b2) ^ (a2 & b1)).bit_count() & 1


def hamming_weights(c: AdditiveF4Code) -> np.ndarray:
    words = c.codewords
    low = np.uint64(mask(c.n))
    return (words & low) | (words >> np.uint64(c.n))


def weight_distribution(c: AdditiveF4Code) -> WeightDistribution:
    """Hamming weight distribution over all 2^k codewords."""
    return histogram(hamming_weights(c), c.n)


def is_even(c: AdditiveF4Code) -> bool:
    return all(w % 2 == 0 for w in weight_distribution(c).nonzero())


def trace_dual_check(c: AdditiveF4Code) -> bool:
    """Self-dual under the trace form: rows pairwise orthogonal and k = n."""
    if c.k != c.n:
        return False
    return all(
        trace_product(c.rows[i], c.rows[j]) == 0 for i in range(c.k) for j in range(i + 1, c.k)
    )


def f4_extremal_bound(n: int) -> int:
    """Upper bound on the minimum weight of an even self-dual additive code."""
    if n % 2:
        raise ValidationError(f"length must be even, got {n}")
    return 2 * (n // 6) + 2


def _expand(c: AdditiveF4Code, patterns: dict[int, int], width: int) -> list[int]:
    out = []
    for r in range(c.k):
        word = 0
        for i in range(c.n):
            value = c.entry(r, i)
            if value:
                word |= patterns[value] << (width * i)
        out.append(word)
    return out


def b_map(c: AdditiveF4Code) -> SelfDualCode:
    """rho(C) + {0000, 1111}^n, a doubly even self-dual code of length 4n.

    Raises:
        NotEvenSelfDualError: If c is not even self-dual.
    """
    if not trace_dual_check(c) or not is_even(c):
        logger.error(f"B-map input of length {c.n} is not even self-dual")
        raise NotEvenSelfDualError("the B-map needs an even self-dual additive code")
    rows = _expand(c, RHO_TETRAD, 4) + [0b1111 << (4 * i) for i in range(c.n)]
    code = verify_self_dual(BitMatrix(4 * c.n, tuple(rows)))
    if not code.is_doubly_even:
        raise AdditiveCodeError("B-map image is not doubly even")
    return code


def binary_image(c: AdditiveF4Code) -> BitMatrix:
    """Length-3n image with 1 -> 110, w -> 101, w^2 -> 011."""
    return BitMatrix(3 * c.n, tuple(_expand(c, IMAGE_TRIPLE, 3)))


def _triples(n: int) -> tuple[int, ...]:
    return tuple(0b111 << (3 * i) for i in range(n))


def f4_equivalence_certificate(c: AdditiveF4Code, max_nodes: int = DEFAULT_MAX_SEARCH_NODES) -> str:
    """Certificate invariant under coordinate permutations and symbol permutations.

    The binary image is canonized with its coordinate triples as a preserved
    block system, so only triple-respecting permutations count.
    """
    if c.n > MAX_ENUMERATION_LENGTH:
        raise AdditiveCodeError(f"certificates limited to n <= {MAX_ENUMERATION_LENGTH}")
    return canonical_search(binary_image(c), _triples(c.n), max_nodes).form.certificate_hash


def f4_automorphism_order(
    c: AdditiveF4Code,
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
    max_length: int = MAX_CANONICAL_LENGTH,
) -> int:
    """Order of the group of triple-respecting symmetries of the binary image."""
    result = canonical_search(binary_image(c), _triples(c.n), max_nodes, max_length=max_length)
    return group_order(result.generators, 3 * c.n)
