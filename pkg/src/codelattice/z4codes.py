"""Z4-linear codes: standard form, duality, Euclidean weights and Type I/II."""

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np
import numpy.typing as npt

from codelattice.models import ComputationError, ValidationError, Z4Type


logger = logging.getLogger(__name__)

DEFAULT_MAX_Z4_CODEWORDS = 1 << 22
EUCLIDEAN = (0, 1, 4, 1)


class Z4CodeError(ComputationError):
    """Base exception for Z4-code operations."""


class NotSelfDualError(Z4CodeError):
    """Raised when an operation needs a self-dual Z4-code."""


class CapExceededError(Z4CodeError):
    """Raised when the search cap is reached without finding a codeword."""


@dataclass(frozen=True)
class StandardForm:
    """Rows (I A B ; O 2I 2C) after the column reordering column_order."""

    rows: tuple[tuple[int, ...], ...]
    k1: int
    k2: int
    column_order: tuple[int, ...]  # position j holds original column column_order[j]


@dataclass(frozen=True)
class EuclideanWeightInfo:
    """Minimum Euclidean weight and the number of codewords attaining it."""

    minimum: int
    count: int


@dataclass(frozen=True)
class Z4Code:
    """Row span over Z4 of the given generator rows."""

    n: int
    rows: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        """Validate row lengths and entries.

        Raises:
            ValidationError: If a row has the wrong length or an entry outside 0..3.
        """
        for i, row in enumerate(self.rows):
            if len(row) != self.n:
                raise ValidationError(f"row {i} has length {len(row)}, expected {self.n}")
            if any(x not in (0, 1, 2, 3) for x in row):
                raise ValidationError(f"row {i} has an entry outside Z4")

    def __post_init__(self) -> None:
        """Validate after initialization."""
        self.validate()

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "Z4Code":
        n = len(lines[0]) if lines else 0
        rows = []
        for i, line in enumerate(lines):
            if any(ch not in "0123" for ch in line):
                raise ValidationError(f"row {i} has a character outside 0123")
            rows.append(tuple(int(ch) for ch in line))
        return cls(n, tuple(rows))

    def to_strings(self) -> list[str]:
        return ["".join(str(x) for x in row) for row in self.rows]

    @cached_property
    def standard_form(self) -> StandardForm:
        return standard_form(self)

    @property
    def k1(self) -> int:
        return self.standard_form.k1

    @property
    def k2(self) -> int:
        return self.standard_form.k2

    @property
    def size(self) -> int:
        return 4**self.k1 * 2**self.k2


def euclidean_weight(x: Sequence[int]) -> int:
    """n1 + 4 n2 + n3."""
    return sum(EUCLIDEAN[v % 4] for v in x)


def _inner(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y)) % 4


def _swap_columns(rows: list[list[int]], order: list[int], i: int, j: int) -> None:
    if i == j:
        return
    for row in rows:
        row[i], row[j] = row[j], row[i]
    order[i], order[j] = order[j], order[i]


def _find(rows: list[list[int]], start: int, accept: tuple[int, ...]) -> Optional[tuple[int, int]]:
    for i in range(start, len(rows)):
        for j in range(start, len(rows[i])):
            if rows[i][j] in accept:
                return i, j
    return None


def standard_form(c: Z4Code) -> StandardForm:
    """Row reduce to (I A B ; O 2I 2C): unit pivots first, then pivots equal to 2."""
    rows = [list(r) for r in c.rows]
    order = list(range(c.n))
    r = 0
    while (hit := _find(rows, r, (1, 3))) is not None:
        i, j = hit
        rows[r], rows[i] = rows[i], rows[r]
        _swap_columns(rows, order, r, j)
        if rows[r][r] == 3:
            rows[r] = [(3 * x) % 4 for x in rows[r]]
        for t in range(len(rows)):
            if t != r and rows[t][r]:
                factor = rows[t][r]
                rows[t] = [(x - factor * y) % 4 for x, y in zip(rows[t], rows[r])]
        r += 1
    k1 = r
    while (hit := _find(rows, r, (2,))) is not None:
        i, j = hit
        rows[r], rows[i] = rows[i], rows[r]
        _swap_columns(rows, order, r, j)
        for t in range(len(rows)):
            if t != r and rows[t][r] in (2, 3):
                rows[t] = [(x - y) % 4 for x, y in zip(rows[t], rows[r])]
        r += 1
    k2 = r - k1
    return StandardForm(tuple(tuple(row) for row in rows[:r]), k1, k2, tuple(order))


def z4_dual(c: Z4Code) -> Z4Code:
    """Generator of the dual code, from the standard form.

    For (I A B ; O 2I 2C) the dual is (-(B + AC)^T  C^T  I ; 2A^T  2I  O),
    with the column reordering undone.
    """
    sf = c.standard_form
    k1, k2, n = sf.k1, sf.k2, c.n
    k3 = n - k1 - k2
    a = [[sf.rows[i][k1 + j] for j in range(k2)] for i in range(k1)]
    b = [[sf.rows[i][k1 + k2 + j] for j in range(k3)] for i in range(k1)]
    cc = [[(sf.rows[k1 + i][k1 + k2 + j] // 2) for j in range(k3)] for i in range(k2)]
    dual_rows: list[list[int]] = []
    for j in range(k3):
        row = [(-(b[i][j] + sum(a[i][t] * cc[t][j] for t in range(k2)))) % 4 for i in range(k1)]
        row += [cc[t][j] % 4 for t in range(k2)]
        row += [1 if s == j else 0 for s in range(k3)]
        dual_rows.append(row)
    for t in range(k2):
        row = [(2 * a[i][t]) % 4 for i in range(k1)]
        row += [2 if s == t else 0 for s in range(k2)]
        row += [0] * k3
        dual_rows.append(row)
    original = []
    for row in dual_rows:
        out = [0] * n
        for pos, value in enumerate(row):
            out[sf.column_order[pos]] = value
        original.append(tuple(out))
    return Z4Code(n, tuple(original))


def is_self_orthogonal(c: Z4Code) -> bool:
    return all(_inner(c.rows[i], c.rows[j]) == 0 for i in range(len(c.rows)) for j in range(i, len(c.rows)))


def z4_self_dual_check(c: Z4Code) -> Z4Type:
    """Self-duality and type.

    Euclidean weight mod 8 is a quadratic form on a self-orthogonal code, so
    checking the rows and their pairwise sums decides Type II.
    """
    if not is_self_orthogonal(c) or 2 * c.k1 + c.k2 != c.n:
        return Z4Type.NOT_SELF_DUAL
    rows = c.standard_form.rows
    for i, x in enumerate(rows):
        if euclidean_weight(x) % 8:
            return Z4Type.TYPE_I
        for y in rows[i + 1 :]:
            if euclidean_weight([p + q for p, q in zip(x, y)]) % 8:
                return Z4Type.TYPE_I
    return Z4Type.TYPE_II


def z4_extremal_bound(n: int, type_i: bool = True) -> tuple[int, bool]:
    """Bound on d_E and whether the Type I exception for n = 23 mod 24 applied."""
    if n < 1:
        raise ValidationError(f"length must be positive, got {n}")
    if type_i and n % 24 == 23:
        return 8 * (n // 24) + 12, True
    return 8 * (n // 24) + 8, False


def codeword_matrix(c: Z4Code, max_codewords: int = DEFAULT_MAX_Z4_CODEWORDS) -> npt.NDArray[np.int8]:
    """Every codeword, one per row.

    Raises:
        CapExceededError: If the code has more than max_codewords words.
    """
    if c.size > max_codewords:
        raise CapExceededError(f"{c.size} codewords exceed the cap {max_codewords}")
    sf = c.standard_form
    words = np.zeros((1, c.n), dtype=np.int8)
    for idx, row in enumerate(sf.rows):
        vec = np.zeros(c.n, dtype=np.int8)
        for pos, value in enumerate(row):
            vec[sf.column_order[pos]] = value
        multiples = range(4) if idx < sf.k1 else range(2)
        words = np.concatenate([(words + t * vec) % 4 for t in multiples]).astype(np.int8)
    return words


def sample_codewords(c: Z4Code, count: int, seed: int = 0) -> list[tuple[int, ...]]:
    """Random codewords as Z4 combinations of the generator rows."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        word = [0] * c.n
        for row in c.rows:
            t = rng.randrange(4)
            word = [(x + t * y) % 4 for x, y in zip(word, row)]
        out.append(tuple(word))
    return out


def _weights_of(words: npt.NDArray[np.int8]) -> npt.NDArray[np.int64]:
    table = np.array(EUCLIDEAN, dtype=np.int64)
    return table[words.astype(np.int64)].sum(axis=1)


def min_euclidean_weight(
    c: Z4Code,
    cap: int,
    max_codewords: int = DEFAULT_MAX_Z4_CODEWORDS,
    threads: int = 1,
) -> EuclideanWeightInfo:
    """Minimum Euclidean weight, exact when it is at most cap.

    Small codes are enumerated directly; larger self-dual codes go through
    the short vectors of A4(c), whose vectors of norm w/4 with nonzero
    residue are the minimal lifts of codewords of Euclidean weight w.

    Raises:
        CapExceededError: If no nonzero codeword of weight <= cap is found.
    """
    if c.size <= max_codewords:
        weights = _weights_of(codeword_matrix(c, max_codewords))[1:]
        if len(weights) == 0:
            raise CapExceededError("the zero code has no nonzero codewords")
        low = int(weights.min())
        return EuclideanWeightInfo(low, int((weights == low).sum()))

    from codelattice.lattice import construct_A4, short_vector_list

    lattice = construct_A4(c)
    vectors = short_vector_list(lattice, Fraction(cap, 4), threads=threads)
    residues: dict[int, set[tuple[int, ...]]] = {}
    for z in vectors:
        residue = tuple(v % 4 for v in z)
        if any(residue):
            residues.setdefault(euclidean_weight(residue), set()).add(residue)
    if not residues:
        logger.warning(f"No codeword of Euclidean weight <= {cap}")
        raise CapExceededError(f"no nonzero codeword of Euclidean weight <= {cap}")
    low = min(residues)
    return EuclideanWeightInfo(low, len(residues[low]))
