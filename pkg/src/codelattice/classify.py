"""Isomorph-free generation of self-dual codes and the neighbour pipeline.

generate() builds codes of length n from codes of length n - 2 by the
building-up extension and keeps a child only when its appended coordinate
pair is, up to automorphism, the pair picked out by its canonical labeling.
classify_via_neighbors() runs the other direction: it starts from doubly
even codes carrying tetrads of weight-4 words and collects their extremal
singly even neighbours.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from tqdm import tqdm

from codelattice.canonical import (
    CanonicalForm,
    DEFAULT_MAX_SEARCH_NODES,
    SearchBudgetError,
    canonical_form,
    canonical_search,
    group_order,
    pair_orbit,
)
from codelattice.gf2core import (
    BitMatrix,
    BitVector,
    codeword_array,
    dot,
    dual_code,
    from_support,
    mask,
    minimum_weight,
    reduce_vector,
    rref,
    span_array,
    weight,
    weights_of,
)
from codelattice.models import CodeKind, ComputationError, ValidationError
from codelattice.selfdual import (
    SelfDualCode,
    check_extremal_profile,
    coordinates,
    extremal_bound,
    find_t_decomposition,
    kernel_of_functional,
    singly_even_neighbor,
    syndrome_table,
    verify_self_dual,
    EXTREMAL_LENGTH,
)


logger = logging.getLogger(__name__)

DEFAULT_MAX_CLASSIFY_LENGTH = 32
BRUTE_FORCE_MAX_LENGTH = 12


class ClassificationError(ComputationError):
    """Base exception for classification runs."""


class EvenWeightExtensionError(ClassificationError):
    """Raised when the extension vector has even weight."""


class BudgetExceededError(ClassificationError):
    """Raised when a run is larger than its configured budget."""


class InputNotQualifyingError(ClassificationError):
    """Raised when a neighbour-pipeline input lacks the required tetrads."""


@dataclass(frozen=True)
class ClassRecord:
    """One equivalence class: a representative, its canonical form and Aut generators."""

    code: SelfDualCode
    form: CanonicalForm
    generators: tuple[tuple[int, ...], ...]

    @property
    def aut_order(self) -> int:
        return group_order(self.generators, self.code.n)

    @property
    def minimum_weight(self) -> int:
        return self.code.minimum_weight


@dataclass
class GenerationStats:
    """Counters for one generation run."""

    parents_processed: int = 0
    extensions_tried: int = 0
    parent_test_rejections: int = 0


@dataclass
class GenerationRun:
    """Result of generate(): one record per equivalence class."""

    target_length: int
    min_weight_floor: int
    classes: list[ClassRecord] = field(default_factory=list)
    stats: GenerationStats = field(default_factory=GenerationStats)

    @property
    def forms(self) -> list[CanonicalForm]:
        return [record.form for record in self.classes]

    def counts_by_kind(self) -> tuple[int, int]:
        """(doubly even, singly even) class counts."""
        doubly = sum(1 for r in self.classes if r.code.kind is CodeKind.DOUBLY_EVEN)
        return doubly, len(self.classes) - doubly

    def mass(self) -> int:
        """Sum over classes of n!/#Aut."""
        n = self.target_length
        return sum(math.factorial(n) // r.aut_order for r in self.classes)


def extend_by_two(c: SelfDualCode, x: BitVector) -> SelfDualCode:
    """Length n + 2 code spanned by (g, g.x, g.x) for the rows g of c and (x, 1, 0).

    Raises:
        EvenWeightExtensionError: If x has even weight.
        ValidationError: If x has the wrong length.
    """
    n = c.n
    if x.length != n:
        raise ValidationError(f"extension vector has length {x.length}, expected {n}")
    if x.weight % 2 == 0:
        raise EvenWeightExtensionError("the extension vector must have odd weight")
    tail = (1 << n) | (1 << (n + 1))
    rows = [g | tail if dot(g, x.bits) else g for g in c.gen.rows]
    rows.append(x.bits | (1 << n))
    return verify_self_dual(BitMatrix(n + 2, tuple(rows)), c.max_codewords)


def _valid_pairs(child: SelfDualCode) -> list[tuple[int, int]]:
    """Coordinate pairs that do not carry a weight-2 codeword."""
    n = child.n
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if not child.contains((1 << i) | (1 << j))
    ]


def canonical_pair(child: SelfDualCode, form: CanonicalForm) -> tuple[int, int]:
    """The valid pair occupying the largest positions of the canonical ordering."""
    pos = form.ordering

    def key(pair: tuple[int, int]) -> tuple[int, int]:
        a, b = sorted((pos[pair[0]], pos[pair[1]]))
        return b, a

    return max(_valid_pairs(child), key=key)


def parent_test(
    child: SelfDualCode,
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
) -> bool:
    """Whether the two appended coordinates are the canonical pair up to Aut(child)."""
    return _parent_test_record(child, max_nodes)[0]


def _parent_test_record(
    child: SelfDualCode, max_nodes: int
) -> tuple[bool, CanonicalForm, tuple[tuple[int, ...], ...]]:
    result = canonical_search(child.gen, max_nodes=max_nodes)
    appended = frozenset((child.n - 2, child.n - 1))
    best = frozenset(canonical_pair(child, result.form))
    accepted = appended in pair_orbit(result.generators, best)
    return accepted, result.form, tuple(result.generators)


def _coset_orbit_representatives(parent: ClassRecord, floor: int) -> list[tuple[int, int]]:
    """Odd cosets of the parent whose extensions reach the floor, one per Aut orbit.

    Returns:
        (syndrome, leader) pairs in increasing syndrome order.
    """
    code = parent.code
    n = code.n
    table = syndrome_table(code)
    words = codeword_array(code.gen)
    low = words[(weights_of(words) < floor) & (words != 0)]
    if len(low) and int(weights_of(low).min()) + 2 < floor:
        return []
    candidates = []
    for s in range(1, len(table.weights)):
        leader = int(table.leaders[s])
        if weight(leader) % 2 == 0 or int(table.weights[s]) + 1 < floor:
            continue
        # every low word must gain 2 in the extension
        if len(low) and np.any(weights_of(low & np.uint64(leader)) % 2 == 0):
            continue
        candidates.append((s, leader))
    if not candidates or not parent.generators:
        return candidates
    columns = np.array(table.columns, dtype=np.uint64)
    syndromes = np.array([s for s, _ in candidates], dtype=np.int64)
    leaders = np.array([lead for _, lead in candidates], dtype=np.uint64)
    index = {int(s): i for i, s in enumerate(syndromes)}
    parent_of = list(range(len(candidates)))

    def find(i: int) -> int:
        while parent_of[i] != i:
            parent_of[i] = parent_of[parent_of[i]]
            i = parent_of[i]
        return i

    for g in parent.generators:
        image = np.zeros(len(leaders), dtype=np.uint64)
        for i in range(n):
            bit = (leaders >> np.uint64(i)) & np.uint64(1)
            image ^= np.where(bit == 1, columns[g[i]], np.uint64(0))
        for i, s in enumerate(image):
            j = index[int(s)]
            a, b = find(i), find(j)
            if a != b:
                parent_of[max(a, b)] = min(a, b)
    return [candidates[i] for i in range(len(candidates)) if find(i) == i]


def _extend_parent(
    parent: ClassRecord,
    floor: int,
    max_nodes: int,
) -> tuple[list[ClassRecord], GenerationStats]:
    stats = GenerationStats(parents_processed=1)
    accepted: list[ClassRecord] = []
    for _, leader in _coset_orbit_representatives(parent, floor):
        stats.extensions_tried += 1
        child = extend_by_two(parent.code, BitVector(parent.code.n, leader))
        ok, form, generators = _parent_test_record(child, max_nodes)
        if not ok:
            stats.parent_test_rejections += 1
            continue
        accepted.append(ClassRecord(child, form, generators))
    return accepted, stats


def _base_level() -> list[ClassRecord]:
    code = verify_self_dual(BitMatrix(2, (0b11,)))
    result = canonical_search(code.gen)
    return [ClassRecord(code, result.form, tuple(result.generators))]


def _floor_schedule(n: int, floor: int) -> list[tuple[int, int]]:
    """(length, floor) for every level from 4 up to n; parents may lose 2 per level."""
    return [(m, max(2, floor - (n - m))) for m in range(4, n + 1, 2)]


def generate(
    n: int,
    min_weight_floor: int,
    threads: int = 1,
    max_length: int = DEFAULT_MAX_CLASSIFY_LENGTH,
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
) -> GenerationRun:
    """One representative per class of self-dual [n, n/2, >= floor] codes.

    Raises:
        BudgetExceededError: If n exceeds max_length or a canonical search
            runs out of nodes.
        ValidationError: If n is odd or the floor is above the extremal bound.
    """
    if n < 2 or n % 2:
        raise ValidationError(f"length must be even and at least 2, got {n}")
    if min_weight_floor > extremal_bound(n) and n > 2:
        raise ValidationError(f"floor {min_weight_floor} exceeds the bound {extremal_bound(n)}")
    if n > max_length:
        logger.error(f"Refusing classification at n={n} (cap {max_length})")
        raise BudgetExceededError(f"length {n} exceeds the classification cap {max_length}")

    level = _base_level()
    stats = GenerationStats()
    for length, floor in _floor_schedule(n, min_weight_floor):
        logger.info(f"Generating length {length} with minimum weight >= {floor} from {len(level)} parents")
        children: list[ClassRecord] = []
        try:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                jobs = pool.map(lambda p: _extend_parent(p, floor, max_nodes), level)
                for found, parent_stats in tqdm(jobs, total=len(level), desc=f"n={length}", disable=None):
                    children.extend(found)
                    stats.parents_processed += parent_stats.parents_processed
                    stats.extensions_tried += parent_stats.extensions_tried
                    stats.parent_test_rejections += parent_stats.parent_test_rejections
        except SearchBudgetError as e:
            logger.error(f"Canonical search budget exhausted at length {length}: {e}")
            raise BudgetExceededError(str(e)) from e
        hashes = [r.form.certificate_hash for r in children]
        if len(set(hashes)) != len(hashes):
            raise ClassificationError(f"duplicate class emitted at length {length}")
        level = sorted(children, key=lambda r: r.form.certificate_hash)
        logger.info(f"Length {length}: {len(level)} classes")
    if n == 2:
        level = [r for r in level if r.minimum_weight >= min_weight_floor]
    for record in level:
        if record.minimum_weight < min_weight_floor:
            raise ClassificationError("emitted code below the minimum-weight floor")
    return GenerationRun(n, min_weight_floor, level, stats)


def mass_formula_total(n: int) -> int:
    """Number of distinct self-dual codes of length n."""
    if n < 2 or n % 2:
        raise ValidationError(f"length must be even and at least 2, got {n}")
    return math.prod(2**i + 1 for i in range(1, n // 2))


def _extensions(rows: tuple[int, ...], n: int, remaining: int) -> list[int]:
    """Rows that can be put in front of a reduced self-orthogonal basis.

    A candidate lies in the dual, is reduced against rows, has even weight and
    its lowest bit is below every pivot of rows while leaving room for the
    remaining pivots.
    """
    pivots = rref(BitMatrix(n, rows))[2]
    limit = pivots[0] if pivots else n
    if limit <= remaining:
        return []
    # reduction mod the space is linear, so the reduced dual rows span the quotient
    reduced = tuple(reduce_vector(h, rows, pivots) for h in dual_code(BitMatrix(n, rows)).rows)
    words = span_array(rref(BitMatrix(n, reduced))[0].rows)[1:]
    lowest = words & (~words + np.uint64(1))
    keep = (
        (weights_of(words) % 2 == 0)
        & (lowest >= np.uint64(1 << remaining))
        & (lowest < np.uint64(1 << limit))
    )
    return [int(w) for w in words[keep]]


def enumerate_self_dual_spaces(n: int) -> list[BitMatrix]:
    """Every self-dual code of length n, each built exactly once.

    A code is reached only through the suffixes of its reduced row-echelon
    basis: each step puts a new row with a smaller pivot in front.
    """
    if n > BRUTE_FORCE_MAX_LENGTH:
        raise BudgetExceededError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_LENGTH}")
    half = n // 2
    level: list[tuple[int, ...]] = [()]
    for size in range(half):
        remaining = half - size - 1
        level = [(r, *rows) for rows in level for r in _extensions(rows, n, remaining)]
        logger.debug(f"n={n}: {len(level)} self-orthogonal codes of dimension {size + 1}")
    return [BitMatrix(n, rows) for rows in sorted(level)]


def brute_force_classes(n: int) -> dict[str, tuple[CanonicalForm, int]]:
    """Bucket every self-dual code of length n by canonical form.

    Returns:
        certificate hash -> (canonical form, number of codes in the class).
    """
    buckets: dict[str, tuple[CanonicalForm, int]] = {}
    for space in enumerate_self_dual_spaces(n):
        form = canonical_form(space)
        _, count = buckets.get(form.certificate_hash, (form, 0))
        buckets[form.certificate_hash] = (form, count + 1)
    return buckets


@dataclass
class SubcodeSweep:
    """Orbit structure of the codimension-1 subcodes of one doubly even code."""

    subcodes: int
    orbit_representatives: list[BitMatrix]
    orbit_sizes: list[int]
    classes: int  # inequivalent subcodes among the orbit representatives
    minimum_weights: list[Optional[int]] = field(default_factory=list)


def _affine_solutions(constraints: Sequence[tuple[int, int]], k: int) -> list[int]:
    """All f in F_2^k with popcount(f & a) = b mod 2 for every (a, b)."""
    rows: list[tuple[int, int]] = []
    pivots: list[int] = []
    for a, b in constraints:
        for (ra, rb), p in zip(rows, pivots):
            if (a >> p) & 1:
                a, b = a ^ ra, b ^ rb
        if a == 0:
            if b:
                return []
            continue
        p = (a & -a).bit_length() - 1
        rows = [((ra ^ a, rb ^ b) if (ra >> p) & 1 else (ra, rb)) for ra, rb in rows]
        rows.append((a, b))
        pivots.append(p)
    free = [i for i in range(k) if i not in pivots]
    out = []
    for choice in range(1 << len(free)):
        f = 0
        for t, i in enumerate(free):
            if (choice >> t) & 1:
                f |= 1 << i
        for (ra, rb), p in zip(rows, pivots):
            value = rb ^ ((ra & f & ~(1 << p)).bit_count() & 1)
            if value:
                f |= 1 << p
        out.append(f)
    return sorted(out)


def _functional_action(d: SelfDualCode, g: Sequence[int]) -> list[int]:
    """Columns of the matrix moving functional f on d to f composed with g^-1."""
    cols = []
    for p in d.pivots:
        target = g[p]
        cols.append(sum(((row >> target) & 1) << j for j, row in enumerate(d.gen.rows)))
    return cols


def _apply_action(cols: Sequence[int], f: int) -> int:
    out = 0
    while f:
        low = f & -f
        out ^= cols[low.bit_length() - 1]
        f ^= low
    return out


def _orbits(keys: list[int], actions: list[list[int]]) -> dict[int, list[int]]:
    """Orbits of functionals under the given linear actions, keyed by least member."""
    index = {f: i for i, f in enumerate(keys)}
    parent = list(range(len(keys)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for cols in actions:
        for i, f in enumerate(keys):
            j = index[_apply_action(cols, f)]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i, f in enumerate(keys):
        groups.setdefault(keys[find(i)], []).append(f)
    return groups


def _qualifying(d: SelfDualCode, beta: int) -> list[int]:
    if not d.is_doubly_even:
        raise InputNotQualifyingError("neighbour inputs must be doubly even")
    tdec = find_t_decomposition(d, beta)
    if tdec is None:
        raise InputNotQualifyingError(f"weight-4 words do not form {beta} admissible tetrads")
    return [from_support(t) for t in tdec.tetrads]


def subcode_functionals(d: SelfDualCode, beta: int, all_subcodes: bool = False) -> list[int]:
    """Functionals on d whose kernels are the swept codimension-1 subcodes.

    Every kernel contains the all-one vector; unless all_subcodes is set,
    each tetrad word lies outside it.
    """
    tetrads = _qualifying(d, beta) if beta else []
    one = coordinates(mask(d.n), d)
    constraints = [(one, 0)]
    if not all_subcodes:
        constraints += [(coordinates(t, d), 1) for t in tetrads]
    return [f for f in _affine_solutions(constraints, d.gen.k) if f]


def subcode_sweep(
    d: SelfDualCode,
    beta: int,
    all_subcodes: bool = False,
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
) -> SubcodeSweep:
    """Group the codimension-1 subcodes containing 1 into Aut(d)-orbits.

    By default only subcodes avoiding every tetrad word are swept; these are
    exactly the subcodes without weight-4 words.
    """
    keys = subcode_functionals(d, beta, all_subcodes)
    search = canonical_search(d.gen, max_nodes=max_nodes)
    actions = [_functional_action(d, g) for g in search.generators]
    groups = _orbits(keys, actions)
    reps = [kernel_of_functional(d, f) for f in sorted(groups)]
    sizes = [len(groups[f]) for f in sorted(groups)]
    hashes = {canonical_form(sub, max_nodes=max_nodes).certificate_hash for sub in reps}
    min_weights = [minimum_weight(sub) for sub in tqdm(reps, desc="orbits", disable=None)]
    logger.info(f"{len(keys)} subcodes in {len(reps)} orbits, {len(hashes)} classes")
    return SubcodeSweep(len(keys), reps, sizes, len(hashes), min_weights)


def classify_via_neighbors(
    d_list: Sequence[SelfDualCode],
    beta: int,
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
) -> list[SelfDualCode]:
    """Extremal singly even neighbours of doubly even codes with beta tetrads.

    Raises:
        InputNotQualifyingError: If an input is not doubly even or its
            weight-4 words do not form beta admissible tetrads.
    """
    found: dict[str, SelfDualCode] = {}
    for d in d_list:
        sweep = subcode_sweep(d, beta, max_nodes=max_nodes)
        bound = extremal_bound(d.n)
        for sub in sweep.orbit_representatives:
            c = singly_even_neighbor(d, sub)
            if c.minimum_weight != bound:
                continue
            if d.n == EXTREMAL_LENGTH and check_extremal_profile(c).beta != beta:
                continue
            form = canonical_form(c.gen, max_nodes=max_nodes)
            found.setdefault(form.certificate_hash, c)
    logger.info(f"{len(found)} extremal singly even classes with beta={beta}")
    return [found[h] for h in sorted(found)]


def first_extremal_neighbor(d: SelfDualCode, beta: int) -> Optional[SelfDualCode]:
    """The first extremal singly even neighbour in functional order, without equivalence tests."""
    bound = extremal_bound(d.n)
    for f in subcode_functionals(d, beta):
        c = singly_even_neighbor(d, kernel_of_functional(d, f))
        if c.minimum_weight != bound:
            continue
        if d.n == EXTREMAL_LENGTH and check_extremal_profile(c).beta != beta:
            continue
        return c
    logger.warning(f"No extremal singly even neighbour with beta={beta}")
    return None
