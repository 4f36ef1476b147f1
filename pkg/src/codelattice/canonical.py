"""Code equivalence under coordinate permutations.

Canonical forms come from an individualization-refinement search over
orderings of the coordinates.  Coordinates are partitioned by how they sit
in the low-weight codewords; the partition is refined until equitable, a
vertex of the first smallest non-singleton cell is individualized, and the
search recurses.  Each discrete leaf fixes an ordering; the canonical form
is the least reduced generator matrix over all leaves.  Leaves with equal
matrices differ by an automorphism, which prunes the rest of the search.
"""

import hashlib
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from codelattice.gf2core import (
    BitMatrix,
    DEFAULT_MAX_CODEWORDS,
    codeword_array,
    dual_code,
    permute_bits,
    rref,
    weights_of,
)
from codelattice.models import ComputationError


logger = logging.getLogger(__name__)

MAX_CANONICAL_LENGTH = 64
DEFAULT_MAX_SEARCH_NODES = 5_000_000
MIN_REFINING_WORDS_PER_COORD = 2  # stop adding weight classes once |words| >= 2n
MAX_REFINING_CLASSES = 3
BLOCK_TAG = -1


class CanonicalError(ComputationError):
    """Base exception for canonical-form computations."""


class LengthCapError(CanonicalError):
    """Raised when the code is too long for the canonical search."""


class SearchBudgetError(CanonicalError):
    """Raised when the search tree exceeds its node budget."""


Certificate = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical representative of an equivalence class."""

    canonical_generator: BitMatrix
    ordering: tuple[int, ...]  # coordinate i of the input goes to ordering[i]
    certificate_hash: str
    blocks: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return self.canonical_generator.n

    def certificate(self) -> Certificate:
        return self.canonical_generator.rows, self.blocks


@dataclass(frozen=True)
class AutomorphismInfo:
    """Order of Aut(C) and a generating set found by the search."""

    order: int
    generators: tuple[tuple[int, ...], ...] = ()


@dataclass
class SearchResult:
    """Everything one canonical search produces."""

    form: CanonicalForm
    generators: list[tuple[int, ...]] = field(default_factory=list)
    nodes: int = 0

    def automorphisms(self) -> AutomorphismInfo:
        n = self.form.n
        return AutomorphismInfo(group_order(self.generators, n), tuple(self.generators))


def certificate_hash(n: int, rows: Sequence[int], blocks: Sequence[int] = ()) -> str:
    """Digest of a canonical matrix under a fixed serialization."""
    width = max(1, (n + 3) // 4)
    payload = f"{n}|" + ",".join(f"{r:0{width}x}" for r in rows)
    if blocks:
        payload += "|" + ",".join(f"{b:0{width}x}" for b in blocks)
    return hashlib.sha256(payload.encode("ascii")).hexdigest()


def group_order(generators: Sequence[Sequence[int]], n: int) -> int:
    """Order of the permutation group generated on n points."""
    if n == 0:
        return 1
    perms = [Permutation(list(g)) for g in generators] or [Permutation(list(range(n)))]
    return int(PermutationGroup(perms).order())


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def point_orbits(generators: Iterable[Sequence[int]], n: int) -> list[int]:
    """Orbit label (least member) of each point under the generated group."""
    parent = list(range(n))
    for g in generators:
        for i, j in enumerate(g):
            a, b = _find(parent, i), _find(parent, j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [_find(parent, i) for i in range(n)]


def pair_orbit(generators: Sequence[Sequence[int]], pair: frozenset[int]) -> set[frozenset[int]]:
    """Orbit of an unordered pair of coordinates."""
    seen = {pair}
    frontier = [pair]
    while frontier:
        current = frontier.pop()
        for g in generators:
            image = frozenset(g[i] for i in current)
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    return seen


def _refining_words(c: BitMatrix, max_codewords: int) -> list[tuple[int, tuple[int, ...]]]:
    """Low-weight words of C or of its dual (same automorphism group)."""
    k = rref(c)[1]
    source = c if k <= c.n - k else dual_code(c)
    arr = codeword_array(source, max_codewords)
    weights = weights_of(arr)
    counts = Counter(int(w) for w in weights if w)
    chosen: list[int] = []
    total = 0
    for w in sorted(counts):
        chosen.append(w)
        total += counts[w]
        if total >= MIN_REFINING_WORDS_PER_COORD * c.n or len(chosen) >= MAX_REFINING_CLASSES:
            break
    words = arr[np.isin(weights, chosen)]
    edges = []
    for word in sorted(int(x) for x in words):
        sup = tuple(i for i in range(c.n) if (word >> i) & 1)
        edges.append((len(sup), sup))
    return edges


class _Search:
    def __init__(
        self,
        c: BitMatrix,
        blocks: Sequence[int],
        max_nodes: int,
        max_codewords: int,
    ) -> None:
        self.c = c
        self.n = c.n
        self.blocks = tuple(blocks)
        self.max_nodes = max_nodes
        self.nodes = 0
        self.edges = _refining_words(c, max_codewords)
        for b in self.blocks:
            self.edges.append((BLOCK_TAG, tuple(i for i in range(self.n) if (b >> i) & 1)))
        self.incident: list[list[int]] = [[] for _ in range(self.n)]
        for idx, (_, sup) in enumerate(self.edges):
            for v in sup:
                self.incident[v].append(idx)
        self.generators: list[tuple[int, ...]] = []
        self.first: Optional[tuple[Certificate, list[int], list[int]]] = None
        self.best: Optional[tuple[Certificate, list[int], list[int]]] = None

    def refine(self, cells: list[list[int]]) -> list[list[int]]:
        """Split cells until every coordinate in a cell sees the same edge profile."""
        while True:
            cell_of = [0] * self.n
            for idx, cell in enumerate(cells):
                for v in cell:
                    cell_of[v] = idx
            types = [
                (tag, tuple(sorted(Counter(cell_of[v] for v in sup).items())))
                for tag, sup in self.edges
            ]
            rank = {t: r for r, t in enumerate(sorted(set(types)))}
            edge_rank = [rank[t] for t in types]
            changed = False
            new_cells: list[list[int]] = []
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[tuple[int, ...], list[int]] = defaultdict(list)
                for v in cell:
                    groups[tuple(sorted(edge_rank[e] for e in self.incident[v]))].append(v)
                if len(groups) > 1:
                    changed = True
                for key in sorted(groups):
                    new_cells.append(sorted(groups[key]))
            cells = new_cells
            if not changed:
                return cells

    def certificate(self, perm: Sequence[int]) -> Certificate:
        rows = rref(self.c.permuted(perm))[0].rows
        blocks = tuple(sorted(permute_bits(b, perm) for b in self.blocks))
        return rows, blocks

    def stabilizer_orbits(self, path: Sequence[int]) -> list[int]:
        fixing = [g for g in self.generators if all(g[v] == v for v in path)]
        return point_orbits(fixing, self.n)

    def leaf(self, cells: list[list[int]], path: list[int]) -> Optional[int]:
        perm = [0] * self.n
        for pos, cell in enumerate(cells):
            perm[cell[0]] = pos
        cert = self.certificate(perm)
        if self.first is None or self.best is None:
            self.first = self.best = (cert, perm, path)
            return None
        for ref_cert, ref_perm, ref_path in (self.first, self.best):
            if cert != ref_cert:
                continue
            inverse = [0] * self.n
            for v, pos in enumerate(ref_perm):
                inverse[pos] = v
            g = tuple(inverse[perm[i]] for i in range(self.n))
            if g == tuple(range(self.n)):
                return None
            self.generators.append(g)
            if [g[v] for v in path] != ref_path:
                return None
            common = 0
            while common < len(path) and path[common] == ref_path[common]:
                common += 1
            return common
        if cert < self.best[0]:
            self.best = (cert, perm, path)
        return None

    def descend(self, cells: list[list[int]], path: list[int]) -> Optional[int]:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            logger.error(f"Canonical search exceeded {self.max_nodes} nodes at n={self.n}")
            raise SearchBudgetError(f"search exceeded {self.max_nodes} nodes")
        if len(cells) == self.n:
            return self.leaf(cells, path)
        target_idx = min(
            (i for i, cell in enumerate(cells) if len(cell) > 1),
            key=lambda i: (len(cells[i]), i),
        )
        target = cells[target_idx]
        level = len(path)
        explored: list[int] = []
        for v in target:
            if explored:
                orbits = self.stabilizer_orbits(path)
                if any(orbits[v] == orbits[u] for u in explored):
                    continue
            explored.append(v)
            rest = [u for u in target if u != v]
            child = cells[:target_idx] + [[v], rest] + cells[target_idx + 1 :]
            jump = self.descend(self.refine(child), path + [v])
            if jump is not None and jump < level:
                return jump
        return None

    def run(self) -> SearchResult:
        self.descend(self.refine([list(range(self.n))]), [])
        assert self.best is not None
        (rows, blocks), perm, _ = self.best
        form = CanonicalForm(
            canonical_generator=BitMatrix(self.n, rows),
            ordering=tuple(perm),
            certificate_hash=certificate_hash(self.n, rows, blocks),
            blocks=blocks,
        )
        return SearchResult(form=form, generators=self.generators, nodes=self.nodes)


def canonical_search(
    c: BitMatrix,
    blocks: Sequence[int] = (),
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
    max_codewords: int = DEFAULT_MAX_CODEWORDS,
    max_length: int = MAX_CANONICAL_LENGTH,
) -> SearchResult:
    """Run the canonical search, returning the form and automorphism generators.

    Args:
        c: Generator matrix of the code.
        blocks: Optional coordinate sets (packed) whose system must be preserved.
        max_nodes: Budget on search-tree nodes.
        max_codewords: Cap for enumerating the refining words.
        max_length: Longest code accepted (at most 64).

    Raises:
        LengthCapError: If the length exceeds max_length.
        SearchBudgetError: If the node budget is exhausted.
    """
    if c.n > min(max_length, MAX_CANONICAL_LENGTH):
        logger.error(f"Canonical search refused for length {c.n}")
        raise LengthCapError(f"length {c.n} exceeds {min(max_length, MAX_CANONICAL_LENGTH)}")
    if c.n == 0:
        empty = CanonicalForm(BitMatrix(0), (), certificate_hash(0, ()))
        return SearchResult(form=empty)
    result = _Search(c, blocks, max_nodes, max_codewords).run()
    logger.debug(
        f"Canonical search n={c.n}: {result.nodes} nodes, {len(result.generators)} generators"
    )
    return result


def canonical_form(
    c: BitMatrix,
    blocks: Sequence[int] = (),
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
    max_length: int = MAX_CANONICAL_LENGTH,
) -> CanonicalForm:
    """Canonical representative of the equivalence class of c."""
    return canonical_search(c, blocks, max_nodes, max_length=max_length).form


def are_equivalent(a: BitMatrix, b: BitMatrix, max_nodes: int = DEFAULT_MAX_SEARCH_NODES) -> bool:
    """Whether some coordinate permutation maps a onto b."""
    if a.n != b.n or rref(a)[1] != rref(b)[1]:
        return False
    return canonical_form(a, max_nodes=max_nodes).certificate() == canonical_form(
        b, max_nodes=max_nodes
    ).certificate()


def automorphism_order(
    c: BitMatrix,
    max_nodes: int = DEFAULT_MAX_SEARCH_NODES,
    max_length: int = MAX_CANONICAL_LENGTH,
) -> AutomorphismInfo:
    """#Aut(C) with the generators the search recorded."""
    return canonical_search(c, max_nodes=max_nodes, max_length=max_length).automorphisms()
