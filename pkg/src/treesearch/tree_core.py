"""Explicit balanced binary trees and their search Hamiltonians.

Sites are stored 0-based in heap order: site ``k`` has children ``2k+1`` and
``2k+2`` and sits on level ``floor(log2(k+1)) + 1``.  The 1-based heap label
of a site is therefore ``k + 1``.  Full systems only exist as verification
oracles, so they are capped at depth 14.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameter

MAX_FULL_DEPTH = 14


@dataclass(frozen=True)
class TreeParams:
    n: int
    l: int = 1
    gamma: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameter(f"depth n must be an integer >= 1, got {self.n}")
        if int(self.l) != self.l or not 1 <= self.l <= self.n:
            raise InvalidParameter(f"level l must satisfy 1 <= l <= n, got l={self.l}, n={self.n}")
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise InvalidParameter(f"gamma must be a finite nonnegative number, got {self.gamma}")

    @property
    def N(self) -> int:
        return 2**self.n - 1

    def with_gamma(self, gamma: float) -> "TreeParams":
        return TreeParams(self.n, self.l, gamma)


@dataclass(frozen=True)
class Tree:
    n: int
    adjacency: sp.csr_matrix
    degrees: np.ndarray

    @property
    def N(self) -> int:
        return self.adjacency.shape[0]

    def laplacian(self) -> sp.csr_matrix:
        return (sp.diags(self.degrees) - self.adjacency).tocsr()

    def edges(self) -> list[tuple[int, int]]:
        return [(k, c) for k in range(self.N) for c in (2 * k + 1, 2 * k + 2) if c < self.N]


@dataclass(frozen=True)
class FullSystem:
    params: TreeParams
    laplacian: sp.csr_matrix
    marked_index: int
    hamiltonian: sp.csr_matrix = field(repr=False)

    @property
    def N(self) -> int:
        return self.laplacian.shape[0]


def level_of(site: int) -> int:
    return (site + 1).bit_length()


def marked_site(l: int) -> int:
    """Canonical (leftmost) site on level ``l``, 0-based."""
    if l < 1:
        raise InvalidParameter(f"level must be >= 1, got {l}")
    return 2 ** (l - 1) - 1


def build_tree(n: int) -> Tree:
    if int(n) != n or n < 1:
        raise InvalidParameter(f"depth n must be an integer >= 1, got {n}")
    if n > MAX_FULL_DEPTH:
        raise InvalidParameter(f"explicit trees are limited to n <= {MAX_FULL_DEPTH}, got {n}")
    N = 2**n - 1
    child = np.arange(1, N)
    parent = (child - 1) // 2
    rows = np.concatenate([parent, child])
    cols = np.concatenate([child, parent])
    adj = sp.csr_matrix((np.ones(rows.size, dtype=np.int64), (rows, cols)), shape=(N, N))
    degrees = np.asarray(adj.sum(axis=1)).ravel().astype(np.int64)
    return Tree(n=n, adjacency=adj, degrees=degrees)


def build_full_hamiltonian(params: TreeParams, marked: int | None = None) -> FullSystem:
    """H = gamma * L - |w><w| on the explicit tree."""
    tree = build_tree(params.n)
    if marked is None:
        marked = marked_site(params.l)
    if not 0 <= marked < tree.N:
        raise InvalidParameter(f"marked site {marked} out of range for N={tree.N}")
    if level_of(marked) != params.l:
        raise InvalidParameter(f"site {marked} is on level {level_of(marked)}, not l={params.l}")
    lap = tree.laplacian()
    oracle = sp.csr_matrix(([1.0], ([marked], [marked])), shape=lap.shape)
    ham = (params.gamma * lap.astype(float) - oracle).tocsr()
    return FullSystem(params=params, laplacian=lap, marked_index=marked, hamiltonian=ham)


def uniform_state(N: int) -> np.ndarray:
    if N < 1:
        raise InvalidParameter(f"N must be >= 1, got {N}")
    return np.full(N, 1.0 / np.sqrt(N))


def bfs_distances(tree: Tree, site: int) -> np.ndarray:
    if not 0 <= site < tree.N:
        raise InvalidParameter(f"site {site} out of range for N={tree.N}")
    dist = np.full(tree.N, -1, dtype=np.int64)
    dist[site] = 0
    queue = deque([site])
    indptr, indices = tree.adjacency.indptr, tree.adjacency.indices
    while queue:
        u = queue.popleft()
        for v in indices[indptr[u] : indptr[u + 1]]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def edge_list_csv(tree: Tree) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["src", "dst"])
    writer.writerows(tree.edges())
    return buf.getvalue()
