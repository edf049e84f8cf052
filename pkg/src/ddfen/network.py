"""Undirected weighted graph container shared by thresholding, spanning
trees and the centrality indices."""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .errors import InvariantError


@dataclass
class WeightedNetwork:
    """Undirected graph with strictly positive edge weights.

    Edges are ``(i, j, weight)`` with ``i < j`` indexing into ``codes``,
    sorted by ``(i, j)`` and free of duplicates.  Every node carries at
    least one edge.
    """

    codes: list[str]
    edges: list[tuple[int, int, float]]

    def __post_init__(self):
        n = len(self.codes)
        if len(set(self.codes)) != n:
            raise InvariantError("node codes must be unique")
        seen = set()
        touched = [False] * n
        prev = None
        for i, j, w in self.edges:
            if not (0 <= i < j < n):
                raise InvariantError(f"bad edge endpoints ({i}, {j})")
            if (i, j) in seen:
                raise InvariantError(f"duplicate edge ({i}, {j})")
            if prev is not None and (i, j) < prev:
                raise InvariantError("edges must be sorted by (i, j)")
            if not (math.isfinite(w) and w > 0):
                raise InvariantError(
                    f"edge ({i}, {j}) has non-positive weight {w!r}"
                )
            seen.add((i, j))
            prev = (i, j)
            touched[i] = touched[j] = True
        if n and not all(touched):
            lonely = self.codes[touched.index(False)]
            raise InvariantError(f"node {lonely!r} has no edges")

    @property
    def n(self) -> int:
        return len(self.codes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix with zero diagonal."""
        mat = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            mat[i, j] = w
            mat[j, i] = w
        return mat

    def neighbors(self) -> list[list[tuple[int, float]]]:
        """Adjacency lists: ``out[i]`` holds ``(j, weight)`` pairs."""
        out: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for i, j, w in self.edges:
            out[i].append((j, w))
            out[j].append((i, w))
        return out


def fallback_codes(n: int) -> list[str]:
    """Stable synthetic node codes for matrices that carry none."""
    return [f"V{i:02d}" for i in range(n)]


def connected_component_count(n: int, edges) -> int:
    """Number of connected components among ``n`` nodes."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comps = n
    for i, j, *_ in edges:
        ra, rb = find(i), find(j)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps
