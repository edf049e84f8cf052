"""Centrality indices, deterministic ranking, and the spanning-tree
baseline.

All four indices grow with importance (higher = more central), so one
ranking rule serves them all: sort by descending score, break exact ties
by ascending code, assign 1-based positions.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantError, NumericalError
from .network import WeightedNetwork, fallback_codes

INDEX_NAMES = ("weighted_degree", "authority", "closeness", "betweenness")
LENGTH_SCHEMES = ("inverse", "one-minus")

HITS_TOL = 1e-10
HITS_MAX_ITER = 10_000
PATH_TIE_TOL = 1e-9


@dataclass
class IndexScores:
    """One centrality index evaluated on every node."""

    index_name: str
    scores: dict[str, float]


@dataclass
class Ranking:
    """Deterministic 1-based ranking: ``(code, score, rank)`` entries."""

    index_name: str
    entries: list[tuple[str, float, int]]

    def rank_of(self, code: str) -> int:
        for c, _, r in self.entries:
            if c == code:
                return r
        raise InputError(f"code {code!r} not present in ranking")


def weighted_degree(net: WeightedNetwork) -> IndexScores:
    """Sum of incident edge weights per node."""
    totals = dict.fromkeys(net.codes, 0.0)
    for i, j, w in net.edges:
        totals[net.codes[i]] += w
        totals[net.codes[j]] += w
    return IndexScores("weighted_degree", totals)


def _hits(adj: np.ndarray, tol: float, max_iter: int):
    """Alternating power iteration; returns (authority, hub, iterations).

    Both vectors are L2-normalized each half-step.  Convergence is the
    successive L2 change of both vectors dropping below ``tol``.
    """
    n = adj.shape[0]
    auth = np.full(n, 1 / math.sqrt(n))
    hub = auth.copy()
    delta = math.inf
    for it in range(1, max_iter + 1):
        new_auth = adj @ hub
        na = np.linalg.norm(new_auth)
        if na == 0:
            raise NumericalError("authority vector collapsed to zero")
        new_auth /= na
        new_hub = adj @ new_auth
        nh = np.linalg.norm(new_hub)
        if nh == 0:
            raise NumericalError("hub vector collapsed to zero")
        new_hub /= nh
        delta = max(np.linalg.norm(new_auth - auth),
                    np.linalg.norm(new_hub - hub))
        auth, hub = new_auth, new_hub
        if delta < tol:
            return auth, hub, it
    raise NumericalError(
        f"alternating iteration did not converge in {max_iter} steps "
        f"(residual {delta:.3e})"
    )


def authority(net: WeightedNetwork, tol: float = HITS_TOL,
              max_iter: int = HITS_MAX_ITER) -> IndexScores:
    """Mutual-reinforcement authority scores, rescaled to max 1.

    On an undirected graph the adjacency matrix is symmetric, so the
    authority and hub fixed points coincide; the iteration is still run in
    its alternating form so the convergence criterion applies to both.
    """
    auth, _, _ = _hits(net.adjacency(), tol, max_iter)
    auth = auth / auth.max()
    return IndexScores("authority", dict(zip(net.codes, auth.tolist())))


def _edge_length(weight: float, scheme: str, codes, i: int, j: int) -> float:
    if scheme == "inverse":
        return 1.0 / weight
    length = 1.0 - weight
    if length <= 0:
        raise InputError(
            f"edge ({codes[i]!r}, {codes[j]!r}) has weight {weight!r} >= 1; "
            "the one-minus length scheme needs weights below 1"
        )
    return length


def _length_lists(net: WeightedNetwork, scheme: str):
    if scheme not in LENGTH_SCHEMES:
        raise InputError(
            f"unknown length scheme {scheme!r}; expected one of "
            f"{', '.join(LENGTH_SCHEMES)}"
        )
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(net.n)]
    for i, j, w in net.edges:
        length = _edge_length(w, scheme, net.codes, i, j)
        nbrs[i].append((j, length))
        nbrs[j].append((i, length))
    return nbrs


def _dijkstra(nbrs, source: int, n: int):
    dist = [math.inf] * n
    dist[source] = 0.0
    done = [False] * n
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, length in nbrs[u]:
            nd = d + length
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist

def closeness(net: WeightedNetwork, length: str = "inverse") -> IndexScores:
    """Component-scaled inverse farness.

    Stronger edges are shorter: lengths are ``1/weight`` by default (or
    ``1 - weight``).  For node ``i`` reaching ``r`` other nodes with total
    distance ``D``, the score is ``(r / (n - 1)) * (r / D)``, which keeps
    values comparable across components of different sizes.
    """
    nbrs = _length_lists(net, length)
    n = net.n
    out = {}
    for i, code in enumerate(net.codes):
        dist = _dijkstra(nbrs, i, n)
        reach = [d for k, d in enumerate(dist) if k != i and math.isfinite(d)]
        r = len(reach)
        total = sum(reach)
        if r == 0 or total <= 0:
            raise InvariantError(f"node {code!r} reaches nothing")
        out[code] = (r / (n - 1)) * (r / total)
    return IndexScores("closeness", out)


def _paths_tied(a: float, b: float) -> bool:
    return abs(a - b) <= PATH_TIE_TOL * max(abs(a), abs(b))


def betweenness(net: WeightedNetwork, length: str = "inverse") -> IndexScores:
    """Fraction of shortest paths passing through each node.

    Path-length ties are resolved with a relative tolerance of ``1e-9``,
    so exactly tied float sums and sums differing only by rounding both
    count as parallel shortest paths.  Each unordered pair contributes
    once (the two sweep directions are averaged).
    """
    nbrs = _length_lists(net, length)
    n = net.n
    score = [0.0] * n
    for s in range(n):
        dist = [math.inf] * n
        sigma = [0.0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        done = [False] * n
        order: list[int] = []
        dist[s] = 0.0
        sigma[s] = 1.0
        heap = [(0.0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            order.append(u)
            for v, length_uv in nbrs[u]:
                if done[v]:
                    continue
                nd = dist[u] + length_uv
                if math.isinf(dist[v]) or (nd < dist[v]
                                           and not _paths_tied(nd, dist[v])):
                    dist[v] = nd
                    sigma[v] = sigma[u]
                    preds[v] = [u]
                    heapq.heappush(heap, (nd, v))
                elif _paths_tied(nd, dist[v]):
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = [0.0] * n
        for v in reversed(order):
            for u in preds[v]:
                delta[u] += sigma[u] / sigma[v] * (1.0 + delta[v])
            if v != s:
                score[v] += delta[v]
    halved = [x / 2 for x in score]
    return IndexScores("betweenness", dict(zip(net.codes, halved)))


_INDEX_FUNCS = {
    "weighted_degree": weighted_degree,
    "authority": authority,
    "closeness": closeness,
    "betweenness": betweenness,
}


def compute_index(net: WeightedNetwork, index_name: str) -> IndexScores:
    """Dispatch one of the four indices by name."""
    try:
        func = _INDEX_FUNCS[index_name]
    except KeyError:
        raise InputError(
            f"unknown index {index_name!r}; expected one of "
            f"{', '.join(INDEX_NAMES)}"
        ) from None
    return func(net)


def rank(scores: IndexScores) -> Ranking:
    """Descending by score; exact ties broken by ascending code; 1-based."""
    ordered = sorted(scores.scores.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = [(code, value, pos)
               for pos, (code, value) in enumerate(ordered, start=1)]
    return Ranking(scores.index_name, entries)


def mst(matrix) -> WeightedNetwork:
    """Minimum spanning tree of the correlation-distance metric.

    Correlations map to distances ``d = sqrt(2 * (1 - rho))``; the tree is
    grown greedily with ties broken by the lexicographically smallest code
    pair, so the result is unique and platform-stable.  Edge weights in
    the returned network are the original correlations; a selected edge
    with ``rho <= 0`` cannot serve as a positive weight and raises
    :class:`NumericalError`.
    """
    codes = getattr(matrix, "codes", None)
    values = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InputError("matrix must be square")
    n = values.shape[0]
    if n < 2:
        raise InputError("need at least two nodes for a spanning tree")
    if codes is None:
        codes = fallback_codes(n)
    codes = list(codes)
    if not np.isfinite(values).all():
        raise InputError("matrix contains non-finite values")
    top = values.max()
    if top > 1 + 1e-9:
        raise InputError(f"correlation {top!r} exceeds 1 + 1e-9")

    candidates = []
    for i in range(n):
        for j in range(i + 1, n):
            rho = float(values[i, j])
            d = math.sqrt(max(0.0, 2.0 * (1.0 - rho)))
            lo, hi = sorted((codes[i], codes[j]))
            candidates.append((d, lo, hi, i, j, rho))
    candidates.sort(key=lambda c: c[:3])

    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen = []
    for d, lo, hi, i, j, rho in candidates:
        ra, rb = find(i), find(j)
        if ra == rb:
            continue
        parent[ra] = rb
        if rho <= 0:
            raise NumericalError(
                f"spanning tree needs edge ({codes[i]!r}, {codes[j]!r}) "
                f"with correlation {rho!r}; non-positive weights are not "
                "representable"
            )
        chosen.append((i, j, rho))
        if len(chosen) == n - 1:
            break
    chosen.sort(key=lambda e: (e[0], e[1]))
    return WeightedNetwork(codes, chosen)
