"""Vertex/edge encodings on K_n, simple graphs, and the per-edge claim ledger.

An EdgeId is the rank of the unordered pair {u, v} (u < v) in lexicographic
order, so the edge set of K_n maps onto the contiguous range [0, n(n-1)/2).
All per-edge state elsewhere in the package lives in flat arrays indexed by
EdgeId, which keeps the hot loops cache-friendly and trivially vectorisable.
"""

from __future__ import annotations

import math
from bisect import bisect_left, insort
from enum import IntEnum

import numpy as np


def edge_count(n: int) -> int:
    """Number of edges of K_n."""
    return n * (n - 1) // 2


def edge_index(u: int, v: int, n: int) -> int:
    """Rank of the pair {u, v} among the lexicographically ordered pairs of [n].

    For u < v the rank is u*n - u(u+1)/2 + (v-u-1); the arguments may be given
    in either order.
    """
    if u == v:
        raise ValueError(f"loop edge ({u},{v}) has no index")
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertex out of range for n={n}: ({u},{v})")
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def endpoints(eid: int, n: int) -> tuple[int, int]:
    """Inverse of edge_index: the pair (u, v) with u < v for an EdgeId."""
    total = edge_count(n)
    if not 0 <= eid < total:
        raise ValueError(f"edge id {eid} out of range for n={n}")
    # u is determined by the smallest k with k(k-1)/2 >= total - eid via k = n - u.
    m = total - eid
    k = (1 + math.isqrt(8 * m - 7)) // 2
    while k * (k - 1) // 2 < m:
        k += 1
    while (k - 1) * (k - 2) // 2 >= m:
        k -= 1
    u = n - k
    v = u + 1 + (eid - (u * n - u * (u + 1) // 2))
    return u, v


def endpoint_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (U, V) with U[e] < V[e] the endpoints of EdgeId e, for all e."""
    u, v = np.triu_indices(n, k=1)
    return u.astype(np.int32), v.astype(np.int32)


class EdgeStatus(IntEnum):
    """Ownership state of one edge of K_n."""

    UNCLAIMED = 0
    MAKER = 1
    BREAKER = 2
    REVEALED_OUT = 3


class ClaimLedger:
    """Per-edge ownership of E(K_n) with counts per status.

    The only legal transitions are UNCLAIMED -> {MAKER, BREAKER, REVEALED_OUT};
    anything else raises ProtocolViolation via `_transition`.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("need at least two vertices")
        self.n = n
        self.total = edge_count(n)
        self.status = np.zeros(self.total, dtype=np.int8)
        self._counts = [self.total, 0, 0, 0]

    def status_of(self, eid: int) -> EdgeStatus:
        return EdgeStatus(int(self.status[eid]))

    def _transition(self, eid: int, to: EdgeStatus) -> None:
        from .errors import ProtocolViolation

        cur = int(self.status[eid])
        if cur != EdgeStatus.UNCLAIMED:
            raise ProtocolViolation(
                f"edge {eid} is {EdgeStatus(cur).name}, cannot become {to.name}"
            )
        self.status[eid] = to
        self._counts[0] -= 1
        self._counts[to] += 1

    def claim_maker(self, eid: int) -> None:
        self._transition(eid, EdgeStatus.MAKER)

    def claim_breaker(self, eid: int) -> None:
        self._transition(eid, EdgeStatus.BREAKER)

    def mark_revealed_out(self, eid: int) -> None:
        self._transition(eid, EdgeStatus.REVEALED_OUT)

    @property
    def unclaimed_count(self) -> int:
        return self._counts[0]

    def unclaimed_ids(self) -> np.ndarray:
        return np.flatnonzero(self.status == EdgeStatus.UNCLAIMED)

    def census(self) -> dict[str, int]:
        return {
            "unclaimed": self._counts[0],
            "maker": self._counts[1],
            "breaker": self._counts[2],
            "revealed_out": self._counts[3],
        }

    def counts_consistent(self) -> bool:
        """Full recount of the status array against the running counters."""
        fresh = np.bincount(self.status, minlength=4)
        return list(fresh) == self._counts and sum(self._counts) == self.total


class SimpleGraph:
    """Undirected simple graph on [n] with sorted neighbour lists.

    Sorted adjacency makes co-neighbourhood intersections linear-time merges,
    which the clique detectors and the K4 blocker rely on.
    """

    def __init__(self, n: int):
        self.n = n
        self._adj: list[list[int]] = [[] for _ in range(n)]
        self._deg = np.zeros(n, dtype=np.int32)
        self.edge_count = 0

    def has_edge(self, u: int, v: int) -> bool:
        adj = self._adj[u]
        i = bisect_left(adj, v)
        return i < len(adj) and adj[i] == v

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("loops not allowed")
        if self.has_edge(u, v):
            raise ValueError(f"edge ({u},{v}) already present")
        insort(self._adj[u], v)
        insort(self._adj[v], u)
        self._deg[u] += 1
        self._deg[v] += 1
        self.edge_count += 1

    def neighbors(self, v: int) -> list[int]:
        """Sorted neighbour list; callers must not mutate it."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return int(self._deg[v])

    def degrees(self) -> np.ndarray:
        return self._deg

    def common_neighbors(self, u: int, v: int) -> list[int]:
        """Sorted intersection of two neighbour lists (linear merge)."""
        return merge_intersect(self._adj[u], self._adj[v])

    def edges(self):
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield u, v

    def is_symmetric(self) -> bool:
        for u in range(self.n):
            for v in self._adj[u]:
                if not self.has_edge(v, u):
                    return False
        return True


def merge_intersect(a: list[int], b: list[int]) -> list[int]:
    """Intersection of two sorted int lists via a single merge pass."""
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out
