"""Pluggable Breaker strategies for the (1:b) game on E(K_n).

A strategy is called once per Breaker turn with a read-only view of the
public position (claim ledger, both graphs, the last Maker move) and returns
at most b unclaimed EdgeIds. Strategies never see the random graph oracle:
Breaker plays blind to which queried edges were revealed as non-edges.

Included: the fixed-vertex starving strategy, a triangle blocker that wins
the triangle-free game at bias 4*ceil(sqrt(n)), a K4 blocker that protects a
chosen vertex at bias 8*ceil(n^(1/3)), and a seeded random baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core_graph import ClaimLedger, EdgeStatus, SimpleGraph, edge_index, merge_intersect


@dataclass
class BreakerView:
    """Public information a Breaker strategy may consult."""

    n: int
    b: int
    ledger: ClaimLedger
    g_maker: SimpleGraph
    g_breaker: SimpleGraph
    last_maker_edge: Optional[tuple[int, int]]
    turn: int

    def unclaimed(self, u: int, v: int) -> bool:
        return (
            self.ledger.status_of(edge_index(u, v, self.n)) == EdgeStatus.UNCLAIMED
        )


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ceil_cbrt(n: int) -> int:
    r = round(n ** (1.0 / 3.0))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r if r**3 == n else r + 1


def _edges_at(view: BreakerView, v: int, quota: int, skip: set[int]) -> list[int]:
    """Up to `quota` unclaimed edges at v, lowest co-endpoint first."""
    out: list[int] = []
    for w in range(view.n):
        if len(out) >= quota:
            break
        if w == v:
            continue
        eid = edge_index(v, w, view.n)
        if eid in skip:
            continue
        if view.ledger.status_of(eid) == EdgeStatus.UNCLAIMED:
            out.append(eid)
            skip.add(eid)
    return out


class VertexFocus:
    """Claims every edge at one target vertex until none remain.

    Starves the target: Maker ends with degree at most ceil(n/(b+1)) there,
    whatever she plays.
    """

    name = "vertex-focus"

    def __init__(self, target: int = 0):
        self.target = target

    def params(self) -> dict:
        return {"target": self.target}

    def __call__(self, view: BreakerView) -> list[int]:
        return _edges_at(view, self.target, view.b, set())


class TriangleBlocker:
    """Keeps Maker's graph triangle-free when b >= 4*ceil(sqrt(n)).

    After Maker claims uv: take ceil(sqrt(n)) unclaimed edges at u and at v
    (lowest co-endpoint first), then every dangerous edge, i.e. vw for
    w in N_maker(u) and uw for w in N_maker(v), whose claim by Maker would
    close a triangle through uv next round. The per-endpoint sweeps cap
    Maker's degrees at ceil(sqrt(n)), which keeps the dangerous set within
    the remaining quota.
    """

    name = "triangle-blocker"

    def params(self) -> dict:
        return {}

    def __call__(self, view: BreakerView) -> list[int]:
        if view.last_maker_edge is None:
            return []
        u, v = view.last_maker_edge
        quota = ceil_sqrt(view.n)
        skip: set[int] = set()
        out = _edges_at(view, u, quota, skip)
        out += _edges_at(view, v, quota, skip)
        for a, c in ((u, v), (v, u)):
            for w in view.g_maker.neighbors(a):
                if w == c:
                    continue
                eid = edge_index(c, w, view.n)
                if eid in skip:
                    continue
                if view.ledger.status_of(eid) == EdgeStatus.UNCLAIMED:
                    out.append(eid)
                    skip.add(eid)
        return out[: view.b]


class K4Blocker:
    """Prevents any Maker K4 through a chosen vertex when b >= 8*ceil(n^(1/3)).

    Every round: ceil(n^(1/3)) edges at v0 (bounding Maker's degree there by
    about n^(2/3)). Then, depending on Maker's move xy:

      * xy not inside N_maker(v0): claim v0x and v0y, wasting the move;
      * x or y is v0 (a vertex y enters the neighbourhood): connect y to the
        2*ceil(n^(1/3)) vertices of highest Maker-degree inside the
        neighbourhood;
      * xy inside N_maker(v0): connect both x and y to the top vertices as
        above, then claim the edges from y into N_maker(v0) cap N_maker(x)
        and from x into N_maker(v0) cap N_maker(y), which are exactly the
        edges that would finish a Maker triangle through xy inside the
        neighbourhood.

    Degree ties break to the lower vertex index; saturated endpoints claim
    fewer rather than substituting elsewhere.
    """

    name = "k4-blocker"

    def __init__(self, v0: int = 0):
        self.v0 = v0

    def params(self) -> dict:
        return {"v0": self.v0}

    def _top_vertices(self, view: BreakerView, exclude: set[int]) -> list[int]:
        hood = view.g_maker.neighbors(self.v0)
        ranked = []
        for w in hood:
            if w in exclude:
                continue
            deg_in = len(merge_intersect(view.g_maker.neighbors(w), hood))
            ranked.append((-deg_in, w))
        ranked.sort()
        return [w for _, w in ranked]

    def _connect(
        self, view: BreakerView, anchor: int, targets: list[int], quota: int,
        skip: set[int], out: list[int],
    ) -> None:
        taken = 0
        for w in targets:
            if taken >= quota:
                break
            if w == anchor:
                continue
            eid = edge_index(anchor, w, view.n)
            if eid in skip:
                continue
            if view.ledger.status_of(eid) == EdgeStatus.UNCLAIMED:
                out.append(eid)
                skip.add(eid)
                taken += 1

    def __call__(self, view: BreakerView) -> list[int]:
        q = ceil_cbrt(view.n)
        skip: set[int] = set()
        out = _edges_at(view, self.v0, q, skip)
        move = view.last_maker_edge
        if move is not None:
            x, y = move
            in_hood_x = view.g_maker.has_edge(self.v0, x)
            in_hood_y = view.g_maker.has_edge(self.v0, y)
            if self.v0 in (x, y):
                newcomer = y if x == self.v0 else x
                self._connect(
                    view, newcomer, self._top_vertices(view, {newcomer}), 2 * q, skip, out
                )
            elif in_hood_x and in_hood_y:
                top = self._top_vertices(view, {x, y})
                self._connect(view, x, top, 2 * q, skip, out)
                self._connect(view, y, top, 2 * q, skip, out)
                hood = view.g_maker.neighbors(self.v0)
                for anchor, other in ((y, x), (x, y)):
                    shared = merge_intersect(hood, view.g_maker.neighbors(other))
                    for w in shared:
                        if w in (x, y):
                            continue
                        eid = edge_index(anchor, w, view.n)
                        if eid in skip:
                            continue
                        if view.ledger.status_of(eid) == EdgeStatus.UNCLAIMED:
                            out.append(eid)
                            skip.add(eid)
            else:
                for w in (x, y):
                    eid = edge_index(self.v0, w, view.n)
                    if eid not in skip and view.ledger.status_of(eid) == EdgeStatus.UNCLAIMED:
                        out.append(eid)
                        skip.add(eid)
        return out[: view.b]


class RandomBreaker:
    """Claims min(b, remaining) unclaimed edges uniformly, seeded per turn."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def params(self) -> dict:
        return {"seed": self.seed}

    def __call__(self, view: BreakerView) -> list[int]:
        ledger = view.ledger
        k = min(view.b, ledger.unclaimed_count)
        if k == 0:
            return []
        rng = np.random.default_rng([self.seed, view.turn])
        # Rejection sampling is uniform-without-replacement too and skips the
        # full ledger scan while the unclaimed pool is dense.
        if ledger.unclaimed_count * 4 >= ledger.total and ledger.unclaimed_count >= 4 * k:
            status = ledger.status
            picks: list[int] = []
            seen: set[int] = set()
            for _ in range(12):
                for e in rng.integers(0, ledger.total, size=4 * view.b + 8):
                    e = int(e)
                    if status[e] == 0 and e not in seen:
                        seen.add(e)
                        picks.append(e)
                        if len(picks) == k:
                            return picks
        pool = ledger.unclaimed_ids()
        return [int(e) for e in rng.choice(pool, size=k, replace=False)]


class NullBreaker:
    """Claims nothing; useful as an experimental baseline."""

    name = "null"

    def params(self) -> dict:
        return {}

    def __call__(self, view: BreakerView) -> list[int]:
        return []


def make_breaker(name: str, seed: int = 0, target: int = 0, v0: int = 0):
    """Strategy factory keyed by the CLI names."""
    if name == "random":
        return RandomBreaker(seed)
    if name == "vertex-focus":
        return VertexFocus(target)
    if name == "triangle-blocker":
        return TriangleBlocker()
    if name == "k4-blocker":
        return K4Blocker(v0)
    if name == "null":
        return NullBreaker()
    raise ValueError(f"unknown breaker strategy {name!r}")
