"""Lazily revealed random graph G(n, p).

Membership of each edge is a pure function of (seed, EdgeId, p): a 64-bit
avalanche hash of the pair (seed, id) is mapped to [0, 1) and compared with p.
Results are cached on first query, so the full status table is independent of
the order in which edges are revealed and replays are exact.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64


def mix64(seed: int, ids) -> np.ndarray:
    """SplitMix64-style avalanche of (seed, id) pairs; accepts arrays of ids."""
    z = np.asarray(ids, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z + _U64(1)) * _GOLDEN + _U64(seed & 0xFFFFFFFFFFFFFFFF)
        z = (z ^ (z >> _U64(30))) * _MIX1
        z = (z ^ (z >> _U64(27))) * _MIX2
        z = z ^ (z >> _U64(31))
    return z


def edge_uniform(seed: int, ids) -> np.ndarray:
    """Deterministic uniforms in [0, 1) per edge: top 53 bits of the hash."""
    return (mix64(seed, ids) >> _U64(11)).astype(np.float64) * 2.0**-53


def edge_in_gamma(seed: int, p: float, ids) -> np.ndarray:
    """Boolean membership array for the given EdgeIds."""
    return edge_uniform(seed, ids) < p


_M64 = 0xFFFFFFFFFFFFFFFF


def _in_gamma_scalar(seed: int, p: float, eid: int) -> bool:
    """Scalar twin of edge_in_gamma; bit-identical, no array overhead."""
    z = ((eid + 1) * 0x9E3779B97F4A7C15 + (seed & _M64)) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    z = z ^ (z >> 31)
    return (z >> 11) * 2.0**-53 < p


class Membership(IntEnum):
    UNKNOWN = 0
    IN_GAMMA = 1
    NOT_IN_GAMMA = 2


class GammaOracle:
    """Seeded per-edge membership oracle for G(n, p) over E(K_n)."""

    def __init__(self, n: int, p: float, seed: int):
        if not 0.0 <= p <= 1.0:
            raise ValueError("p out of range [0, 1]")
        if n < 2:
            raise ValueError("need at least two vertices")
        from .core_graph import edge_count

        self.n = n
        self.p = float(p)
        self.seed = int(seed)
        self.total = edge_count(n)
        self.status = np.zeros(self.total, dtype=np.int8)
        self.revealed_in = 0
        self.revealed_out = 0

    def _check(self, eid: int) -> None:
        if not 0 <= eid < self.total:
            raise ValueError(f"edge id {eid} out of range")

    def query(self, eid: int) -> Membership:
        """Reveal an edge (idempotent): caches and returns IN/NOT IN."""
        self._check(eid)
        cur = int(self.status[eid])
        if cur != 0:
            return Membership(cur)
        if _in_gamma_scalar(self.seed, self.p, eid):
            self.status[eid] = 1
            self.revealed_in += 1
            return Membership.IN_GAMMA
        self.status[eid] = 2
        self.revealed_out += 1
        return Membership.NOT_IN_GAMMA

    def query_many(self, ids) -> np.ndarray:
        """Bulk reveal; returns the membership codes for the given ids."""
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= self.total):
            raise ValueError("edge id out of range")
        fresh = ids[self.status[ids] == Membership.UNKNOWN]
        if fresh.size:
            fresh = np.unique(fresh)
            inside = edge_in_gamma(self.seed, self.p, fresh)
            self.status[fresh[inside]] = Membership.IN_GAMMA
            self.status[fresh[~inside]] = Membership.NOT_IN_GAMMA
            self.revealed_in += int(inside.sum())
            self.revealed_out += int(fresh.size - inside.sum())
        return self.status[ids].copy()

    def peek(self, eid: int) -> Membership:
        """Cached status without revealing; never mutates."""
        self._check(eid)
        return Membership(int(self.status[eid]))

    def census(self) -> tuple[int, int, int]:
        """(revealed_in, revealed_out, unknown_count); sums to n(n-1)/2."""
        return (
            self.revealed_in,
            self.revealed_out,
            self.total - self.revealed_in - self.revealed_out,
        )
