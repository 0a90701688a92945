"""Exact detectors, factor search, regularity checking, and transcript audit.

The verifier in this module replays a transcript from its event list alone,
with its own data structures, so it can certify games it did not produce. It
never reads the engine's cached state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core_graph import SimpleGraph, edge_count, endpoint_arrays, merge_intersect
from .gamma_oracle import edge_in_gamma
from .spookybox import BoxGameConfig, derive_parameters, playable_parameters
from .transcript import Transcript

# -- exact subgraph detectors ---------------------------------------------


def triangle_witness(g: SimpleGraph) -> Optional[tuple[int, int, int]]:
    """Some triangle of g as a sorted vertex triple, or None.

    Scans edges u < v in lexicographic order and intersects the sorted
    adjacency lists, so the detector is exact and deterministic.
    """
    for u in range(g.n):
        for v in g.neighbors(u):
            if v < u:
                continue
            common = merge_intersect(g.neighbors(u), g.neighbors(v))
            if common:
                return tuple(sorted((u, v, common[0])))
    return None


def k4_witness_at(g: SimpleGraph, v0: int) -> Optional[tuple[int, int, int, int]]:
    """A K4 of g containing v0 (as (v0, a, b, c)), or None.

    Searches for a triangle inside the neighbourhood of v0.
    """
    hood = g.neighbors(v0)
    hood_set = set(hood)
    for x in hood:
        for y in g.neighbors(x):
            if y <= x or y not in hood_set:
                continue
            for z in merge_intersect(g.neighbors(x), g.neighbors(y)):
                if z in hood_set and z != v0:
                    return (v0, x, y, z)
    return None


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def kr_factor_search(g: SimpleGraph, r: int, limit: int = 36):
    """Exact search for a partition of V into vertex-disjoint K_r copies.

    Branches on the lowest unmatched vertex over bitmask adjacency. Returns
    the factor as a list of sorted r-tuples, or None when no factor exists.
    Refuses graphs above `limit` vertices since the worst case is exponential.
    """
    if r not in (3, 4):
        raise ValueError("only K3 and K4 factors are supported")
    if g.n % r != 0:
        raise ValueError(f"{r} does not divide n = {g.n}")
    if g.n > limit:
        raise ValueError(f"n = {g.n} exceeds the factor-search limit {limit}")
    adj = [0] * g.n
    for u in range(g.n):
        for v in g.neighbors(u):
            adj[u] |= 1 << v

    def backtrack(unmatched: int):
        if unmatched == 0:
            return []
        u = (unmatched & -unmatched).bit_length() - 1
        rest = unmatched ^ (1 << u)
        cand = adj[u] & rest
        for v in _iter_bits(cand):
            cv = cand & adj[v] & ~((1 << (v + 1)) - 1)
            if r == 3:
                for w in _iter_bits(cv):
                    sub = backtrack(rest ^ (1 << v) ^ (1 << w))
                    if sub is not None:
                        return [(u, v, w)] + sub
            else:
                for w in _iter_bits(cv):
                    cw = cv & adj[w] & ~((1 << (w + 1)) - 1)
                    for z in _iter_bits(cw):
                        sub = backtrack(rest ^ (1 << v) ^ (1 << w) ^ (1 << z))
                        if sub is not None:
                            return [(u, v, w, z)] + sub
        return None

    factor = backtrack((1 << g.n) - 1)
    if factor is None:
        return None
    # Soundness pass: every block must really be a clique and cover V once.
    seen: set[int] = set()
    for block in factor:
        for i, a in enumerate(block):
            seen.add(a)
            for c in block[i + 1 :]:
                if not g.has_edge(a, c):
                    raise AssertionError("factor search produced a non-clique block")
    if len(seen) != g.n:
        raise AssertionError("factor search produced a non-spanning partition")
    return factor


def regular_pair_check(
    g: SimpleGraph,
    xs,
    ys,
    eps: float,
    d: float,
    p: float,
):
    """Brute-force lower-regularity check between two disjoint vertex sets.

    Passes iff e(X', Y') >= (d-eps)*p*|X'|*|Y'| for every X' in X, Y' in Y.
    For each X' the worst Y' consists of exactly the vertices with deficient
    degree into X', so only the 2^|X| subsets are enumerated. Returns
    (True, None) or (False, (X_witness, Y_witness)).
    """
    xs = sorted(xs)
    ys = sorted(ys)
    if set(xs) & set(ys):
        raise ValueError("X and Y must be disjoint")
    if len(xs) > 15 or len(ys) > 15:
        raise ValueError("regularity check is limited to sides of at most 15")
    coeff = (d - eps) * p
    masks = []
    pos = {v: i for i, v in enumerate(xs)}
    for y in ys:
        m = 0
        for w in g.neighbors(y):
            if w in pos:
                m |= 1 << pos[w]
        masks.append(m)
    for sub in range(1, 1 << len(xs)):
        sx = sub.bit_count()
        threshold = coeff * sx
        worst = 0.0
        picked = []
        for j, m in enumerate(masks):
            contrib = (m & sub).bit_count() - threshold
            if contrib < 0:
                worst += contrib
                picked.append(ys[j])
        if worst < 0:
            witness_x = [xs[i] for i in _iter_bits(sub)]
            return False, (witness_x, picked)
    return True, None


# -- invariant reports ------------------------------------------------------


@dataclass
class InvariantCheck:
    name: str
    passed: bool
    where: Optional[int] = None
    witness: Optional[str] = None

    def line(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        loc = f" @ {self.where}" if self.where is not None else ""
        note = f": {self.witness}" if self.witness else ""
        return f"[{state}] {self.name}{loc}{note}"


@dataclass
class InvariantReport:
    checks: list[InvariantCheck] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Optional[InvariantCheck]:
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "where": c.where,
                    "witness": c.witness,
                }
                for c in self.checks
            ],
        }

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


class _Checks:
    """Ordered pass/fail registry; only the first failure per name is kept."""

    def __init__(self, names: list[str]):
        self._order = list(names)
        self._map = {n: InvariantCheck(n, True) for n in names}

    def fail(self, name: str, where=None, witness=None) -> None:
        cur = self._map[name]
        if cur.passed:
            self._map[name] = InvariantCheck(name, False, where, witness)

    def note(self, name: str, witness: str) -> None:
        cur = self._map[name]
        if cur.passed and cur.witness is None:
            self._map[name] = InvariantCheck(name, True, None, witness)

    def ok(self, name: str) -> bool:
        return self._map[name].passed

    def report(self) -> InvariantReport:
        return InvariantReport([self._map[n] for n in self._order])


class _Abort(Exception):
    """Stop a replay after an unrecoverable structural failure."""


REL_TOL = 1e-9
DEFICIT_TOL = 1e-9


def _log_factors(m: int, b: int, lam: float, tau: float) -> tuple[float, float]:
    lam, tau = playable_parameters(m, b, lam, tau)
    return math.log1p(-lam), math.log1p(tau)


def _logsumexp(values: np.ndarray) -> float:
    shift = float(values.max())
    return shift + math.log(float(np.exp(values - shift).sum()))


def verify_transcript(transcript) -> InvariantReport:
    """Replay a transcript independently and audit every game invariant.

    Accepts a Transcript or its dict form. The header's `kind` selects the
    ruleset ("real" or "boxgame").
    """
    if isinstance(transcript, dict):
        transcript = Transcript.from_dict(transcript)
    kind = transcript.header.get("kind")
    if kind == "real":
        return _verify_real(transcript)
    if kind == "boxgame":
        return _verify_boxgame(transcript)
    report = InvariantReport([InvariantCheck("schema", False, None, f"unknown kind {kind!r}")])
    return report


# -- box game verification --------------------------------------------------

_BOX_CHECKS = [
    "schema",
    "hash-integrity",
    "event-order",
    "claim-legality",
    "maker-quota",
    "box-growth",
    "potential-monotone",
    "fair-share",
]


def _verify_boxgame(t: Transcript) -> InvariantReport:
    ck = _Checks(_BOX_CHECKS)
    h = t.header
    stored = getattr(t, "stored_hash", None)
    if stored is not None and stored != t.recompute_hash_hex():
        ck.fail("hash-integrity", witness="stored hash does not match events")
    try:
        m, b, n_v, e, cap, ell = h["m"], h["b"], h["vertex_count"], h["e"], h["M"], h["ell"]
        boxes = [set(bx) for bx in h["initial_boxes"]]
        if len(boxes) != e:
            raise _Abort("initial box count mismatch")
    except (KeyError, TypeError, _Abort) as exc:
        ck.fail("schema", witness=str(exc))
        return ck.report()

    params = derive_parameters(BoxGameConfig(m, b, n_v, e, cap, ell))
    ln_keep, ln_boost = _log_factors(m, b, params.lam, params.tau)
    # Monotone score and the fair-share bound are properties of the potential
    # strategy; a transcript from some other maker carries no such promise.
    potential_maker = h.get("maker", "potential") == "potential"
    guaranteed = bool(h.get("guaranteed", params.preconditions_ok)) and potential_maker
    status = np.zeros(n_v, dtype=np.int8)
    x_cnt = np.zeros(e, dtype=np.int64)
    y_cnt = np.zeros(e, dtype=np.int64)
    free = n_v

    def total_log_potential() -> float:
        return _logsumexp(x_cnt * ln_keep + y_cnt * ln_boost)

    last_potential = total_log_potential()
    max_deficit = -float(ell)

    def close_round(idx: int) -> None:
        nonlocal last_potential, max_deficit
        pot = total_log_potential()
        if potential_maker and pot > last_potential + math.log1p(REL_TOL):
            ck.fail("potential-monotone", where=idx, witness=f"{last_potential} -> {pot}")
        last_potential = pot
        c = x_cnt + y_cnt
        deficits = m * c / (m + b) - x_cnt - ell
        max_deficit = max(max_deficit, float(deficits.max()))

    try:
        cur_round = 0
        phase = "done"  # per-round phase: grow -> maker -> breaker
        claims = 0
        for idx, ev in enumerate(t.events):
            tag = ev.get("t")
            k = ev.get("k")
            if tag == "GG":
                if k != cur_round + 1:
                    ck.fail("event-order", where=idx, witness=f"grow for round {k} after {cur_round}")
                    raise _Abort("round order")
                if phase == "maker":
                    ck.fail("event-order", where=idx, witness=f"round {cur_round} closed without breaker move")
                cur_round = k
                phase = "maker"
                claims = 0
                for box_id, verts in ev["adds"]:
                    if not 0 <= box_id < e:
                        ck.fail("box-growth", where=idx, witness=f"unknown box {box_id}")
                        continue
                    for v in verts:
                        if status[v] != 0:
                            ck.fail("box-growth", where=idx, witness=f"non-free vertex {v}")
                        if v in boxes[box_id]:
                            ck.fail("box-growth", where=idx, witness=f"duplicate vertex {v} in box {box_id}")
                        boxes[box_id].add(v)
                    if len(boxes[box_id]) > cap:
                        ck.fail("box-growth", where=idx, witness=f"box {box_id} over cap")
            elif tag == "MK":
                if k != cur_round or phase != "maker":
                    ck.fail("event-order", where=idx, witness="maker claim out of phase")
                v = ev["v"]
                if status[v] != 0:
                    ck.fail("claim-legality", where=idx, witness=f"maker claim of vertex {v}")
                else:
                    status[v] = 1
                    free -= 1
                    for box_id, mem in enumerate(boxes):
                        if v in mem:
                            x_cnt[box_id] += 1
                claims += 1
                if claims > m:
                    ck.fail("maker-quota", where=idx, witness=f"{claims} claims in round {k}")
            elif tag == "GH":
                if k != cur_round or phase != "maker":
                    ck.fail("event-order", where=idx, witness="haunt out of phase")
                for v in [ev["v"]] + list(ev.get("extra", [])):
                    if status[v] in (1, 2):
                        ck.fail("claim-legality", where=idx, witness=f"haunt of claimed vertex {v}")
                    elif status[v] == 0:
                        status[v] = 3
                        free -= 1
            elif tag == "BK":
                if k != cur_round or phase != "maker":
                    ck.fail("event-order", where=idx, witness="breaker move out of phase")
                    raise _Abort("phase")
                phase = "breaker"
                vs = ev["vs"]
                if len(vs) > b or len(set(vs)) != len(vs):
                    ck.fail("claim-legality", where=idx, witness="breaker bias or duplicate")
                if claims < m and len(vs) > 0:
                    ck.fail("maker-quota", where=idx, witness=f"breaker moved after {claims} < m claims")
                for v in vs:
                    if status[v] != 0:
                        ck.fail("claim-legality", where=idx, witness=f"breaker claim of vertex {v}")
                    else:
                        status[v] = 2
                        free -= 1
                        for box_id, mem in enumerate(boxes):
                            if v in mem:
                                y_cnt[box_id] += 1
                close_round(idx)
            else:
                ck.fail("schema", where=idx, witness=f"unknown event tag {tag!r}")
                raise _Abort("tag")
        close_round(len(t.events))
    except _Abort:
        pass
    except (KeyError, TypeError, IndexError) as exc:
        ck.fail("schema", witness=f"{type(exc).__name__}: {exc}")

    if guaranteed and max_deficit > DEFICIT_TOL:
        ck.fail("fair-share", witness=f"max deficit {max_deficit}")
    else:
        ck.note("fair-share", f"max deficit {max_deficit:.6g} (guaranteed={guaranteed})")
    return ck.report()


# -- real game verification ---------------------------------------------------

_REAL_CHECKS = [
    "schema",
    "hash-integrity",
    "turn-structure",
    "turn-parity",
    "oracle-membership",
    "ledger-legality",
    "breaker-discipline",
    "bias-bound",
    "feed-bias",
    "grow-rule",
    "box-legality",
    "potential-monotone-degree",
    "potential-monotone-nbhd",
    "fair-share-degree",
    "fair-share-nbhd",
    "ledger-trichotomy",
]


class _RealReplay:
    """Independent state for replaying a full-game transcript."""

    def __init__(self, ck: _Checks, header: dict):
        self.ck = ck
        self.n = header["n"]
        self.p = header["p"]
        self.b = header["b"]
        self.seed = header["seed"]
        self.breaker_first = bool(header.get("breaker_first", False))
        self.total = edge_count(self.n)
        self.U, self.V = endpoint_arrays(self.n)
        self.led = np.zeros(self.total, dtype=np.int8)
        self.stat = {
            "d": np.zeros(self.total, dtype=np.int8),
            "n": np.zeros(self.total, dtype=np.int8),
        }
        self.x = {"d": np.zeros(self.n, dtype=np.int64), "n": np.zeros(self.n, dtype=np.int64)}
        self.y = {"d": np.zeros(self.n, dtype=np.int64), "n": np.zeros(self.n, dtype=np.int64)}
        self.mem_n: list[set[int]] = [set() for _ in range(self.n)]
        self.inc_n: dict[int, list[int]] = {}
        self.adj_m: list[set[int]] = [set() for _ in range(self.n)]
        self.acc = {"d": [], "n": []}
        self.pending: list[tuple[int, int]] = []
        self.cap_n = header["M_nbhd"]
        self.ell = {"d": header["ell_degree"], "n": header["ell_nbhd"]}
        maker = header.get("maker", {})
        if isinstance(maker, dict):
            maker = maker.get("name", "potential")
        self.potential_maker = maker == "potential"
        self.guaranteed = {
            "d": bool(header.get("guaranteed_degree", False)) and self.potential_maker,
            "n": bool(header.get("guaranteed_nbhd", False)) and self.potential_maker,
        }
        self.factors = {}
        for key, cap in (("d", header["M_degree"]), ("n", header["M_nbhd"])):
            params = derive_parameters(
                BoxGameConfig(1, 2 * self.b, self.total, self.n, cap, self.ell[key])
            )
            self.factors[key] = _log_factors(1, 2 * self.b, params.lam, params.tau)
        self.last_potential = {"d": 0.0, "n": 0.0}
        self.first_feed_done = {"d": False, "n": False}
        for key in ("d", "n"):
            self.last_potential[key] = self.total_log_potential(key)
        self.max_deficit = {"d": -float(self.ell["d"]), "n": -float(self.ell["n"])}
        self.turn = 0

    def degree_boxes_of(self, e: int) -> tuple[int, int]:
        return int(self.U[e]), int(self.V[e])

    def total_log_potential(self, key: str) -> float:
        ln_keep, ln_boost = self.factors[key]
        return _logsumexp(self.x[key] * ln_keep + self.y[key] * ln_boost)

    def checkpoint(self, key: str, idx: int) -> None:
        pot = self.total_log_potential(key)
        name = "potential-monotone-degree" if key == "d" else "potential-monotone-nbhd"
        # Monotonicity is the potential strategy's invariant. A leading
        # Breaker move can also raise the degree-game score before Maker ever
        # moves, so with breaker_first the baseline starts after that feed.
        skip = not self.potential_maker or (self.breaker_first and not self.first_feed_done[key])
        if not skip and pot > self.last_potential[key] + math.log1p(REL_TOL):
            self.ck.fail(name, where=idx, witness=f"{self.last_potential[key]} -> {pot}")
        self.last_potential[key] = pot
        self.first_feed_done[key] = True
        c = self.x[key] + self.y[key]
        deficits = c / (1 + 2 * self.b) - self.x[key] - self.ell[key]
        self.max_deficit[key] = max(self.max_deficit[key], float(deficits.max()))

    def feed(self, key: str, idx: int) -> None:
        acc = self.acc[key]
        if len(acc) > 2 * self.b:
            self.ck.fail("feed-bias", where=idx, witness=f"feed of {len(acc)} > 2b")
        stat = self.stat[key]
        for e in acc:
            if stat[e] != 0:
                self.ck.fail("box-legality", where=idx, witness=f"fed edge {e} not free")
                continue
            stat[e] = 2
            if key == "d":
                u, v = self.degree_boxes_of(e)
                self.y["d"][u] += 1
                self.y["d"][v] += 1
            else:
                for box in self.inc_n.get(e, ()):
                    self.y["n"][box] += 1
        acc.clear()
        self.checkpoint(key, idx)

    def begin_turn(self, k: int, idx: int) -> None:
        if k != self.turn + 1:
            self.ck.fail("turn-structure", where=idx, witness=f"turn {k} after {self.turn}")
            raise _Abort("turn order")
        self.turn = k
        self.feed("d" if k % 2 == 1 else "n", idx)

    def expected_grow(self) -> dict[int, list[int]]:
        n = self.n
        fresh: dict[int, set[int]] = {}
        for x, y in self.pending:
            for a, c in ((x, y), (y, x)):
                bucket = fresh.setdefault(a, set())
                mem = self.mem_n[a]
                for w in self.adj_m[a]:
                    if w == c:
                        continue
                    lo, hi = (c, w) if c < w else (w, c)
                    eid = lo * n - lo * (lo + 1) // 2 + (hi - lo - 1)
                    if self.led[eid] == 0 and eid not in mem:
                        bucket.add(eid)
        self.pending.clear()
        adds: dict[int, list[int]] = {}
        for a in sorted(fresh):
            new = sorted(fresh[a])
            room = int(self.cap_n - len(self.mem_n[a]))
            new = new[: max(room, 0)]
            if new:
                adds[a] = new
        return adds

    def apply_grow(self, adds: dict[int, list[int]]) -> None:
        for box, verts in adds.items():
            self.mem_n[box].update(verts)
            for e in verts:
                self.inc_n.setdefault(e, []).append(box)

    def maker_claim(self, key: str, e: int, idx: int) -> None:
        if self.led[e] != 0:
            self.ck.fail("ledger-legality", where=idx, witness=f"maker claim of edge {e}")
            raise _Abort("ledger")
        if not bool(edge_in_gamma(self.seed, self.p, [e])[0]):
            self.ck.fail("oracle-membership", where=idx, witness=f"claimed edge {e} not in the graph")
        self.led[e] = 1
        other = "n" if key == "d" else "d"
        if self.stat[key][e] != 0 or self.stat[other][e] != 0:
            self.ck.fail("box-legality", where=idx, witness=f"claimed edge {e} not free in a box game")
        self.stat[key][e] = 1
        self.stat[other][e] = 3
        if key == "d":
            u, v = self.degree_boxes_of(e)
            self.x["d"][u] += 1
            self.x["d"][v] += 1
        else:
            for box in self.inc_n.get(e, ()):
                self.x["n"][box] += 1
        u, v = int(self.U[e]), int(self.V[e])
        self.adj_m[u].add(v)
        self.adj_m[v].add(u)
        self.pending.append((u, v))

    def ghost_haunt(self, e: int, idx: int) -> None:
        if self.led[e] != 0:
            self.ck.fail("ledger-legality", where=idx, witness=f"haunt of edge {e}")
            raise _Abort("ledger")
        if bool(edge_in_gamma(self.seed, self.p, [e])[0]):
            self.ck.fail("oracle-membership", where=idx, witness=f"haunted edge {e} is in the graph")
        self.led[e] = 3
        for key in ("d", "n"):
            if self.stat[key][e] != 0:
                self.ck.fail("box-legality", where=idx, witness=f"haunted edge {e} not free")
            self.stat[key][e] = 3

    def breaker_move(self, es: list[int], idx: int) -> None:
        if len(es) > self.b or len(set(es)) != len(es):
            self.ck.fail("bias-bound", where=idx, witness=f"{len(es)} claims")
        for e in es:
            if self.led[e] == 3:
                self.ck.fail("breaker-discipline", where=idx, witness=f"revealed-out edge {e}")
                continue
            if self.led[e] != 0:
                self.ck.fail("ledger-legality", where=idx, witness=f"breaker claim of edge {e}")
                continue
            self.led[e] = 2
            self.acc["d"].append(e)
            self.acc["n"].append(e)


def _verify_real(t: Transcript) -> InvariantReport:
    ck = _Checks(_REAL_CHECKS)
    stored = getattr(t, "stored_hash", None)
    if stored is not None and stored != t.recompute_hash_hex():
        ck.fail("hash-integrity", witness="stored hash does not match events")
    try:
        rp = _RealReplay(ck, t.header)
    except (KeyError, TypeError) as exc:
        ck.fail("schema", witness=f"header: {exc}")
        return ck.report()

    try:
        saw_grow_for = 0
        maker_claims_this_turn = 0
        for idx, ev in enumerate(t.events):
            tag = ev.get("t")
            if tag == "GG":
                k = ev["k"]
                if k % 2 != 0:
                    ck.fail("turn-parity", where=idx, witness=f"grow on odd turn {k}")
                if k != rp.turn + 1:
                    ck.fail("turn-structure", where=idx, witness=f"grow for turn {k}")
                    raise _Abort("order")
                rp.begin_turn(k, idx)
                maker_claims_this_turn = 0
                saw_grow_for = k
                expected = rp.expected_grow()
                got = {box: list(verts) for box, verts in ev["adds"]}
                if got != expected:
                    ck.fail("grow-rule", where=idx, witness=_grow_diff(expected, got))
                for box, verts in got.items():
                    if len(rp.mem_n[box]) + len(verts) > rp.cap_n:
                        ck.fail("grow-rule", where=idx, witness=f"box {box} over cap")
                rp.apply_grow(got)
            elif tag in ("MK", "GH"):
                k, g, e = ev["k"], ev["g"], ev["e"]
                if g not in ("d", "n"):
                    ck.fail("schema", where=idx, witness=f"bad game tag {g!r}")
                    raise _Abort("tag")
                if g != ("d" if k % 2 == 1 else "n"):
                    ck.fail("turn-parity", where=idx, witness=f"game {g} on turn {k}")
                if k == rp.turn + 1:
                    rp.begin_turn(k, idx)
                    maker_claims_this_turn = 0
                elif k != rp.turn:
                    ck.fail("turn-structure", where=idx, witness=f"event for turn {k}")
                    raise _Abort("order")
                if g == "n" and saw_grow_for != k and tag in ("MK", "GH"):
                    ck.fail("turn-structure", where=idx, witness=f"even turn {k} without grow")
                if tag == "MK":
                    maker_claims_this_turn += 1
                    if maker_claims_this_turn > 1:
                        ck.fail("turn-structure", where=idx, witness="two claims in one turn")
                    rp.maker_claim(g, e, idx)
                else:
                    rp.ghost_haunt(e, idx)
            elif tag == "BK":
                k = ev["k"]
                if k != rp.turn and not (k == 0 and rp.turn == 0 and rp.breaker_first):
                    ck.fail("turn-structure", where=idx, witness=f"breaker move tagged turn {k}")
                rp.breaker_move(list(ev["es"]), idx)
            else:
                ck.fail("schema", where=idx, witness=f"unknown event tag {tag!r}")
                raise _Abort("tag")
        rp.feed("d", len(t.events))
        rp.feed("n", len(t.events))
    except _Abort:
        pass
    except (KeyError, TypeError, IndexError) as exc:
        ck.fail("schema", witness=f"{type(exc).__name__}: {exc}")

    unclaimed = int((rp.led == 0).sum())
    if unclaimed != 0:
        ck.fail("ledger-trichotomy", witness=f"{unclaimed} edges left unclaimed")
    for key, name in (("d", "fair-share-degree"), ("n", "fair-share-nbhd")):
        md = rp.max_deficit[key]
        if rp.guaranteed[key] and md > DEFICIT_TOL:
            ck.fail(name, witness=f"max deficit {md}")
        else:
            ck.note(name, f"max deficit {md:.6g} (guaranteed={rp.guaranteed[key]})")
    return ck.report()


def _grow_diff(expected: dict, got: dict) -> str:
    keys = set(expected) | set(got)
    for box in sorted(keys):
        if expected.get(box) != got.get(box):
            return (
                f"box {box}: expected {expected.get(box, [])[:6]}..., "
                f"recorded {got.get(box, [])[:6]}..."
            )
    return "addition sets differ"
