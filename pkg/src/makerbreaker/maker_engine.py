"""Maker's meta-strategy for the biased (1:b) game on the edges of K_n.

Maker privately fixes a seeded random graph G(n, p) that is revealed one edge
at a time: on her turn she proposes an edge, queries the oracle, claims the
edge if it is in the graph, and otherwise marks it revealed-out and proposes
again (one claim per turn). By convention Breaker never touches revealed-out
edges, so the game ends when no unclaimed edge remains.

Which edge to propose is decided by two embedded box games on E(K_n), played
in alternation: odd turns use the degree game, whose n static boxes collect
the edges at each vertex, and even turns use the neighbourhood game, whose n
boxes start empty and grow (immediately before Maker's even turns) with the
unclaimed edges spanned by each vertex's current Maker-neighbourhood. Both
embedded games face a simulated Breaker of bias 2b that replays the real
Breaker's claims, accumulated between consecutive turns of the same game, so
keeping a fair share of every box bounds how much Breaker can concentrate on
any vertex or any neighbourhood.

An edge resolved in one game is removed from the other immediately: a claim
in the degree game is haunted in the neighbourhood game and vice versa, and a
revealed-out edge is haunted in both. This is equivalent to haunting at
proposal time (haunted vertices never affect scores) and keeps both candidate
pools equal to the unclaimed ledger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .breaker_strategies import BreakerView
from .core_graph import ClaimLedger, EdgeStatus, SimpleGraph, edge_count, endpoint_arrays
from .errors import ConfigError, InvariantViolation, StrategyFault
from .gamma_oracle import GammaOracle, Membership
from .spookybox import BoxGameConfig, BoxGameState, derive_parameters
from .transcript import Transcript

# Slack derivation and recorded guarantee thresholds for the headline bounds.
DELTA_FACTOR = 1e-6
GUARANTEE_P_FACTOR = 1e8
GUARANTEE_B_FACTOR = 1e-24

_OUT = Membership.NOT_IN_GAMMA


@dataclass(frozen=True)
class RealGameParams:
    """Configuration of one full game.

    delta defaults to 1e-6 * epsilon^2; the slacks default to delta*p*n for
    the degree game and delta*p^3*n^2 for the neighbourhood game. With
    ell_mode="auto" each slack is raised to its guaranteed minimum so the
    fair-share property is certain at desk scale. strict=True turns failed
    box-game preconditions into errors instead of warnings.
    """

    n: int
    p: float
    b: int
    epsilon: float
    delta: Optional[float] = None
    ell_degree: Optional[float] = None
    ell_nbhd: Optional[float] = None
    ell_mode: str = "default"
    seed: int = 0
    breaker_first: bool = False
    strict: bool = False

    def validate(self) -> None:
        if self.n < 2:
            raise ConfigError("n must be at least 2")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError("p out of range [0, 1]")
        if self.b < 1:
            raise ConfigError("b must be at least 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError("epsilon must lie in (0, 1)")
        if self.ell_mode not in ("default", "auto"):
            raise ConfigError("ell_mode must be 'default' or 'auto'")
        if self.delta is not None and self.delta <= 0:
            raise ConfigError("delta must be positive")


class PotentialMaker:
    """Proposes the highest-effect free edge of the active box game."""

    name = "potential"

    def params(self) -> dict:
        return {}

    def run_turn(self, st: "RealGameState", game: BoxGameState, gkey: str) -> Optional[int]:
        # Resolved edges hold -inf in the effect cache, and a haunt inside
        # _try_claim masks the proposal, so the live array can be re-argmaxed.
        eff = game.eff
        while True:
            e = int(np.argmax(eff))
            if eff[e] == -np.inf:
                return None
            if st._try_claim(e, gkey):
                return e


class RandomMaker:
    """Proposes unclaimed edges in seeded random order."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def params(self) -> dict:
        return {"seed": self.seed}

    def run_turn(self, st: "RealGameState", game: BoxGameState, gkey: str) -> Optional[int]:
        pool = st.ledger.unclaimed_ids()
        if pool.size == 0:
            return None
        rng = np.random.default_rng([self.seed, st.turn])
        for e in rng.permutation(pool):
            e = int(e)
            if st.ledger.status[e] != 0:
                continue
            if st._try_claim(e, gkey):
                return e
        return None


class GreedyDegreeMaker:
    """Proposes the unclaimed edge maximising its endpoints' Maker degrees."""

    name = "greedy"

    def params(self) -> dict:
        return {}

    def run_turn(self, st: "RealGameState", game: BoxGameState, gkey: str) -> Optional[int]:
        deg = st.g_maker.degrees().astype(np.float64)
        work = np.where(
            st.ledger.status == EdgeStatus.UNCLAIMED, deg[st.U] + deg[st.V], -np.inf
        )
        while True:
            e = int(np.argmax(work))
            if work[e] == -np.inf:
                return None
            if st._try_claim(e, gkey):
                return e
            work[e] = -np.inf


def make_maker(name: str, seed: int = 0):
    if name == "potential":
        return PotentialMaker()
    if name == "random":
        return RandomMaker(seed)
    if name == "greedy":
        return GreedyDegreeMaker()
    raise ValueError(f"unknown maker strategy {name!r}")


class RealGameState:
    """Full position of one game: ledger, graphs, oracle, both box games."""

    def __init__(self, params: RealGameParams):
        from . import __version__

        params.validate()
        self.params = params
        n, p, b = params.n, params.p, params.b
        self.n = n
        self.total_edges = edge_count(n)
        self.U, self.V = endpoint_arrays(n)
        self.ledger = ClaimLedger(n)
        self.oracle = GammaOracle(n, p, params.seed)
        self.g_maker = SimpleGraph(n)
        self.g_breaker = SimpleGraph(n)
        self.warnings: list[str] = []

        delta = params.delta if params.delta is not None else DELTA_FACTOR * params.epsilon**2
        self.delta = delta
        ell_d = params.ell_degree if params.ell_degree is not None else delta * p * n
        ell_n = params.ell_nbhd if params.ell_nbhd is not None else delta * p**3 * n**2
        m_nbhd = max(1, math.ceil(p * p * n * n))

        def build_cfg(ell: float, cap: int, label: str) -> tuple[BoxGameConfig, float]:
            probe = BoxGameConfig(1, 2 * b, self.total_edges, n, cap, max(ell, 0.0))
            ell_min = derive_parameters(probe).ell_min
            if params.ell_mode == "auto":
                ell = max(ell, ell_min)
            cfg = BoxGameConfig(1, 2 * b, self.total_edges, n, cap, max(ell, 0.0))
            pp = derive_parameters(cfg)
            if not pp.preconditions_ok:
                self.warnings.append(
                    f"{label} game unguaranteed: need M >= {9 * (1 + 2 * b) * math.log(n):.2f} "
                    f"(M={cap}) and ell >= {ell_min:.6g} (ell={cfg.ell:.6g})"
                )
            return cfg, ell_min

        self.cfg_degree, self._ell_min_degree = build_cfg(ell_d, n, "degree")
        self.cfg_nbhd, self._ell_min_nbhd = build_cfg(ell_n, m_nbhd, "neighbourhood")
        if params.strict and self.warnings:
            raise ConfigError("; ".join(self.warnings))

        degree_boxes: list[list[int]] = [[] for _ in range(n)]
        for e in range(self.total_edges):
            degree_boxes[int(self.U[e])].append(e)
            degree_boxes[int(self.V[e])].append(e)
        self.degree_game = BoxGameState(self.cfg_degree, degree_boxes, strict_phase=False)
        self.nbhd_game = BoxGameState(
            self.cfg_nbhd, [[] for _ in range(n)], strict_phase=False
        )
        for game, label in ((self.degree_game, "degree"), (self.nbhd_game, "neighbourhood")):
            if game.lam_clamped:
                self.warnings.append(f"{label} game lambda clamped below 1 (M far too small)")

        hyp_p_ok = p >= GUARANTEE_P_FACTOR * params.epsilon**-2 * n**-0.5
        hyp_b_ok = p > 0 and b <= GUARANTEE_B_FACTOR * params.epsilon**6 / p
        self.turn = 0
        self.breaker_turns = 0
        self._acc: dict[str, list[int]] = {"d": [], "n": []}
        self._pending_nbh: list[tuple[int, int]] = []
        self._last_maker_edge: Optional[tuple[int, int]] = None
        self.max_deficit = {
            "d": self.degree_game.max_deficit(),
            "n": self.nbhd_game.max_deficit(),
        }
        self.diagnostics = {"grow_dropped": 0, "max_feed": 0}
        self.finished = False
        self.transcript = Transcript(
            {
                "kind": "real",
                "n": n,
                "p": p,
                "b": b,
                "epsilon": params.epsilon,
                "delta": delta,
                "seed": params.seed,
                "breaker_first": params.breaker_first,
                "ell_mode": params.ell_mode,
                "ell_degree": self.cfg_degree.ell,
                "ell_nbhd": self.cfg_nbhd.ell,
                "M_degree": self.cfg_degree.M,
                "M_nbhd": self.cfg_nbhd.M,
                "guaranteed_degree": derive_parameters(self.cfg_degree).preconditions_ok,
                "guaranteed_nbhd": derive_parameters(self.cfg_nbhd).preconditions_ok,
                "hypotheses": {"p_ok": hyp_p_ok, "b_ok": hyp_b_ok},
                "warnings": self.warnings,
                "version": __version__,
            }
        )

    # -- bookkeeping -----------------------------------------------------

    def _game(self, gkey: str) -> BoxGameState:
        return self.degree_game if gkey == "d" else self.nbhd_game

    def _feed(self, gkey: str) -> None:
        """Deliver accumulated real Breaker claims to a box game (bias 2b)."""
        acc = self._acc[gkey]
        if not acc:
            return
        if len(acc) > 2 * self.params.b:
            raise InvariantViolation(
                f"simulated breaker feed of {len(acc)} exceeds 2b = {2 * self.params.b}"
            )
        game = self._game(gkey)
        game.breaker_claim(acc)
        self.diagnostics["max_feed"] = max(self.diagnostics["max_feed"], len(acc))
        self.max_deficit[gkey] = max(self.max_deficit[gkey], game.max_deficit())
        acc.clear()

    def _try_claim(self, e: int, gkey: str) -> bool:
        """Query the oracle for a proposed edge; claim it or haunt it.

        Returns True when the edge was claimed. Revealed non-edges are marked
        in the ledger and haunted in both box games; claimed edges join the
        active game's Maker set and are haunted in the other game.
        """
        if self.ledger.status[e] != 0:
            raise InvariantViolation(f"proposal of non-unclaimed edge {e}")
        if self.oracle.query(e) is _OUT:
            self.ledger.mark_revealed_out(e)
            self.degree_game.haunt(e)
            self.nbhd_game.haunt(e)
            self.transcript.append({"t": "GH", "k": self.turn, "g": gkey, "e": e})
            return False
        self.ledger.claim_maker(e)
        u, v = int(self.U[e]), int(self.V[e])
        self.g_maker.add_edge(u, v)
        if gkey == "d":
            self.degree_game.allow_claim(e)
            self.nbhd_game.haunt(e)
        else:
            self.nbhd_game.allow_claim(e)
            self.degree_game.haunt(e)
        self._pending_nbh.append((u, v))
        self._last_maker_edge = (u, v)
        self.transcript.append({"t": "MK", "k": self.turn, "g": gkey, "e": e})
        return True

    def _grow_nbhd(self) -> None:
        """Enlarge neighbourhood boxes right before an even Maker turn.

        Box v gains every unclaimed edge xy with xv and yv already claimed by
        Maker. Only pairs involving a Maker edge claimed since the previous
        grow can be new, so the scan is incremental. Additions past the size
        cap are dropped deterministically, lowest EdgeId kept.
        """
        n = self.n
        status = self.ledger.status
        game = self.nbhd_game
        fresh: dict[int, set[int]] = {}
        for x, y in self._pending_nbh:
            for a, c in ((x, y), (y, x)):
                mem = game.members[a]
                bucket = fresh.setdefault(a, set())
                for w in self.g_maker.neighbors(a):
                    if w == c:
                        continue
                    lo, hi = (c, w) if c < w else (w, c)
                    eid = lo * n - lo * (lo + 1) // 2 + (hi - lo - 1)
                    if status[eid] == 0 and eid not in mem:
                        bucket.add(eid)
        self._pending_nbh.clear()
        adds: dict[int, list[int]] = {}
        for a in sorted(fresh):
            new = sorted(fresh[a])
            if not new:
                continue
            room = int(game.cfg.M - game.box_size[a])
            if len(new) > room:
                self.diagnostics["grow_dropped"] += len(new) - max(room, 0)
                new = new[: max(room, 0)]
            if new:
                adds[a] = new
        game.ghost_grow(adds)
        self.transcript.append(
            {"t": "GG", "k": self.turn, "adds": [[a, adds[a]] for a in sorted(adds)]}
        )

    # -- turns -------------------------------------------------------------

    def maker_turn(self, maker) -> Optional[int]:
        """One Maker turn: feed, grow (even turns), then the proposal loop."""
        self.turn += 1
        gkey = "d" if self.turn % 2 == 1 else "n"
        self._feed(gkey)
        if gkey == "n":
            self._grow_nbhd()
        self._last_maker_edge = None
        return maker.run_turn(self, self._game(gkey), gkey)

    def breaker_turn(self, strategy) -> list[int]:
        """One Breaker turn: validate and apply the strategy's claims."""
        self.breaker_turns += 1
        view = BreakerView(
            n=self.n,
            b=self.params.b,
            ledger=self.ledger,
            g_maker=self.g_maker,
            g_breaker=self.g_breaker,
            last_maker_edge=self._last_maker_edge,
            turn=self.breaker_turns,
        )
        edges = [int(e) for e in strategy(view)]
        if len(edges) > self.params.b:
            raise StrategyFault(f"breaker returned {len(edges)} edges > b = {self.params.b}")
        if len(set(edges)) != len(edges):
            raise StrategyFault("breaker returned a duplicate edge")
        for e in edges:
            if self.ledger.status_of(e) != EdgeStatus.UNCLAIMED:
                raise StrategyFault(
                    f"breaker claimed edge {e} with status {self.ledger.status_of(e).name}"
                )
        for e in edges:
            self.ledger.claim_breaker(e)
            self.g_breaker.add_edge(int(self.U[e]), int(self.V[e]))
        self._acc["d"].extend(edges)
        self._acc["n"].extend(edges)
        self.transcript.append({"t": "BK", "k": self.turn, "es": edges})
        return edges

    def finalize(self) -> None:
        """Flush trailing simulated-Breaker feeds and close the books."""
        self._feed("d")
        self._feed("n")
        self.max_deficit["d"] = max(self.max_deficit["d"], self.degree_game.max_deficit())
        self.max_deficit["n"] = max(self.max_deficit["n"], self.nbhd_game.max_deficit())
        self.finished = True


def new_game(params: RealGameParams) -> RealGameState:
    return RealGameState(params)


@dataclass
class GameReport:
    """End-of-game statistics, recomputable from the transcript alone."""

    n: int
    p: float
    b: int
    epsilon: float
    seed: int
    min_maker_degree: int
    min_nbhd_edges_revealed: int
    min_nbhd_edges_maker: int
    eps_hat_degree: Optional[float]
    eps_hat_nbhd: Optional[float]
    max_deficit_degree: float
    max_deficit_nbhd: float
    s_max_size: int
    degree_failure_round: Optional[int]
    s_failure_round: Optional[int]
    census: dict
    triangle_free: bool
    k4_free_at_v0: bool
    v0: int
    transcript_hash: str
    warnings: list[str] = field(default_factory=list)
    maker_degrees: list[int] = field(default_factory=list)
    nbhd_edges_revealed: list[int] = field(default_factory=list)
    nbhd_edges_maker: list[int] = field(default_factory=list)
    s_sizes: list[int] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def final_report(state: RealGameState) -> GameReport:
    """Replay the transcript to compute degrees, neighbourhood counts, and
    the per-vertex surge sets.

    A vertex u joins the surge set of v at the claim of uv when v's Maker
    neighbourhood already meets u's Breaker neighbourhood in at least
    sqrt(delta)*p*n vertices (checked in both orientations, on the state just
    before the claim). Crossing 2pn Maker degree or 8*sqrt(delta)*p*n surge
    size anywhere is flagged as a failure round.
    """
    from .analysis import k4_witness_at, triangle_witness

    n, p = state.n, state.params.p
    delta = state.delta
    s_threshold = math.sqrt(delta) * p * n
    deg_threshold = 2 * p * n
    s_cap = 8 * math.sqrt(delta) * p * n
    adj_m: list[set[int]] = [set() for _ in range(n)]
    adj_b: list[set[int]] = [set() for _ in range(n)]
    surge: list[set[int]] = [set() for _ in range(n)]
    deg_fail: Optional[int] = None
    s_fail: Optional[int] = None
    for ev in state.transcript.events:
        tag = ev["t"]
        if tag == "MK":
            e = ev["e"]
            u, v = int(state.U[e]), int(state.V[e])
            for a, c in ((u, v), (v, u)):
                if len(adj_m[c] & adj_b[a]) >= s_threshold:
                    surge[c].add(a)
                    if s_fail is None and len(surge[c]) >= s_cap:
                        s_fail = ev["k"]
            adj_m[u].add(v)
            adj_m[v].add(u)
            if deg_fail is None and (
                len(adj_m[u]) >= deg_threshold or len(adj_m[v]) >= deg_threshold
            ):
                deg_fail = ev["k"]
        elif tag == "BK":
            for e in ev["es"]:
                u, v = int(state.U[e]), int(state.V[e])
                adj_b[u].add(v)
                adj_b[v].add(u)

    in_gamma = state.oracle.status == Membership.IN_GAMMA
    nbhd_rev: list[int] = []
    nbhd_mkr: list[int] = []
    for v in range(n):
        ids = state.degree_game._member_arr[v].view()
        sel = ids[in_gamma[ids]]
        gamma_hood = {
            int(state.U[e]) if int(state.V[e]) == v else int(state.V[e]) for e in sel
        }
        nbhd_rev.append(_edges_within(adj_m, gamma_hood))
        nbhd_mkr.append(_edges_within(adj_m, adj_m[v]))

    degrees = [len(adj_m[v]) for v in range(n)]
    min_deg = min(degrees)
    min_rev = min(nbhd_rev)
    eps_hat_deg = 1.0 - min_deg / (p * n) if p > 0 else None
    eps_hat_nbh = 1.0 - 2.0 * min_rev / (p**3 * n**2) if p > 0 else None

    breaker_info = state.transcript.header.get("breaker", {})
    v0 = int(breaker_info.get("params", {}).get("v0", 0))
    return GameReport(
        n=n,
        p=p,
        b=state.params.b,
        epsilon=state.params.epsilon,
        seed=state.params.seed,
        min_maker_degree=min_deg,
        min_nbhd_edges_revealed=min_rev,
        min_nbhd_edges_maker=min(nbhd_mkr),
        eps_hat_degree=eps_hat_deg,
        eps_hat_nbhd=eps_hat_nbh,
        max_deficit_degree=state.max_deficit["d"],
        max_deficit_nbhd=state.max_deficit["n"],
        s_max_size=max(len(s) for s in surge),
        degree_failure_round=deg_fail,
        s_failure_round=s_fail,
        census=state.ledger.census(),
        triangle_free=triangle_witness(state.g_maker) is None,
        k4_free_at_v0=k4_witness_at(state.g_maker, v0) is None,
        v0=v0,
        transcript_hash=state.transcript.hash_hex,
        warnings=list(state.warnings),
        maker_degrees=degrees,
        nbhd_edges_revealed=nbhd_rev,
        nbhd_edges_maker=nbhd_mkr,
        s_sizes=[len(s) for s in surge],
        diagnostics=dict(state.diagnostics),
    )


def _edges_within(adj: list[set[int]], hood: set[int]) -> int:
    half = 0
    for x in hood:
        half += len(adj[x] & hood)
    return half // 2


def run_game(params: RealGameParams, breaker, maker=None) -> tuple[Transcript, GameReport]:
    """Play one full game to termination; deterministic given its inputs."""
    maker = maker if maker is not None else PotentialMaker()
    st = new_game(params)
    st.transcript.header["breaker"] = {
        "name": getattr(breaker, "name", type(breaker).__name__),
        "params": breaker.params() if hasattr(breaker, "params") else {},
    }
    st.transcript.header["maker"] = {
        "name": getattr(maker, "name", type(maker).__name__),
        "params": maker.params() if hasattr(maker, "params") else {},
    }
    if params.breaker_first and st.ledger.unclaimed_count > 0:
        st.breaker_turn(breaker)
    while st.ledger.unclaimed_count > 0:
        st.maker_turn(maker)
        if st.ledger.unclaimed_count == 0:
            break
        st.breaker_turn(breaker)
    st.finalize()
    return st.transcript, final_report(st)
