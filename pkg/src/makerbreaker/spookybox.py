"""Three-player box game engine with a potential-function Maker strategy.

The game is played on a vertex set V carrying a multihypergraph whose edges
are called boxes (at most M vertices each, empty boxes allowed). Each round:

  1. the Ghost may enlarge any box with vertices that are neither claimed nor
     haunted, subject to the size cap M;
  2. Maker repeatedly picks a free vertex until she has claimed m of them or
     none remain; the Ghost either lets her claim the pick or haunts it, and
     may haunt further free vertices at the same time;
  3. Breaker claims b free vertices (all remaining ones if fewer are left).

Play stops once every vertex is claimed or haunted. Maker's goal is a fair
share of every box: whenever a box has c claimed vertices, she wants at least
m*c/(m+b) - ell of them to be hers.

Maker's strategy here scores each box S as (1-lam)^|S cap X| * (1+tau)^|S cap Y|
(X, Y = Maker's and Breaker's claims) and always picks the free vertex whose
claim would reduce the total score the most. With lam = sqrt((m+b) ln e / M)/m
and tau solving (1+tau)^b = 1+m*lam, the total score never increases, and when
M >= 9(m+b) ln e and ell is at least the derived minimum the fair-share goal
is met in every round regardless of what the Ghost and Breaker do.

Numerics: per-box scores are maintained in the log domain (integer claim
counts times log factors, so no drift); per-vertex effects are kept in the
linear domain and updated incrementally as boxes change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import ConfigError, InvariantViolation, ProtocolViolation
from .transcript import Transcript

# Vertex states inside one box game.
FREE, MAKER, BREAKER, HAUNTED = 0, 1, 2, 3


@dataclass(frozen=True)
class BoxGameConfig:
    """Parameters of one box game instance.

    m, b: claims per round for Maker and Breaker; e: number of boxes;
    M: maximum box size; ell: fair-share slack. b = 0 models a game with no
    Breaker at all.
    """

    m: int
    b: int
    vertex_count: int
    e: int
    M: int
    ell: float
    strict_preconditions: bool = False

    def validate(self) -> None:
        if self.m < 1:
            raise ConfigError("m must be at least 1")
        if self.b < 0:
            raise ConfigError("b must be non-negative")
        if self.e < 1:
            raise ConfigError("need at least one box")
        if self.M < 1:
            raise ConfigError("box size cap M must be at least 1")
        if self.vertex_count < 1:
            raise ConfigError("need at least one vertex")
        if self.ell < 0:
            raise ConfigError("fair-share slack ell must be non-negative")


@dataclass(frozen=True)
class PotentialParams:
    """Derived strategy parameters and precondition flags for a config."""

    lam: float
    tau: float
    ell_min: float
    preconditions_ok: bool
    degenerate: bool


def derive_parameters(cfg: BoxGameConfig) -> PotentialParams:
    """Closed-form lam, tau, and the minimal guaranteed slack for a config.

    lam = (1/m) sqrt((m+b) ln e / M); tau is the unique positive root of
    (1+tau)^b = 1 + m*lam, i.e. (1+m*lam)^(1/b) - 1; the slack bound is
    (5mb/(m+b)) sqrt(M ln e / (m+b)). Natural logarithms throughout. With a
    single box (e = 1) lam is zero and the strategy degenerates to an
    arbitrary choice, which is flagged rather than rejected.
    """
    cfg.validate()
    m, b, biggest = cfg.m, cfg.b, cfg.M
    ln_e = math.log(cfg.e)
    lam = math.sqrt((m + b) * ln_e / biggest) / m
    tau = (1.0 + m * lam) ** (1.0 / b) - 1.0 if b > 0 else 0.0
    ell_min = (5.0 * m * b / (m + b)) * math.sqrt(biggest * ln_e / (m + b))
    ok = biggest >= 9.0 * (m + b) * ln_e and cfg.ell >= ell_min
    if cfg.strict_preconditions and not ok:
        raise ConfigError(
            f"preconditions fail: need M >= {9.0 * (m + b) * ln_e:.3f} "
            f"(got {biggest}) and ell >= {ell_min:.6g} (got {cfg.ell})"
        )
    return PotentialParams(
        lam=lam,
        tau=tau,
        ell_min=ell_min,
        preconditions_ok=ok,
        degenerate=(lam == 0.0),
    )


def playable_parameters(m: int, b: int, lam: float, tau: float) -> tuple[float, float]:
    """Clamp lam below 1 so scores stay positive, re-solving tau to match.

    Only reachable when the size precondition fails badly (M < (m+b) ln e).
    Re-deriving tau from the clamped lam keeps (1+tau)^b = 1 + m*lam, which
    is what makes the total score non-increasing under the strategy.
    """
    if lam < 1.0:
        return lam, tau
    lam = 1.0 - 1e-12
    tau = (1.0 + m * lam) ** (1.0 / b) - 1.0 if b > 0 else 0.0
    return lam, tau


def box_log_potential(x_count: int, y_count: int, lam: float, tau: float) -> float:
    """Log of one box's score (1-lam)^x_count * (1+tau)^y_count."""
    if x_count < 0 or y_count < 0:
        raise ValueError("claim counts must be non-negative")
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must lie strictly between 0 and 1")
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    return x_count * math.log1p(-lam) + y_count * math.log1p(tau)


class _GrowArray:
    """Append-only int64 array with amortised doubling."""

    __slots__ = ("_buf", "size")

    def __init__(self, capacity: int = 4):
        self._buf = np.empty(capacity, dtype=np.int64)
        self.size = 0

    def append(self, value: int) -> None:
        if self.size == self._buf.shape[0]:
            grown = np.empty(max(8, 2 * self._buf.shape[0]), dtype=np.int64)
            grown[: self.size] = self._buf[: self.size]
            self._buf = grown
        self._buf[self.size] = value
        self.size += 1

    def view(self) -> np.ndarray:
        return self._buf[: self.size]


class Phase(Enum):
    GHOST_GROW = "grow"
    MAKER_MOVE = "maker"
    BREAKER_MOVE = "breaker"


class BoxGameState:
    """Mutable position of one box game with cached scores and effects.

    `strict_phase=True` enforces the grow -> maker -> breaker round order used
    by standalone games; the embedded games of the full-game engine drive the
    same primitives with their own interleaving and turn it off.
    """

    def __init__(
        self,
        cfg: BoxGameConfig,
        initial_boxes: Sequence[Iterable[int]],
        params: Optional[PotentialParams] = None,
        strict_phase: bool = True,
    ):
        cfg.validate()
        if len(initial_boxes) != cfg.e:
            raise ConfigError(f"expected {cfg.e} boxes, got {len(initial_boxes)}")
        self.cfg = cfg
        self.params = params if params is not None else derive_parameters(cfg)
        self.lam_clamped = self.params.lam >= 1.0
        self.lam, self.tau = playable_parameters(
            cfg.m, cfg.b, self.params.lam, self.params.tau
        )
        self._ln_keep = math.log1p(-self.lam)
        self._ln_boost = math.log1p(self.tau)

        n_v, n_box = cfg.vertex_count, cfg.e
        self.status = np.zeros(n_v, dtype=np.int8)
        self.x_count = np.zeros(n_box, dtype=np.int64)
        self.y_count = np.zeros(n_box, dtype=np.int64)
        self.box_size = np.zeros(n_box, dtype=np.int64)
        self.log_pot = np.zeros(n_box, dtype=np.float64)
        self.eff = np.zeros(n_v, dtype=np.float64)
        self.members: list[set[int]] = [set() for _ in range(n_box)]
        self._member_arr = [_GrowArray() for _ in range(n_box)]
        self.vertex_boxes: list[list[int]] = [[] for _ in range(n_v)]

        for box_id, verts in enumerate(initial_boxes):
            verts = list(verts)
            if len(set(verts)) != len(verts):
                raise ConfigError(f"box {box_id} has duplicate vertices")
            if len(verts) > cfg.M:
                raise ConfigError(f"box {box_id} exceeds size cap {cfg.M}")
            for v in verts:
                if not 0 <= v < n_v:
                    raise ConfigError(f"box {box_id} vertex {v} out of range")
                self.members[box_id].add(v)
                self._member_arr[box_id].append(v)
                self.vertex_boxes[v].append(box_id)
            self.box_size[box_id] = len(verts)
        for v in range(n_v):
            self.eff[v] = self.lam * len(self.vertex_boxes[v])

        self.free_count = n_v
        self.x_size = 0
        self.y_size = 0
        self.z_size = 0
        self.round_no = 1
        self.claims_this_round = 0
        self.phase = Phase.GHOST_GROW
        self.strict_phase = strict_phase
        self.pending_proposal: Optional[int] = None

    # -- phase plumbing -------------------------------------------------

    def _require_phase(self, phase: Phase) -> None:
        if self.strict_phase and self.phase is not phase:
            raise ProtocolViolation(f"operation requires {phase.value} phase, in {self.phase.value}")

    def end_maker_phase(self) -> None:
        self._require_phase(Phase.MAKER_MOVE)
        self.phase = Phase.BREAKER_MOVE

    @property
    def finished(self) -> bool:
        return self.free_count == 0

    def free_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.status == FREE)

    # -- moves -----------------------------------------------------------

    def ghost_grow(self, additions: Mapping[int, Sequence[int]]) -> None:
        """Enlarge boxes with free vertices; sizes stay capped at M.

        Added vertices are unclaimed, so box scores and totals do not move;
        only the effects of the added vertices grow.
        """
        self._require_phase(Phase.GHOST_GROW)
        for box_id in additions:
            verts = list(additions[box_id])
            if not 0 <= box_id < self.cfg.e:
                raise ProtocolViolation(f"grow names unknown box {box_id}")
            if len(set(verts)) != len(verts):
                raise ProtocolViolation(f"grow adds a vertex twice to box {box_id}")
            if self.box_size[box_id] + len(verts) > self.cfg.M:
                raise ProtocolViolation(
                    f"grow would push box {box_id} past the size cap {self.cfg.M}"
                )
            for v in verts:
                if not 0 <= v < self.cfg.vertex_count:
                    raise ProtocolViolation(f"grow adds out-of-range vertex {v}")
                if self.status[v] != FREE:
                    raise ProtocolViolation(
                        f"grow adds non-free vertex {v} to box {box_id}"
                    )
                if v in self.members[box_id]:
                    raise ProtocolViolation(f"vertex {v} already in box {box_id}")
        for box_id in additions:
            pot = self.lam * math.exp(self.log_pot[box_id])
            for v in additions[box_id]:
                self.members[box_id].add(v)
                self._member_arr[box_id].append(v)
                self.vertex_boxes[v].append(box_id)
                self.eff[v] += pot
            self.box_size[box_id] += len(additions[box_id])
        if self.strict_phase:
            self.phase = Phase.MAKER_MOVE

    def select_maker_vertex(self) -> Optional[int]:
        """Free vertex with the largest effect; ties go to the lowest index.

        Resolved vertices carry -inf in the effect cache, so one argmax over
        the live array suffices.
        """
        self._require_phase(Phase.MAKER_MOVE)
        if self.free_count == 0:
            self.pending_proposal = None
            return None
        v = int(np.argmax(self.eff))
        self.pending_proposal = v
        return v

    def maker_effect(self, v: int) -> float:
        """Drop in the total score if Maker claimed v right now.

        Summed over v's boxes with a max shift for stability. The cached
        per-vertex effects used by select drift by at most a few ulps from
        this on-demand value.
        """
        if self.status[v] != FREE:
            raise ValueError(f"vertex {v} is already claimed or haunted")
        boxes = self.vertex_boxes[v]
        if not boxes:
            return 0.0
        pots = self.log_pot[np.asarray(boxes, dtype=np.int64)]
        shift = float(pots.max())
        return self.lam * math.exp(shift) * float(np.exp(pots - shift).sum())

    def resolve_maker_proposal(self, decision) -> None:
        """Apply the Ghost's call on the pending proposal.

        decision is either ("allow", None) or ("haunt", extra_vertices).
        """
        if self.pending_proposal is None:
            raise ProtocolViolation("no maker proposal is pending")
        v = self.pending_proposal
        self.pending_proposal = None
        kind, extras = decision
        if kind == "allow":
            self.allow_claim(v)
        elif kind == "haunt":
            self.haunt(v, extras or ())
        else:
            raise ProtocolViolation(f"unknown ghost decision {kind!r}")

    def allow_claim(self, v: int) -> None:
        """Maker claims v: box scores shrink by the factor (1-lam)."""
        self._require_phase(Phase.MAKER_MOVE)
        if self.status[v] != FREE:
            raise ProtocolViolation(f"maker claim of non-free vertex {v}")
        self.status[v] = MAKER
        self.eff[v] = -np.inf
        self.free_count -= 1
        self.x_size += 1
        self.claims_this_round += 1
        for box_id in self.vertex_boxes[v]:
            old = math.exp(self.log_pot[box_id])
            self.log_pot[box_id] += self._ln_keep
            self.x_count[box_id] += 1
            delta = self.lam * (math.exp(self.log_pot[box_id]) - old)
            self.eff[self._member_arr[box_id].view()] += delta

    def haunt(self, v: int, extras: Iterable[int] = ()) -> list[int]:
        """Ghost haunts the proposed vertex plus any extra free vertices.

        Haunted vertices leave play without touching any score. Returns the
        effective newly haunted set (already-haunted extras are dropped).
        """
        self._require_phase(Phase.MAKER_MOVE)
        if self.status[v] != FREE:
            raise ProtocolViolation(f"haunt of non-free vertex {v}")
        applied = [v]
        self.status[v] = HAUNTED
        self.eff[v] = -np.inf
        self.free_count -= 1
        self.z_size += 1
        for w in extras:
            st = int(self.status[w])
            if st in (MAKER, BREAKER):
                raise ProtocolViolation(f"ghost cannot haunt claimed vertex {w}")
            if st == HAUNTED or w == v:
                continue
            self.status[w] = HAUNTED
            self.eff[w] = -np.inf
            self.free_count -= 1
            self.z_size += 1
            applied.append(w)
        return applied

    def breaker_claim(self, vertices: Sequence[int]) -> None:
        """Breaker claims up to b free vertices; closes the round."""
        self._require_phase(Phase.BREAKER_MOVE)
        vs = list(vertices)
        if len(vs) > self.cfg.b:
            raise ProtocolViolation(f"breaker claimed {len(vs)} > b = {self.cfg.b}")
        if len(set(vs)) != len(vs):
            raise ProtocolViolation("breaker claimed a vertex twice")
        for v in vs:
            if self.status[v] != FREE:
                raise ProtocolViolation(f"breaker claim of non-free vertex {v}")
        for v in vs:
            self.status[v] = BREAKER
            self.eff[v] = -np.inf
            self.free_count -= 1
            self.y_size += 1
            for box_id in self.vertex_boxes[v]:
                old = math.exp(self.log_pot[box_id])
                self.log_pot[box_id] += self._ln_boost
                self.y_count[box_id] += 1
                delta = self.lam * (math.exp(self.log_pot[box_id]) - old)
                self.eff[self._member_arr[box_id].view()] += delta
        self.round_no += 1
        self.claims_this_round = 0
        self.phase = Phase.GHOST_GROW

    # -- reporting -------------------------------------------------------

    def fair_share_deficits(self) -> np.ndarray:
        """Per-box m*c/(m+b) - x - ell; Maker is winning iff all <= 1e-9."""
        c = self.x_count + self.y_count
        share = self.cfg.m * c.astype(np.float64) / (self.cfg.m + self.cfg.b)
        return share - self.x_count - self.cfg.ell

    def max_deficit(self) -> float:
        return float(self.fair_share_deficits().max())

    def total_log_potential(self) -> float:
        shift = float(self.log_pot.max())
        return shift + math.log(float(np.exp(self.log_pot - shift).sum()))

    def total_potential(self) -> float:
        return math.exp(self.total_log_potential())

    def recount(self) -> dict[str, np.ndarray]:
        """Counters rebuilt from the membership sets and the status array."""
        x = np.zeros(self.cfg.e, dtype=np.int64)
        y = np.zeros(self.cfg.e, dtype=np.int64)
        size = np.zeros(self.cfg.e, dtype=np.int64)
        for box_id, mem in enumerate(self.members):
            size[box_id] = len(mem)
            for v in mem:
                st = int(self.status[v])
                if st == MAKER:
                    x[box_id] += 1
                elif st == BREAKER:
                    y[box_id] += 1
        return {"x_count": x, "y_count": y, "box_size": size}

    def recomputed_total_log_potential(self) -> float:
        """Total score from a from-scratch recount, bypassing all caches."""
        fresh = self.recount()
        log_pot = fresh["x_count"] * self._ln_keep + fresh["y_count"] * self._ln_boost
        shift = float(log_pot.max())
        return shift + math.log(float(np.exp(log_pot - shift).sum()))

    def counts_consistent(self) -> bool:
        fresh = self.recount()
        return (
            np.array_equal(fresh["x_count"], self.x_count)
            and np.array_equal(fresh["y_count"], self.y_count)
            and np.array_equal(fresh["box_size"], self.box_size)
        )

    def snapshot_boxes(self) -> list[list[int]]:
        return [sorted(mem) for mem in self.members]


# -- policies for standalone games ---------------------------------------


class NullGhost:
    """Never grows a box, never haunts a proposal."""

    def grow(self, state: BoxGameState) -> dict[int, list[int]]:
        return {}

    def decide(self, state: BoxGameState, proposal: int):
        return None


class AlwaysHauntGhost:
    """Haunts every proposal; Maker never claims anything."""

    def grow(self, state: BoxGameState) -> dict[int, list[int]]:
        return {}

    def decide(self, state: BoxGameState, proposal: int):
        return []


class RandomGhost:
    """Seeded legal ghost: sporadic box growth and probabilistic haunting."""

    def __init__(self, seed: int, haunt_prob: float = 0.3, grow_prob: float = 0.5,
                 max_new: int = 3, extra_prob: float = 0.1):
        self.seed = seed
        self.haunt_prob = haunt_prob
        self.grow_prob = grow_prob
        self.max_new = max_new
        self.extra_prob = extra_prob

    def grow(self, state: BoxGameState) -> dict[int, list[int]]:
        rng = np.random.default_rng([self.seed, state.round_no, 11])
        if rng.random() >= self.grow_prob:
            return {}
        free = state.free_vertices()
        if free.size == 0:
            return {}
        adds: dict[int, list[int]] = {}
        for box_id in np.unique(rng.integers(0, state.cfg.e, size=3)):
            room = int(state.cfg.M - state.box_size[box_id])
            if room <= 0:
                continue
            want = int(rng.integers(0, min(self.max_new, room) + 1))
            if want == 0:
                continue
            picks = rng.choice(free, size=min(want, free.size), replace=False)
            new = sorted(
                int(v) for v in set(picks.tolist()) if v not in state.members[box_id]
            )
            if new:
                adds[int(box_id)] = new
        return adds

    def decide(self, state: BoxGameState, proposal: int):
        rng = np.random.default_rng([self.seed, state.round_no, 13, proposal])
        if rng.random() >= self.haunt_prob:
            return None
        extras: list[int] = []
        if rng.random() < self.extra_prob:
            free = [int(v) for v in state.free_vertices() if v != proposal]
            if free:
                extras = [int(rng.choice(free))]
        return extras


class NullBoxBreaker:
    """Claims nothing; pair with b = 0 configs."""

    def choose(self, state: BoxGameState) -> list[int]:
        return []


class RandomBoxBreaker:
    """Claims min(b, free) uniformly random free vertices, seeded per round."""

    def __init__(self, seed: int):
        self.seed = seed

    def choose(self, state: BoxGameState) -> list[int]:
        free = state.free_vertices()
        k = min(state.cfg.b, free.size)
        if k == 0:
            return []
        rng = np.random.default_rng([self.seed, state.round_no, 17])
        return [int(v) for v in rng.choice(free, size=k, replace=False)]


class ConcentrateBoxBreaker:
    """Pours all b claims into the currently highest-scoring boxes.

    Walks boxes in decreasing score order (ties to the lower id) taking their
    free vertices lowest-first, then tops up from the global free pool so the
    full quota is always used.
    """

    def choose(self, state: BoxGameState) -> list[int]:
        want = min(state.cfg.b, state.free_count)
        if want == 0:
            return []
        picks: list[int] = []
        taken: set[int] = set()
        order = np.lexsort((np.arange(state.cfg.e), -state.log_pot))
        for box_id in order:
            if len(picks) >= want:
                break
            for v in sorted(state.members[box_id]):
                if len(picks) >= want:
                    break
                if state.status[v] == FREE and v not in taken:
                    picks.append(int(v))
                    taken.add(int(v))
        if len(picks) < want:
            for v in state.free_vertices():
                if len(picks) >= want:
                    break
                if int(v) not in taken:
                    picks.append(int(v))
                    taken.add(int(v))
        return picks


def _assert_consistent(state: BoxGameState) -> None:
    if not state.counts_consistent():
        raise InvariantViolation("box counters diverged from a full recount")
    total = state.total_log_potential()
    fresh = state.recomputed_total_log_potential()
    if abs(total - fresh) > 1e-9 * max(1.0, abs(fresh)):
        raise InvariantViolation(
            f"incremental log-potential {total} != recomputed {fresh}"
        )


def run_box_game(
    cfg: BoxGameConfig,
    initial_boxes: Sequence[Iterable[int]],
    ghost,
    breaker,
    check_consistency: bool = False,
) -> Transcript:
    """Play one full box game with Maker on the potential strategy.

    Ghost and Breaker are pluggable policies (grow/decide and choose). The
    returned transcript replays to the exact final state; it also carries the
    final state on `.final_state` for direct inspection.
    """
    from . import __version__

    params = derive_parameters(cfg)
    state = BoxGameState(cfg, initial_boxes, params=params)
    header = {
        "kind": "boxgame",
        "maker": "potential",
        "m": cfg.m,
        "b": cfg.b,
        "vertex_count": cfg.vertex_count,
        "e": cfg.e,
        "M": cfg.M,
        "ell": cfg.ell,
        "lam": params.lam,
        "tau": params.tau,
        "ell_min": params.ell_min,
        "guaranteed": params.preconditions_ok,
        "degenerate": params.degenerate,
        "initial_boxes": state.snapshot_boxes(),
        "version": __version__,
    }
    t = Transcript(header)
    max_deficit = state.max_deficit()
    while not state.finished:
        round_no = state.round_no
        adds = ghost.grow(state)
        state.ghost_grow(adds)
        t.append(
            {
                "t": "GG",
                "k": round_no,
                "adds": [[int(b), [int(v) for v in adds[b]]] for b in sorted(adds)],
            }
        )
        while state.claims_this_round < cfg.m and not state.finished:
            v = state.select_maker_vertex()
            decision = ghost.decide(state, v)
            if decision is None:
                state.resolve_maker_proposal(("allow", None))
                t.append({"t": "MK", "k": round_no, "v": int(v)})
            else:
                applied = state.haunt(v, [int(w) for w in decision])
                state.pending_proposal = None
                t.append({"t": "GH", "k": round_no, "v": int(v), "extra": applied[1:]})
            if check_consistency:
                _assert_consistent(state)
        state.end_maker_phase()
        if state.finished:
            break
        picks = [int(v) for v in breaker.choose(state)]
        expected = min(cfg.b, state.free_count)
        if len(picks) != expected:
            raise ProtocolViolation(
                f"breaker policy returned {len(picks)} claims, expected {expected}"
            )
        state.breaker_claim(picks)
        t.append({"t": "BK", "k": round_no, "vs": picks})
        max_deficit = max(max_deficit, state.max_deficit())
        if check_consistency:
            _assert_consistent(state)
    max_deficit = max(max_deficit, state.max_deficit())
    t.header["summary"] = {
        "rounds": state.round_no,
        "max_deficit": max_deficit,
        "claims": {"maker": state.x_size, "breaker": state.y_size, "haunted": state.z_size},
    }
    t.final_state = state
    return t


def replay_box_transcript(transcript: Transcript) -> BoxGameState:
    """Rebuild the final state by applying the recorded events in order."""
    h = transcript.header
    cfg = BoxGameConfig(
        m=h["m"], b=h["b"], vertex_count=h["vertex_count"], e=h["e"], M=h["M"], ell=h["ell"]
    )
    state = BoxGameState(cfg, h["initial_boxes"], strict_phase=False)
    for ev in transcript.events:
        tag = ev["t"]
        if tag == "GG":
            state.ghost_grow({box: verts for box, verts in ev["adds"]})
        elif tag == "MK":
            state.allow_claim(ev["v"])
        elif tag == "GH":
            state.haunt(ev["v"], ev.get("extra", ()))
        elif tag == "BK":
            state.breaker_claim(ev["vs"])
        else:
            raise ProtocolViolation(f"unknown event tag {tag!r}")
    return state
