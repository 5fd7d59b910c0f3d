"""Explicit reachability games.

Configurations are dense indices ``0..n-1``.  A config is owned by player 0
(Alice) or player 1 (Bob), and carries a final tag: a play that is stopped on
a config tagged ``P`` is won by ``P``.  Infinite plays are surviving for both.

Potentials are float64 arrays whose finite entries are non-negative integers
and whose ``np.inf`` entries stand for the infinite potential.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

INF = np.inf
STOP = -1


class PreconditionError(ValueError):
    """An input violates a documented precondition of the operation."""


def _csr(keys: np.ndarray, vals: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=ptr[1:])
    return ptr, vals[order]


@dataclass(frozen=True, eq=False)
class GameGraph:
    """Configuration graph with an owner tag per config.

    ``src``/``dst`` hold the moves in insertion order; forward and reverse
    CSR adjacency is derived once at construction.
    """

    owner: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    succ_ptr: np.ndarray = field(init=False, repr=False)
    succ: np.ndarray = field(init=False, repr=False)
    pred_ptr: np.ndarray = field(init=False, repr=False)
    pred: np.ndarray = field(init=False, repr=False)
    outdeg: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        owner = np.asarray(self.owner, dtype=np.uint8).reshape(-1)
        src = np.asarray(self.src, dtype=np.int64).reshape(-1)
        dst = np.asarray(self.dst, dtype=np.int64).reshape(-1)
        n = owner.size
        if src.shape != dst.shape:
            raise ValueError("move endpoint arrays differ in length")
        if owner.size and owner.max() > 1:
            raise ValueError("owner tags must be 0 or 1")
        if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise ValueError("move endpoint out of range")
        # sort moves by source so that forward CSR and src/dst agree
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        succ_ptr, succ = _csr(src, dst, n)
        pred_ptr, pred = _csr(dst, src, n)
        for name, val in [("owner", owner), ("src", src), ("dst", dst),
                          ("succ_ptr", succ_ptr), ("succ", succ),
                          ("pred_ptr", pred_ptr), ("pred", pred),
                          ("outdeg", np.diff(succ_ptr))]:
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @classmethod
    def from_moves(cls, owner, moves: Iterable[tuple[int, int]]) -> GameGraph:
        arr = np.asarray(list(moves), dtype=np.int64).reshape(-1, 2)
        return cls(owner, arr[:, 0], arr[:, 1])

    @property
    def n(self) -> int:
        return self.owner.size

    @property
    def m(self) -> int:
        return self.src.size

    def successors(self, s: int) -> np.ndarray:
        return self.succ[self.succ_ptr[s]:self.succ_ptr[s + 1]]

    def moves(self) -> Iterator[tuple[int, int]]:
        return zip(self.src.tolist(), self.dst.tolist())


@dataclass(frozen=True, eq=False)
class ReachabilityGame:
    graph: GameGraph
    final: np.ndarray

    def __post_init__(self):
        final = np.asarray(self.final, dtype=np.uint8).reshape(-1)
        if final.size != self.graph.n:
            raise ValueError("final tags must cover every configuration")
        if final.size and final.max() > 1:
            raise ValueError("final tags must be 0 or 1")
        final.setflags(write=False)
        object.__setattr__(self, "final", final)

    @classmethod
    def build(cls, owner, final, moves=()) -> ReachabilityGame:
        return cls(GameGraph.from_moves(owner, moves), final)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def owner(self) -> np.ndarray:
        return self.graph.owner


@dataclass(frozen=True)
class SolveResult:
    r0: np.ndarray
    r1: np.ndarray

    @property
    def win0(self) -> np.ndarray:
        return np.isfinite(self.r0)

    @property
    def win1(self) -> np.ndarray:
        return np.isfinite(self.r1)

    @property
    def surv0(self) -> np.ndarray:
        return ~np.isfinite(self.r1)

    @property
    def surv1(self) -> np.ndarray:
        return ~np.isfinite(self.r0)

    def r(self, player: int) -> np.ndarray:
        return self.r0 if player == 0 else self.r1

    def win(self, player: int) -> np.ndarray:
        return np.isfinite(self.r(player))

    def surv(self, player: int) -> np.ndarray:
        return ~np.isfinite(self.r(1 - player))


@dataclass(frozen=True)
class Strategy:
    """Positional strategy: ``choice[c]`` is a successor of ``c`` or ``STOP``.

    Configs missing from ``choice`` stop.
    """

    player: int
    choice: dict

    def __call__(self, config: int) -> int:
        return self.choice.get(config, STOP)

    def validate(self, game: ReachabilityGame) -> None:
        for c, nxt in self.choice.items():
            if game.owner[c] != self.player:
                raise ValueError(f"config {c} is not owned by player {self.player}")
            if nxt != STOP and nxt not in set(game.graph.successors(c).tolist()):
                raise ValueError(f"({c}, {nxt}) is not a move")


@dataclass(frozen=True)
class Outcome:
    winner: int | None
    trace: list

    @property
    def ongoing(self) -> bool:
        return self.winner is None


def _check_player(P: int) -> int:
    if P not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {P!r}")
    return int(P)


def as_mask(n: int, U) -> np.ndarray:
    """Coerce a boolean mask or a collection of config indices to a mask."""
    if isinstance(U, np.ndarray) and U.dtype == bool:
        if U.shape != (n,):
            raise ValueError(f"mask has shape {U.shape}, expected ({n},)")
        return U
    idx = np.fromiter((int(i) for i in U), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError("config index out of range")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


def as_potential(n: int, p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (n,):
        raise ValueError(f"potential has shape {p.shape}, expected ({n},)")
    return p


def lift_set(game: ReachabilityGame, P: int, U) -> np.ndarray:
    """Configs from which ``P`` wins immediately or forces the next config into ``U``."""
    P = _check_player(P)
    g = game.graph
    U = as_mask(g.n, U)
    hits = np.bincount(g.src[U[g.dst]], minlength=g.n)
    in_final = game.final == P
    return np.where(g.owner == P, in_final | (hits > 0), in_final & (hits == g.outdeg))


def _segment_reduce(g: GameGraph, vals: np.ndarray, ufunc, empty: float) -> np.ndarray:
    out = np.full(g.n, empty)
    nonempty = g.outdeg > 0
    if vals.size:
        out[nonempty] = ufunc.reduceat(vals, g.succ_ptr[:-1][nonempty])
    return out


def lift(game: ReachabilityGame, P: int, p) -> np.ndarray:
    P = _check_player(P)
    g = game.graph
    p = as_potential(g.n, p)
    vals = p[g.succ]
    bottom = np.where(game.final == P, 0.0, INF)
    best = _segment_reduce(g, vals, np.minimum, INF) + 1
    worst = _segment_reduce(g, vals, np.maximum, -INF) + 1
    return np.where(g.owner == P, np.minimum(bottom, best), np.maximum(bottom, worst))


def is_closed(game: ReachabilityGame, P: int, U) -> bool:
    U = as_mask(game.n, U)
    return bool(np.all(~U | lift_set(game, P, U)))


def is_progress_measure(game: ReachabilityGame, P: int, p) -> bool:
    p = as_potential(game.n, p)
    return bool(np.all(p >= lift(game, P, p)))


def _attractor_levels(game: ReachabilityGame, P: int) -> np.ndarray:
    """Counter-based backward search computing the canonical fixpoint of Lift^P.

    Every config enters the queue at most once and every move is scanned at
    most once, so the cost is linear in configs plus moves.
    """
    g = game.graph
    n = g.n
    owner = g.owner.tolist()
    final = game.final.tolist()
    deg = g.outdeg.tolist()
    ptr = g.pred_ptr.tolist()
    pred = g.pred.tolist()
    r = [INF] * n
    count = [0] * n
    queue = deque()
    for s in range(n):
        if final[s] == P and (owner[s] == P or deg[s] == 0):
            r[s] = 0
            queue.append(s)
    popleft, push = queue.popleft, queue.append
    while queue:
        s = popleft()
        level = r[s] + 1
        for q in pred[ptr[s]:ptr[s + 1]]:
            if r[q] != INF:
                continue
            if owner[q] == P:
                r[q] = level
                push(q)
            elif final[q] == P:
                c = count[q] + 1
                count[q] = c
                if c == deg[q]:
                    r[q] = level
                    push(q)
    return np.asarray(r, dtype=np.float64)


def canonical_potential(game: ReachabilityGame, P: int) -> np.ndarray:
    """The unique fixpoint of Lift^P, by the linear-time counter algorithm."""
    return _attractor_levels(game, _check_player(P))


def solve_reachability(game: ReachabilityGame) -> SolveResult:
    """Canonical fixpoints ``r0``, ``r1`` in O(|V| + |E|) per player."""
    return SolveResult(_attractor_levels(game, 0), _attractor_levels(game, 1))


def value_iteration_oracle(game: ReachabilityGame, P: int) -> np.ndarray:
    """Reference fixpoint by repeated set lifting from the empty set."""
    P = _check_player(P)
    r = np.full(game.n, INF)
    W = np.zeros(game.n, dtype=bool)
    for k in range(game.n + 1):
        nxt = lift_set(game, P, W)
        new = nxt & ~W
        if not new.any():
            break
        r[new] = k
        W = nxt
    return r


def extract_strategy(game: ReachabilityGame, P: int, witness) -> Strategy:
    """Strategy for ``P`` from a progress measure (winning) or a closed set (surviving).

    A boolean mask or a Python set selects surviving mode; anything else is
    read as a potential.  Successor ties go to the lowest config index.
    """
    P = _check_player(P)
    g = game.graph
    owned = np.flatnonzero(g.owner == P).tolist()
    choice = {}
    if isinstance(witness, (set, frozenset)) or (
            isinstance(witness, np.ndarray) and witness.dtype == bool):
        U = as_mask(g.n, witness)
        if not is_closed(game, P, U):
            raise PreconditionError("witness set is not closed")
        for s in owned:
            choice[s] = STOP
            if U[s] and game.final[s] != P:
                choice[s] = int(min(t for t in g.successors(s).tolist() if U[t]))
        return Strategy(P, choice)
    p = as_potential(g.n, witness)
    if not is_progress_measure(game, P, p):
        raise PreconditionError("witness potential is not a progress measure")
    lifted = lift(game, P, p)
    for s in owned:
        choice[s] = STOP
        if p[s] == 0 or game.final[s] == P or not np.isfinite(p[s]):
            continue
        succ = g.successors(s).tolist()
        choice[s] = int(min(t for t in succ if p[t] < lifted[s]))
    return Strategy(P, choice)


def play(game: ReachabilityGame, start: int, s0: Strategy, s1: Strategy,
         max_steps: int) -> Outcome:
    """Run the unique play conforming to both strategies."""
    strategies = (s0, s1)
    owner = game.owner
    config = int(start)
    trace = [config]
    for step in range(max_steps + 1):
        nxt = strategies[owner[config]](config)
        if nxt == STOP:
            return Outcome(int(game.final[config]), trace)
        if step == max_steps:
            break
        config = int(nxt)
        trace.append(config)
    return Outcome(None, trace)


def all_strategies(game: ReachabilityGame, P: int) -> Iterator[Strategy]:
    """Every positional strategy of ``P``; exponential, meant for tiny games."""
    g = game.graph
    owned = np.flatnonzero(g.owner == P).tolist()
    options = [[STOP] + sorted(set(g.successors(s).tolist())) for s in owned]
    for combo in itertools.product(*options):
        yield Strategy(P, dict(zip(owned, combo)))


def induced_subgame(game: ReachabilityGame, keep, final=None
                    ) -> tuple[ReachabilityGame, np.ndarray]:
    """Sub-game on the configs in ``keep`` with moves leaving the set dropped.

    Returns the sub-game and the array of original indices of its configs.
    ``final`` optionally overrides the final tags (full-length array).
    """
    keep = as_mask(game.n, keep)
    idx = np.flatnonzero(keep)
    remap = np.full(game.n, -1, dtype=np.int64)
    remap[idx] = np.arange(idx.size)
    g = game.graph
    inside = keep[g.src] & keep[g.dst]
    tags = game.final if final is None else np.asarray(final, dtype=np.uint8)
    sub = ReachabilityGame(GameGraph(g.owner[idx], remap[g.src[inside]], remap[g.dst[inside]]),
                           tags[idx])
    return sub, idx
