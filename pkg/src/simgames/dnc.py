"""Divide-and-conquer solver for two-tokens games whose graphs are both acyclic.

Every frame computes the surviving set of player 0 (the owner of ``g0``) and
cuts ``g0`` along a topological order.  Sub-games are solved in the dual
frame, so the next level cuts the other graph.  In an acyclic game every
play is finite, so the surviving set of player 1 is the complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bridge import liftset_via_bmm
from .games import PreconditionError, as_mask, canonical_potential, induced_subgame, lift_set
from .twotokens import Digraph, TwoTokensGame, join_blocks, materialize_2trg, swap_halves

BASE_THRESHOLD = 16


@dataclass(frozen=True)
class Dicut:
    """Vertex partition with no edge from ``head`` into ``tail``."""

    tail: tuple[int, ...]
    head: tuple[int, ...]

    def is_valid(self, g: Digraph) -> bool:
        if sorted(self.tail + self.head) != list(range(g.n)):
            return False
        in_head = np.zeros(g.n, dtype=bool)
        in_head[list(self.head)] = True
        e = g.edges
        return not np.any(in_head[e[:, 0]] & ~in_head[e[:, 1]])


def topo_dicut(g: Digraph) -> Dicut:
    order = g.topological_order()
    cut = -(-g.n // 2)
    return Dicut(tuple(order[:cut]), tuple(order[cut:]))


@dataclass
class DncStats:
    """Recursion instrumentation filled in by ``solve_acyclic_dnc``."""

    max_depth: int = 0
    frames: int = 0
    base_cases: int = 0
    bridge_calls: int = 0
    sizes: list = field(default_factory=list)

    def depth_bound(self, n0: int, n1: int) -> int:
        return _clog(n0) + _clog(n1) + 1


def _clog(n: int) -> int:
    return math.ceil(math.log2(n)) if n > 1 else 0


def side_mask(t: TwoTokensGame, vertices) -> np.ndarray:
    """Configs whose player-0 token sits in ``vertices``."""
    on = np.zeros(t.n0, dtype=bool)
    on[list(vertices)] = True
    b0 = np.repeat(on[:, None], t.n1, axis=1)
    b1 = np.repeat(on[None, :], t.n1, axis=0)
    return join_blocks(b0, b1)


def restrict(t: TwoTokensGame, flat, vertices) -> np.ndarray:
    """Config array of ``t`` restricted to the sub-game on ``vertices`` of ``g0``."""
    b0, b1 = t.split(flat)
    vs = list(vertices)
    return join_blocks(b0[vs, :], b1[:, vs])


def embed(t: TwoTokensGame, sub_flat, vertices) -> np.ndarray:
    """Inverse of ``restrict`` for masks: zero outside the sub-game."""
    vs = list(vertices)
    sub = TwoTokensGame(t.g0.induced(vs), t.g1,
                        np.zeros((len(vs), t.n1), dtype=bool),
                        np.zeros((t.n1, len(vs)), dtype=bool))
    s0, s1 = sub.split(sub_flat)
    b0 = np.zeros((t.n0, t.n1), dtype=bool)
    b1 = np.zeros((t.n1, t.n0), dtype=bool)
    b0[vs, :] = s0
    b1[:, vs] = s1
    return join_blocks(b0, b1)


def sub_game(t: TwoTokensGame, vertices, tags=None) -> TwoTokensGame:
    """Sub-game on ``g0[vertices]``; ``tags`` optionally replaces the final tags."""
    vs = list(vertices)
    f0, f1 = t.split(join_blocks(t.final0, t.final1) if tags is None else tags)
    return TwoTokensGame(t.g0.induced(vs), t.g1, f0[vs, :], f1[:, vs])


def _surv0(t: TwoTokensGame, depth: int, base: int, backend: str, stats: DncStats) -> np.ndarray:
    stats.frames += 1
    stats.max_depth = max(stats.max_depth, depth)
    stats.sizes.append((t.n0, t.n1))
    if t.num_configs == 0:
        return np.zeros(0, dtype=bool)
    if max(t.n0, t.n1) <= base:
        stats.base_cases += 1
        return ~np.isfinite(canonical_potential(materialize_2trg(t), 1))
    if t.n0 <= 1:
        # nothing to cut on this side; look at the game from the other player
        d = t.dual()
        return swap_halves(d, ~_surv0(d, depth, base, backend, stats))
    cut = topo_dicut(t.g0)
    head = sub_game(t, cut.head)
    hd = head.dual()
    s_head = swap_halves(hd, ~_surv0(hd, depth + 1, base, backend, stats))
    s_head = embed(t, s_head, cut.head)
    # player-0 configs in the tail are owned by 0 and may move into the head;
    # player-1 configs keep the 0-token where it is, so they stay final-as-is
    tail_mask = side_mask(t, cut.tail)
    half = t.n0 * t.n1
    owned0 = np.arange(t.num_configs) < half
    stats.bridge_calls += 1
    f_star = liftset_via_bmm(t, 0, s_head | (tail_mask & owned0), backend=backend)
    tail = sub_game(t, cut.tail, tags=~f_star)
    td = tail.dual()
    s_tail = swap_halves(td, ~_surv0(td, depth + 1, base, backend, stats))
    return s_head | embed(t, s_tail, cut.tail)


def solve_acyclic_dnc(t: TwoTokensGame, P: int, backend: str = "bitpacked",
                      base_threshold: int = BASE_THRESHOLD,
                      stats: DncStats | None = None) -> np.ndarray:
    """Surviving set of ``P`` as a flat config mask."""
    if P not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {P!r}")
    if not (t.g0.is_acyclic() and t.g1.is_acyclic()):
        raise PreconditionError("divide and conquer needs both graphs acyclic")
    stats = DncStats() if stats is None else stats
    s0 = _surv0(t, 1, base_threshold, backend, stats)
    return s0 if P == 0 else ~s0


def lift_star_by_definition(game, P: int, s_head: np.ndarray, tail: np.ndarray) -> np.ndarray:
    """Boundary tags for the tail: which tail configs count as final for ``P``."""
    g = game.graph
    out = np.zeros(game.n, dtype=bool)
    for c in np.flatnonzero(tail).tolist():
        succ = [s for s in g.successors(c).tolist() if not tail[s]]
        won = game.final[c] == P
        if g.owner[c] == P:
            out[c] = won or any(s_head[s] for s in succ)
        else:
            out[c] = won and all(s_head[s] for s in succ)
    return out


def dicut_identities_check(t: TwoTokensGame, dicut: Dicut, U, P: int | None = None) -> bool:
    """Evaluate both restriction identities of a dicut on ``U`` with the plain game solver.

    Head side: lifting inside the head equals lifting in the full game cut
    down to the head.  Tail side: lifting inside the tail (with boundary tags
    computed move by move) equals lifting ``U_T`` plus the head's surviving
    set in the full game, cut down to the tail.
    """
    game = materialize_2trg(t)
    U = as_mask(game.n, U)
    head = side_mask(t, dicut.head)
    tail = ~head
    for Q in ((0, 1) if P is None else (P,)):
        sub_h, idx_h = induced_subgame(game, head)
        lhs = lift_set(sub_h, Q, U[idx_h])
        if not np.array_equal(lhs, lift_set(game, Q, U)[idx_h]):
            return False
        s_head = np.zeros(game.n, dtype=bool)
        s_head[idx_h] = ~np.isfinite(canonical_potential(sub_h, 1 - Q))
        star = lift_star_by_definition(game, Q, s_head, tail)
        tags = np.where(star, Q, 1 - Q).astype(np.uint8)
        sub_t, idx_t = induced_subgame(game, tail, final=tags)
        lhs = lift_set(sub_t, Q, (U & tail)[idx_t])
        rhs = lift_set(game, Q, (U & tail) | s_head)[idx_t]
        if not np.array_equal(lhs, rhs):
            return False
    return True
