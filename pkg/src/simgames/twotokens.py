"""Two-tokens reachability games, Kripke structures and simulation games.

Configuration ``<P, u, v>`` (player ``P`` to move, own token on ``u`` in
``G_P``, opponent token on ``v`` in ``G_{1-P}``) has dense index
``P*n0*n1 + u*n_{1-P} + v``.  A config set over a 2TRG therefore splits into
two blocks: an ``n0 x n1`` matrix for Alice's turn and an ``n1 x n0`` matrix
for Bob's turn.

Final tags of a 2TRG are kept in that block shape: ``final0[u, v]`` is True
iff ``<0,u,v>`` is a final config of Bob (``F^1``), likewise ``final1``.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field

import numpy as np

from .games import (INF, PreconditionError, ReachabilityGame, SolveResult,
                    GameGraph, solve_reachability)


@dataclass(frozen=True, eq=False)
class Digraph:
    """Directed graph on ``0..n-1``; parallel edges are merged."""

    n: int
    edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        e = np.unique(e, axis=0) if e.size else np.zeros((0, 2), dtype=np.int64)
        e.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", e)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        a[self.edges[:, 0], self.edges[:, 1]] = True
        return a

    def successors(self) -> list[list[int]]:
        out = [[] for _ in range(self.n)]
        for u, v in self.edges.tolist():
            out[u].append(v)
        return out

    def topological_order(self) -> list[int]:
        """Topological order; raises ``PreconditionError`` on a cycle."""
        ts = graphlib.TopologicalSorter({v: () for v in range(self.n)})
        for u, v in self.edges.tolist():
            ts.add(v, u)
        try:
            return list(ts.static_order())
        except graphlib.CycleError as exc:
            raise PreconditionError("graph has a cycle") from exc

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except PreconditionError:
            return False
        return True

    def induced(self, vertices) -> Digraph:
        """Subgraph on ``vertices`` (in the given order), re-indexed densely."""
        vertices = np.asarray(vertices, dtype=np.int64)
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[vertices] = np.arange(vertices.size)
        e = remap[self.edges]
        return Digraph(vertices.size, e[(e >= 0).all(axis=1)])


@dataclass(frozen=True, eq=False)
class KripkeStructure:
    graph: Digraph
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if labels.size != self.graph.n:
            raise ValueError("every state needs a label")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True, eq=False)
class TwoTokensGame:
    g0: Digraph
    g1: Digraph
    final0: np.ndarray
    final1: np.ndarray

    def __post_init__(self):
        f0 = np.asarray(self.final0, dtype=bool).reshape(self.g0.n, self.g1.n)
        f1 = np.asarray(self.final1, dtype=bool).reshape(self.g1.n, self.g0.n)
        f0.setflags(write=False)
        f1.setflags(write=False)
        object.__setattr__(self, "final0", f0)
        object.__setattr__(self, "final1", f1)

    @property
    def n0(self) -> int:
        return self.g0.n

    @property
    def n1(self) -> int:
        return self.g1.n

    @property
    def num_configs(self) -> int:
        return 2 * self.n0 * self.n1

    def graph(self, P: int) -> Digraph:
        return self.g0 if P == 0 else self.g1

    def final(self, P: int) -> np.ndarray:
        """Final-tag block for the configs where ``P`` holds the turn."""
        return self.final0 if P == 0 else self.final1

    def final_mask(self, P: int) -> np.ndarray:
        """``F^P`` as a flat config mask."""
        tags = join_blocks(self.final0, self.final1)
        return tags if P == 1 else ~tags

    # config encoding

    def encode(self, P: int, u: int, v: int) -> int:
        n_other = self.n1 if P == 0 else self.n0
        return P * self.n0 * self.n1 + u * n_other + v

    def decode(self, index: int) -> tuple[int, int, int]:
        half = self.n0 * self.n1
        P, rest = divmod(int(index), half) if half else (0, 0)
        n_other = self.n1 if P == 0 else self.n0
        u, v = divmod(rest, n_other)
        return P, u, v

    def split(self, flat) -> tuple[np.ndarray, np.ndarray]:
        flat = np.asarray(flat)
        half = self.n0 * self.n1
        return (flat[:half].reshape(self.n0, self.n1),
                flat[half:].reshape(self.n1, self.n0))

    def dual(self) -> TwoTokensGame:
        """Same game with the players renamed: ``<P,u,v>`` becomes ``<1-P,u,v>``."""
        return TwoTokensGame(self.g1, self.g0, ~self.final1, ~self.final0)


def join_blocks(b0, b1) -> np.ndarray:
    return np.concatenate([np.asarray(b0).ravel(), np.asarray(b1).ravel()])


def swap_halves(t: TwoTokensGame, flat) -> np.ndarray:
    """Re-index a config array of ``t`` as one of ``t.dual()``."""
    b0, b1 = t.split(flat)
    return join_blocks(b1, b0)


def materialize_2trg(t: TwoTokensGame) -> ReachabilityGame:
    n0, n1 = t.n0, t.n1
    half = n0 * n1
    owner = np.repeat(np.array([0, 1], dtype=np.uint8), half)
    final = join_blocks(t.final0, t.final1).astype(np.uint8)
    e0, e1 = t.g0.edges, t.g1.edges
    v1 = np.arange(n1)
    v0 = np.arange(n0)
    # <0,u,v> -> <1,v,u'> for (u,u') in E0;  <1,v,u> -> <0,u,v'> for (v,v') in E1
    src0 = (e0[:, :1] * n1 + v1[None, :]).ravel()
    dst0 = (half + v1[None, :] * n0 + e0[:, 1:]).ravel()
    src1 = (half + e1[:, :1] * n0 + v0[None, :]).ravel()
    dst1 = (v0[None, :] * n1 + e1[:, 1:]).ravel()
    graph = GameGraph(owner, np.concatenate([src0, src1]), np.concatenate([dst0, dst1]))
    return ReachabilityGame(graph, final)


def simulation_game(K: KripkeStructure) -> TwoTokensGame:
    same = K.labels[:, None] == K.labels[None, :]
    return TwoTokensGame(K.graph, K.graph, same, np.zeros((K.n, K.n), dtype=bool))


def simulation_preorder(K: KripkeStructure, method: str = "naive",
                        backend: str = "bitpacked") -> np.ndarray:
    """``R[s, t]`` is True iff ``t`` simulates ``s``."""
    t = simulation_game(K)
    if method == "naive":
        surv1 = solve_reachability(materialize_2trg(t)).surv1
    elif method == "dnc":
        from .dnc import solve_acyclic_dnc
        if not K.graph.is_acyclic():
            raise PreconditionError("dnc method needs an acyclic structure")
        surv1 = solve_acyclic_dnc(t, 1, backend=backend)
    else:
        raise ValueError(f"unknown method {method!r}")
    return t.split(surv1)[0].copy()


def is_simulation_relation(K: KripkeStructure, R) -> bool:
    """Check label agreement and the transfer clause on every pair of ``R``."""
    R = np.asarray(R, dtype=bool)
    if R.shape != (K.n, K.n):
        raise ValueError("relation shape does not match the structure")
    if np.any(R & (K.labels[:, None] != K.labels[None, :])):
        return False
    A = K.graph.adjacency().astype(np.int64)
    # matched[s', t] : some t' with (t, t') in T and (s', t') in R
    matched = (R.astype(np.int64) @ A.T) > 0
    unmatched = A @ (~matched).astype(np.int64)
    return not np.any(R & (unmatched > 0))


@dataclass(frozen=True)
class SimulationReduction:
    """Kripke structure built from a 2TRG and the embedding of old configs."""

    kripke: KripkeStructure
    config_map: np.ndarray
    n0: int
    n1: int

    def state_of(self, side: str, vertex: int) -> int:
        offset = {"v0": 0, "v0*": self.n0, "v1": 2 * self.n0}[side]
        return offset + vertex


def reduce_2trg_to_simulation(t: TwoTokensGame) -> SimulationReduction:
    """Simulation game whose Bob-survival matches ``t`` on embedded configs.

    States are ``V0`` (0..n0-1), starred copies ``V0*`` (n0..2n0-1) and ``V1``
    (2n0..2n0+n1-1).  Starred states get labels ``1..n0``, the rest label 0.
    """
    n0, n1 = t.n0, t.n1
    n = 2 * n0 + n1
    star = n0 + np.arange(n0)
    base1 = 2 * n0
    labels = np.zeros(n, dtype=np.int64)
    labels[star] = 1 + np.arange(n0)
    bv, bu = np.nonzero(t.final1)       # <1,v,u> in F^1 -> (v, u)
    au, av = np.nonzero(t.final0)       # <0,u,v> in F^1 -> (v, u*)
    edges = np.concatenate([
        t.g0.edges,
        t.g1.edges + base1,
        np.stack([np.arange(n0), star], axis=1),
        np.stack([base1 + bv, bu], axis=1),
        np.stack([base1 + av, star[au]], axis=1),
    ]).reshape(-1, 2)
    K = KripkeStructure(Digraph(n, edges), labels)
    # inclusion f: <0,u,v> -> <0,u,2n0+v>,  <1,v,u> -> <1,2n0+v,u>
    u0, v0 = np.meshgrid(np.arange(n0), np.arange(n1), indexing="ij")
    part0 = u0 * n + (base1 + v0)
    v1, u1 = np.meshgrid(np.arange(n1), np.arange(n0), indexing="ij")
    part1 = n * n + (base1 + v1) * n + u1
    fmap = join_blocks(part0, part1).astype(np.int64)
    return SimulationReduction(K, fmap, n0, n1)


def simulation_witnesses(t: TwoTokensGame, solved: SolveResult,
                         reduction: SimulationReduction | None = None
                         ) -> tuple[np.ndarray, np.ndarray]:
    """Progress measure for Alice and closed set for Bob on the reduced game.

    ``solved`` must be the solution of ``materialize_2trg(t)``.  The potential
    certifies ``W^0`` of ``t`` is preserved, the closed set certifies ``S^1``.
    """
    red = reduction or reduce_2trg_to_simulation(t)
    K = red.kripke
    n0, n = t.n0, K.n
    labels = K.labels
    adj = K.graph.adjacency()
    has_moves = adj.any(axis=1)
    star = n0 + np.arange(n0)
    alice = lambda s, x: s * n + x             # noqa: E731
    bob = lambda x, s: n * n + x * n + s       # noqa: E731

    p = np.full(2 * n * n, INF)
    # Alice to move on mismatching labels: stops and wins
    mismatch = labels[:, None] != labels[None, :]
    p[:n * n] = np.where(mismatch.ravel(), 0.0, INF)
    for u in range(n0):
        # Bob on x with Alice on u*: every Bob move lands on a mismatch
        for x in range(n):
            if not adj[x, star[u]]:
                p[bob(x, star[u])] = min(p[bob(x, star[u])], 1.0 if has_moves[x] else 0.0)
        # Alice on u, Bob on an unstarred x that cannot follow to u*
        for x in range(n):
            if labels[x] == 0 and not adj[x, star[u]]:
                val = 2.0 if has_moves[x] else 1.0
                p[alice(u, x)] = min(p[alice(u, x)], val)
    emb = red.config_map
    p[emb] = np.minimum(p[emb], 2 * solved.r0 + 3)

    U = np.zeros(2 * n * n, dtype=bool)
    U[emb[solved.surv1]] = True
    au, av = np.nonzero(t.final0)
    U[bob(2 * n0 + av, star[au])] = True
    # copycat configs: equal tokens, or Bob one step behind along the same edge
    U[alice(np.arange(n), np.arange(n))] = True
    e = K.graph.edges
    U[bob(e[:, 0], e[:, 1])] = True
    return p, U
