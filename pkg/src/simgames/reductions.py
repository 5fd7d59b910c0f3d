"""Hardness reductions into two-tokens games: boolean products and MSBMM verification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import PreconditionError, canonical_potential
from .matrices import as_bool, as_num
from .twotokens import Digraph, TwoTokensGame, materialize_2trg
from .waksman import PermGadget, PermNetwork, build_network, guard_set, maximal_paths, to_gadget

# boolean products


@dataclass(frozen=True, eq=False)
class BmmInstance:
    game: TwoTokensGame
    start: np.ndarray  # start[i, j] = index of <0, x_i, z_j>

    def product_from(self, win0: np.ndarray) -> np.ndarray:
        return np.asarray(win0)[self.start]


def bmm_to_2trg(b1, b2) -> BmmInstance:
    """Alice picks a B1-witness k with one move; Bob is stuck and loses iff B2[k, j]."""
    b1, b2 = as_bool(b1), as_bool(b2)
    if b1.shape[1] != b2.shape[0]:
        raise ValueError(f"inner dimensions disagree: {b1.shape} x {b2.shape}")
    r, inner = b1.shape
    c = b2.shape[1]
    n0 = r + inner
    i, k = np.nonzero(b1)
    g0 = Digraph(n0, np.stack([i, r + k], axis=1))
    g1 = Digraph(c)
    final0 = np.ones((n0, c), dtype=bool)
    final1 = np.ones((c, n0), dtype=bool)
    final1[:, r:] = ~b2.T
    t = TwoTokensGame(g0, g1, final0, final1)
    start = np.arange(r)[:, None] * c + np.arange(c)[None, :]
    return BmmInstance(t, start)


def bmm_via_game(b1, b2) -> np.ndarray:
    inst = bmm_to_2trg(b1, b2)
    win0 = np.isfinite(canonical_potential(materialize_2trg(inst.game), 0))
    return inst.product_from(win0)


# MSBMM verification


def sort_permutation(a_row, c_row) -> np.ndarray:
    """0-based ranks of the ``2m`` values ``a_row ++ c_row``, with A ahead of equal C values."""
    a = np.asarray(a_row, dtype=np.float64).reshape(-1)
    c = np.asarray(c_row, dtype=np.float64).reshape(-1)
    if np.unique(a).size != a.size:
        raise PreconditionError("numeric row has repeated entries")
    vals = np.concatenate([a, c])
    group = np.concatenate([np.zeros(a.size), np.ones(c.size)])
    order = np.lexsort((np.arange(vals.size), group, vals))
    pi = np.empty(vals.size, dtype=np.int64)
    pi[order] = np.arange(vals.size)
    return pi


@dataclass(frozen=True)
class PrecheckFailure:
    """``C[i, j]`` is not the value of any B-witness in row ``i``."""

    i: int
    j: int
    reason: str


@dataclass(frozen=True, eq=False)
class MsbmmGameInstance:
    game: TwoTokensGame
    m: int
    size: int  # padded layer size N, a power of two >= 2m
    network: PermNetwork
    gadget: PermGadget
    perms: np.ndarray  # perms[i] = pi_i extended to N, identity on pads
    guards: tuple  # guards[i] = K^Y(pi_i) u K^Z(pi_i^-1) as V1 vertices
    edge_kinds: dict

    def layer(self, name: str, ell: int) -> int:
        return _layer(self.size, name, ell)

    def start_config(self, i: int, k: int) -> int:
        return self.game.encode(0, i, self.layer("x", k))

    def gadget_vertex(self, which: str, v):
        """V1 vertex of gadget vertex ``v`` in copy ``which`` ('Y' or 'Z')."""
        return _gadget_vertex(self.size, self.gadget.graph.n - 2 * self.size, which, v)


def _layer(N: int, name: str, ell):
    return "xyzw".index(name) * N + ell


def _gadget_vertex(N: int, internal: int, which: str, v):
    # inlets and outlets land on two consecutive layers, internals after all layers
    v = np.asarray(v, dtype=np.int64)
    lo, hi = ("x", "y") if which == "Y" else ("z", "w")
    base = 4 * N + (internal if which == "Z" else 0)
    out = np.where(v < N, _layer(N, lo, v), np.where(v < 2 * N, _layer(N, hi, v - N), base + v - 2 * N))
    return int(out) if out.ndim == 0 else out


def _precheck(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> PrecheckFailure | None:
    n, m = A.shape
    for i in range(n):
        for j in range(m):
            if np.isneginf(C[i, j]) and not B[:, j].any():
                continue
            hits = np.flatnonzero(A[i] == C[i, j])
            if hits.size == 0:
                return PrecheckFailure(i, j, "value absent from the row")
            if not B[hits[0], j]:
                return PrecheckFailure(i, j, "matching entry has no witness")
    return None


def msbmm_verify_to_2trg(A, B, C) -> PrecheckFailure | MsbmmGameInstance:
    A, B, C = as_num(A), as_bool(B), as_num(C)
    n, m = A.shape
    if B.shape != (m, m) or C.shape != (n, m):
        raise ValueError(f"shapes must be n x m, m x m, n x m; got {A.shape}, {B.shape}, {C.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("numeric factor must be finite")
    for row in A:
        if np.unique(row).size != m:
            raise PreconditionError("numeric factor rows must have distinct entries")
    fail = _precheck(A, B, C)
    if fail is not None:
        return fail

    N = 2
    while N < 2 * m:
        N *= 2
    net = build_network(N)
    gad = to_gadget(net)
    internal = gad.graph.n - 2 * N
    ge = gad.graph.edges
    comp = [(_layer(N, "y", a), _layer(N, "z", b)) for a in range(2 * m) for b in range(a + 1)]
    ret = [(_layer(N, "w", m + j), _layer(N, "x", k)) for k, j in zip(*np.nonzero(B))]
    inst_edges = {
        "gadget_y": _gadget_vertex(N, internal, "Y", ge).reshape(-1, 2),
        "comparison": np.asarray(comp, dtype=np.int64).reshape(-1, 2),
        "gadget_z": _gadget_vertex(N, internal, "Z", ge).reshape(-1, 2),
        "return": np.asarray(ret, dtype=np.int64).reshape(-1, 2),
    }
    n1 = 4 * N + 2 * internal
    g1 = Digraph(n1, np.concatenate(list(inst_edges.values())))
    g0 = Digraph(n, np.stack([np.arange(n), np.arange(n)], axis=1))

    perms = np.tile(np.arange(N), (n, 1))
    guards = []
    final0 = np.ones((n, n1), dtype=bool)
    for i in range(n):
        perms[i, :2 * m] = sort_permutation(A[i], C[i])
        inv = np.argsort(perms[i])
        ky = _gadget_vertex(N, internal, "Y", sorted(guard_set(gad, net, perms[i]))).tolist()
        kz = _gadget_vertex(N, internal, "Z", sorted(guard_set(gad, net, inv))).tolist()
        guards.append(frozenset(ky + kz))
        final0[i, ky + kz] = False
    t = TwoTokensGame(g0, g1, final0, np.zeros((n1, n), dtype=bool))
    return MsbmmGameInstance(t, m, N, net, gad, perms, tuple(guards), inst_edges)


def msbmm_verify_via_game(A, B, C, solver=None) -> bool:
    """Decide ``C == A (max) B`` by asking whether Alice wins from every config.

    ``solver`` maps a ``TwoTokensGame`` to the potential of player 0; it
    defaults to the linear-time solver on the materialized game.
    """
    inst = msbmm_verify_to_2trg(A, B, C)
    if isinstance(inst, PrecheckFailure):
        return False
    r0 = (solver or _linear_r0)(inst.game)
    return bool(np.all(np.isfinite(r0)))


def _linear_r0(t: TwoTokensGame) -> np.ndarray:
    return canonical_potential(materialize_2trg(t), 0)


def invalid_triangles(A, B, C) -> list[tuple[int, int, int]]:
    """Triples ``(i, j, k)`` with ``A[i,k] > C[i,j]`` and ``B[k,j]``."""
    A, B, C = as_num(A), as_bool(B), as_num(C)
    i, j, k = np.nonzero((A[:, None, :] > C[:, :, None]) & B.T[None, :, :])
    return list(zip(i.tolist(), j.tolist(), k.tolist()))


def row_potential(inst: MsbmmGameInstance, i: int) -> np.ndarray:
    """Potential on Bob's vertices for row ``i``; ``nan`` on deleted guards.

    Every vertex of the guard-free path starting at ``x_l`` (and at
    ``z_{pi(l)}`` in the second gadget) gets the value ``pi_i(l)``; the value
    on the second gadget follows from the inlet index directly.
    """
    n1 = inst.game.n1
    p = np.full(n1, np.nan)
    pi = inst.perms[i]
    gone = inst.guards[i]
    for which, perm_value in (("Y", lambda ell: pi[ell]), ("Z", lambda ell: ell)):
        removed = [v for v in range(inst.gadget.graph.n)
                   if inst.gadget_vertex(which, v) in gone]
        for path in maximal_paths(inst.gadget.graph, removed, starts=range(inst.size)):
            for v in path:
                p[inst.gadget_vertex(which, v)] = perm_value(path[0])
    return p


def check_row_potential(inst: MsbmmGameInstance, i: int, p=None) -> list[tuple[str, int, int]]:
    """Bob moves that avoid the guards of row ``i`` and break the potential's monotonicity.

    Gadget moves must keep ``p``, comparison moves must not raise it, and
    return moves must lower it.  An empty list means no violation.
    """
    p = row_potential(inst, i) if p is None else p
    gone = inst.guards[i]
    bad = []
    for kind, edges in inst.edge_kinds.items():
        for a, b in edges.tolist():
            if a in gone or b in gone:
                continue
            ok = {"gadget_y": p[b] == p[a], "gadget_z": p[b] == p[a],
                  "comparison": p[b] <= p[a], "return": p[b] < p[a]}[kind]
            if not ok:
                bad.append((kind, a, b))
    return bad
