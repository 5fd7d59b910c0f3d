"""Lifting operators of a 2TRG as matrix products, and the certificates built on them.

All block matrices follow the layout of ``TwoTokensGame.split``: block ``Q``
holds the configs where ``Q`` holds the turn, shaped ``n_Q x n_{1-Q}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import INF, PreconditionError, as_mask, as_potential, canonical_potential
from .matrices import bmm, freivalds_verify, int_product, msbmm
from .twotokens import TwoTokensGame, join_blocks, materialize_2trg


def _final_blocks(t: TwoTokensGame, P: int) -> tuple[np.ndarray, np.ndarray]:
    """``F^P`` restricted to each turn block."""
    if P == 1:
        return t.final0, t.final1
    return ~t.final0, ~t.final1


def _check_player(P: int) -> int:
    if P not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {P!r}")
    return int(P)


def liftset_blocks(t: TwoTokensGame, P: int, U: tuple[np.ndarray, np.ndarray],
                   backend: str = "bitpacked") -> tuple[np.ndarray, np.ndarray]:
    P = _check_player(P)
    O = 1 - P
    out = [None, None]
    fin_p = _final_blocks(t, P)
    fin_o = _final_blocks(t, O)
    # P to move: win now, or some move u_i -> u_k lands in U at <O, v_j, u_k>
    reach = bmm(t.graph(P).adjacency(), U[O].T, backend=backend).to_dense()
    out[P] = fin_p[P] | reach
    # opponent to move, by de Morgan on LiftSet^O of the complement
    escape = bmm(t.graph(O).adjacency(), (~U[P]).T, backend=backend).to_dense()
    out[O] = ~(fin_o[O] | escape)
    return out[0], out[1]


def liftset_via_bmm(t: TwoTokensGame, P: int, U, backend: str = "bitpacked") -> np.ndarray:
    """``LiftSet^P(U)`` on the materialized game, using exactly two BMMs."""
    U = as_mask(t.num_configs, U)
    return join_blocks(*liftset_blocks(t, P, t.split(U), backend))


def lift_via_msbmm(t: TwoTokensGame, P: int, p) -> np.ndarray:
    """``Lift^P(p)`` on the materialized game, using exactly two MSBMMs.

    The ``1 +`` of the lifting operator is added after each product, so the
    potential enters the products unchanged.
    """
    P = _check_player(P)
    O = 1 - P
    p = as_potential(t.num_configs, p)
    blocks = t.split(p)
    fin_p = _final_blocks(t, P)
    out = [None, None]
    # block P [i, j]: min over E_P[i, k] of p(<O, v_j, u_k>) = blocks[O][j, k]
    best = msbmm(blocks[O], t.graph(P).adjacency().T, mode="min").T
    out[P] = np.where(fin_p[P], 0.0, best + 1)
    # block O [j, i]: max over E_O[j, k] of p(<P, u_i, v_k>) = blocks[P][i, k]
    worst = msbmm(blocks[P], t.graph(O).adjacency().T, mode="max").T
    out[O] = np.where(fin_p[O], np.maximum(0.0, worst + 1), INF)
    return join_blocks(out[0], out[1])


# acyclic certificates


@dataclass(frozen=True, eq=False)
class AcyclicCertificate:
    """Claimed surviving set of ``player`` plus the two integer products behind it.

    ``products[0]`` is ``E_P @ U_O^T`` and ``products[1]`` is
    ``E_O @ (not U_P)^T`` where ``U_Q`` is the claimed block of turn ``Q``.
    """

    player: int
    claimed: tuple[np.ndarray, np.ndarray]
    products: tuple[np.ndarray, np.ndarray]


def _require_semi_acyclic(t: TwoTokensGame) -> None:
    if not (t.g0.is_acyclic() or t.g1.is_acyclic()):
        raise PreconditionError("certificate needs at least one acyclic graph")


def product_factors(t: TwoTokensGame, P: int, blocks) -> list[tuple[np.ndarray, np.ndarray]]:
    """The two factor pairs whose integer products an acyclic certificate carries."""
    O = 1 - P
    return [
        (t.graph(P).adjacency().astype(np.int64), blocks[O].T.astype(np.int64)),
        (t.graph(O).adjacency().astype(np.int64), (~blocks[P]).T.astype(np.int64)),
    ]


def make_acyclic_certificate(t: TwoTokensGame, player: int = 1
                             ) -> tuple[np.ndarray, AcyclicCertificate]:
    P = _check_player(player)
    _require_semi_acyclic(t)
    claimed = ~np.isfinite(canonical_potential(materialize_2trg(t), 1 - P))
    blocks = tuple(b.copy() for b in t.split(claimed))
    products = tuple(int_product(a, b) for a, b in product_factors(t, P, blocks))
    return claimed, AcyclicCertificate(P, blocks, products)


def verify_acyclic_certificate(t: TwoTokensGame, claimed, cert: AcyclicCertificate,
                               mode: str = "freivalds", rounds: int = 30, seed=None) -> bool:
    """Accept iff the products are right and they make ``claimed`` a LiftSet fixpoint.

    In an acyclic game the fixpoint is unique, so acceptance means
    ``claimed`` is the surviving set (up to the Freivalds error in that mode).
    """
    _require_semi_acyclic(t)
    P = _check_player(cert.player)
    O = 1 - P
    claimed = as_mask(t.num_configs, claimed)
    blocks = t.split(claimed)
    for b, c in zip(blocks, cert.claimed):
        if np.shape(c) != b.shape:
            raise ValueError("certificate shape does not match the game")
    if not all(np.array_equal(b, c) for b, c in zip(blocks, cert.claimed)):
        return False
    factors = product_factors(t, P, blocks)
    for (a, b), c in zip(factors, cert.products):
        if np.shape(c) != (a.shape[0], b.shape[1]):
            raise ValueError("certificate product has the wrong shape")
        if mode == "freivalds":
            if not freivalds_verify(a, b, c, rounds=rounds, seed=seed):
                return False
        elif mode in ("deterministic", "det"):
            if not np.array_equal(int_product(a, b), c):
                return False
        else:
            raise ValueError(f"unknown verification mode {mode!r}")
    fin_p, fin_o = _final_blocks(t, P), _final_blocks(t, O)
    lifted = [None, None]
    lifted[P] = fin_p[P] | (np.asarray(cert.products[0]) > 0)
    lifted[O] = ~(fin_o[O] | (np.asarray(cert.products[1]) > 0))
    return all(np.array_equal(lifted[q], blocks[q]) for q in (0, 1))


# cyclic certificates


@dataclass(frozen=True, eq=False)
class CyclicCertificate:
    """Canonical potential of ``player`` in block form."""

    player: int
    potentials: tuple[np.ndarray, np.ndarray]

    def flat(self) -> np.ndarray:
        return join_blocks(*self.potentials).astype(np.float64)


def make_cyclic_certificate(t: TwoTokensGame, player: int = 0) -> CyclicCertificate:
    P = _check_player(player)
    r = canonical_potential(materialize_2trg(t), P)
    return CyclicCertificate(P, tuple(b.copy() for b in t.split(r)))


def verify_cyclic_certificate(t: TwoTokensGame, claimed_win, cert: CyclicCertificate) -> bool:
    """Accept iff the potential is the Lift fixpoint and ``claimed_win`` is its support."""
    P = _check_player(cert.player)
    for b, c in zip(t.split(np.zeros(t.num_configs)), cert.potentials):
        if np.shape(c) != b.shape:
            raise ValueError("certificate shape does not match the game")
    p = cert.flat()
    finite = np.isfinite(p)
    vals = p[finite]
    if np.any(np.isneginf(p)) or np.any(vals < 0) or np.any(vals != np.round(vals)):
        return False
    if np.any(vals >= t.num_configs):
        return False
    claimed_win = as_mask(t.num_configs, claimed_win)
    if not np.array_equal(claimed_win, finite):
        return False
    return bool(np.array_equal(lift_via_msbmm(t, P, p), p))
