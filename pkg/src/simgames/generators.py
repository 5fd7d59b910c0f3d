"""Random instances for tests, benchmarks and experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import ReachabilityGame
from .twotokens import Digraph, KripkeStructure, TwoTokensGame


@dataclass(frozen=True)
class InstanceConfig:
    """Knobs shared by the generators."""

    edge_prob: float = 0.3
    final_prob: float = 0.5
    acyclic: bool = False
    labels: int = 2


def random_game(rng: np.random.Generator, n: int, m: int | None = None,
                final_prob: float = 0.5) -> ReachabilityGame:
    m = int(rng.integers(0, 3 * n + 1)) if m is None else m
    owner = rng.integers(0, 2, n)
    final = (rng.random(n) < final_prob).astype(np.uint8)
    if n == 0:
        return ReachabilityGame.build(owner, final)
    moves = rng.integers(0, n, size=(m, 2))
    return ReachabilityGame.build(owner, final, moves.tolist())


def random_digraph(rng: np.random.Generator, n: int, p: float = 0.3,
                   acyclic: bool = False) -> Digraph:
    mask = rng.random((n, n)) < p
    if acyclic:
        # orient along a hidden random order so the order is not the index order
        mask = np.triu(mask, 1)
        perm = rng.permutation(n)
        u, v = np.nonzero(mask)
        return Digraph(n, np.stack([perm[u], perm[v]], axis=1))
    return Digraph(n, np.argwhere(mask))


def random_2trg(rng: np.random.Generator, n0: int, n1: int,
                cfg: InstanceConfig = InstanceConfig()) -> TwoTokensGame:
    return TwoTokensGame(
        random_digraph(rng, n0, cfg.edge_prob, cfg.acyclic),
        random_digraph(rng, n1, cfg.edge_prob, cfg.acyclic),
        rng.random((n0, n1)) < cfg.final_prob,
        rng.random((n1, n0)) < cfg.final_prob,
    )


def random_kripke(rng: np.random.Generator, n: int,
                  cfg: InstanceConfig = InstanceConfig()) -> KripkeStructure:
    return KripkeStructure(random_digraph(rng, n, cfg.edge_prob, cfg.acyclic),
                           rng.integers(0, cfg.labels, n))


def random_distinct_instance(rng: np.random.Generator, n: int, m: int, p: float = 0.5
                             ) -> tuple[np.ndarray, np.ndarray]:
    """``A`` with pairwise-distinct rows entries and a random boolean ``B``."""
    A = np.array([rng.permutation(4 * m)[:m] for _ in range(n)], dtype=np.float64)
    return A.reshape(n, m), rng.random((m, m)) < p
