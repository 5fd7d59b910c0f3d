"""Small randomized consistency sweep behind ``simgames selftest``."""

from __future__ import annotations

import numpy as np

from .bridge import (lift_via_msbmm, liftset_via_bmm, make_acyclic_certificate,
                     make_cyclic_certificate, verify_acyclic_certificate, verify_cyclic_certificate)
from .dnc import solve_acyclic_dnc
from .games import lift, lift_set, solve_reachability, value_iteration_oracle
from .generators import InstanceConfig, random_2trg, random_distinct_instance, random_game
from .matrices import bmm, msbmm
from .reductions import bmm_via_game, msbmm_verify_via_game
from .twotokens import materialize_2trg
from .waksman import build_network, realize, route


def run_selftest(seed: int = 0, trials: int = 20) -> list[str]:
    """Return a description of every failed check (empty when all pass)."""
    rng = np.random.default_rng(seed)
    fails = []
    for it in range(trials):
        g = random_game(rng, int(rng.integers(1, 30)))
        res = solve_reachability(g)
        for P in (0, 1):
            if not np.array_equal(res.r(P), value_iteration_oracle(g, P)):
                fails.append(f"solver/oracle trial {it} player {P}")
        t = random_2trg(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        mg = materialize_2trg(t)
        U = rng.random(t.num_configs) < 0.5
        p = np.where(rng.random(t.num_configs) < 0.3, np.inf, rng.integers(0, 4, t.num_configs))
        for P in (0, 1):
            if not np.array_equal(liftset_via_bmm(t, P, U), lift_set(mg, P, U)):
                fails.append(f"liftset bridge trial {it} player {P}")
            if not np.array_equal(lift_via_msbmm(t, P, p), lift(mg, P, p)):
                fails.append(f"lift bridge trial {it} player {P}")
        cert = make_cyclic_certificate(t, 0)
        if not verify_cyclic_certificate(t, solve_reachability(mg).win0, cert):
            fails.append(f"cyclic certificate trial {it}")
        ta = random_2trg(rng, int(rng.integers(1, 12)), int(rng.integers(1, 12)),
                         InstanceConfig(acyclic=True))
        claimed, acert = make_acyclic_certificate(ta)
        if not verify_acyclic_certificate(ta, claimed, acert, seed=seed):
            fails.append(f"acyclic certificate trial {it}")
        if not np.array_equal(solve_acyclic_dnc(ta, 1, base_threshold=2), claimed):
            fails.append(f"dnc trial {it}")
        b1, b2 = rng.random((4, 4)) < 0.4, rng.random((4, 4)) < 0.4
        if not np.array_equal(bmm_via_game(b1, b2), bmm(b1, b2).to_dense()):
            fails.append(f"bmm reduction trial {it}")
        A, B = random_distinct_instance(rng, 2, 3)
        if not msbmm_verify_via_game(A, B, msbmm(A, B, "max")):
            fails.append(f"msbmm reduction trial {it}")
    net = build_network(8)
    for _ in range(trials):
        pi = rng.permutation(8)
        if not np.array_equal(realize(net, route(net, pi)), pi):
            fails.append("waksman routing")
    return fails
