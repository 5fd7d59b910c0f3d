import numpy as np
import pytest
from hypothesis import given, strategies as st

from simgames.dnc import (DncStats, Dicut, dicut_identities_check, embed, lift_star_by_definition,
                          side_mask, solve_acyclic_dnc, topo_dicut)
from simgames.games import PreconditionError, canonical_potential, induced_subgame, solve_reachability
from simgames.generators import InstanceConfig, random_2trg, random_digraph, random_kripke
from simgames.twotokens import Digraph, TwoTokensGame, materialize_2trg, simulation_preorder


def test_topo_dicut_examples():
    path = Digraph(4, [(0, 1), (1, 2), (2, 3)])
    cut = topo_dicut(path)
    assert set(cut.tail) == {0, 1} and set(cut.head) == {2, 3}
    assert topo_dicut(Digraph(1)) == Dicut((0,), ())
    with pytest.raises(PreconditionError):
        topo_dicut(Digraph(2, [(0, 1), (1, 0)]))


@given(st.integers(0, 30), st.floats(0, 0.6), st.integers(0, 2 ** 32 - 1))
def test_topo_dicut_properties(n, p, seed):
    g = random_digraph(np.random.default_rng(seed), n, p, acyclic=True)
    cut = topo_dicut(g)
    assert cut.is_valid(g)
    assert max(len(cut.tail), len(cut.head)) <= -(-n // 2)


def test_edgeless_matches_linear_solver():
    t = TwoTokensGame(Digraph(20), Digraph(18), np.eye(20, 18, dtype=bool),
                      np.zeros((18, 20), dtype=bool))
    res = solve_reachability(materialize_2trg(t))
    for P in (0, 1):
        assert np.array_equal(solve_acyclic_dnc(t, P), res.surv(P))


def test_rejects_cyclic():
    t = TwoTokensGame(Digraph(1, [(0, 0)]), Digraph(1), [[True]], [[True]])
    with pytest.raises(PreconditionError):
        solve_acyclic_dnc(t, 0)


def test_empty_config_space():
    t = TwoTokensGame(Digraph(0), Digraph(5), np.zeros((0, 5)), np.zeros((5, 0)))
    assert solve_acyclic_dnc(t, 1, base_threshold=1).size == 0


@given(st.integers(0, 24), st.integers(0, 24), st.integers(1, 17), st.sampled_from(
    ["naive", "bitpacked", "strassen_int"]), st.integers(0, 2 ** 32 - 1))
def test_dnc_matches_linear_solver(n0, n1, base, backend, seed):
    rng = np.random.default_rng(seed)
    t = random_2trg(rng, n0, n1, InstanceConfig(edge_prob=float(rng.uniform(0, 0.4)),
                                               acyclic=True))
    res = solve_reachability(materialize_2trg(t))
    stats = DncStats()
    for P in (0, 1):
        assert np.array_equal(solve_acyclic_dnc(t, P, backend=backend, base_threshold=base,
                                                stats=stats), res.surv(P))
    assert stats.max_depth <= stats.depth_bound(n0, n1)


def test_depth_bound_tight_recursion(rng):
    for n0, n1 in [(32, 32), (1, 32), (32, 1), (17, 5)]:
        t = random_2trg(rng, n0, n1, InstanceConfig(acyclic=True))
        stats = DncStats()
        solve_acyclic_dnc(t, 0, base_threshold=1, stats=stats)
        assert stats.base_cases > 0
        assert stats.max_depth <= stats.depth_bound(n0, n1)


def test_simulation_preorder_methods_agree(rng):
    for _ in range(20):
        K = random_kripke(rng, int(rng.integers(1, 25)), InstanceConfig(acyclic=True, labels=2))
        assert np.array_equal(simulation_preorder(K, "dnc"), simulation_preorder(K, "naive"))


def test_dicut_identities_trivial_sets(rng):
    t = random_2trg(rng, 6, 5, InstanceConfig(acyclic=True))
    cut = topo_dicut(t.g0)
    assert dicut_identities_check(t, cut, set())
    assert dicut_identities_check(t, cut, range(t.num_configs))


def test_dicut_identities_random(rng):
    for _ in range(200):
        t = random_2trg(rng, int(rng.integers(1, 7)), int(rng.integers(1, 6)),
                        InstanceConfig(acyclic=bool(rng.integers(0, 2))))
        if not t.g0.is_acyclic():
            t = TwoTokensGame(random_digraph(rng, t.n0, 0.3, acyclic=True), t.g1,
                              t.final0, t.final1)
        assert dicut_identities_check(t, topo_dicut(t.g0), rng.random(t.num_configs) < 0.5)


def test_dicut_split_reassembles_surviving_set(rng):
    # solve each side independently on induced sub-games, with boundary tags by definition
    for _ in range(100):
        t = random_2trg(rng, int(rng.integers(2, 8)), int(rng.integers(1, 7)),
                        InstanceConfig(acyclic=True))
        game = materialize_2trg(t)
        cut = topo_dicut(t.g0)
        head = side_mask(t, cut.head)
        for P in (0, 1):
            sub_h, idx_h = induced_subgame(game, head)
            s_head = np.zeros(game.n, dtype=bool)
            s_head[idx_h] = ~np.isfinite(canonical_potential(sub_h, 1 - P))
            star = lift_star_by_definition(game, P, s_head, ~head)
            sub_t, idx_t = induced_subgame(game, ~head, final=np.where(star, P, 1 - P))
            s_tail = np.zeros(game.n, dtype=bool)
            s_tail[idx_t] = ~np.isfinite(canonical_potential(sub_t, 1 - P))
            assert np.array_equal(s_head | s_tail, solve_reachability(game).surv(P))


def test_embed_places_sub_configs():
    t = TwoTokensGame(Digraph(3), Digraph(2), np.zeros((3, 2)), np.zeros((2, 3)))
    sub = np.ones(2 * 1 * 2, dtype=bool)
    out = embed(t, sub, [1])
    assert np.array_equal(out, side_mask(t, [1]))
