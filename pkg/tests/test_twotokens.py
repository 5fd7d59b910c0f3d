import numpy as np
import pytest
from hypothesis import given, strategies as st

from simgames.games import PreconditionError, is_closed, is_progress_measure, solve_reachability
from simgames.generators import InstanceConfig, random_2trg, random_kripke
from simgames.twotokens import (Digraph, KripkeStructure, TwoTokensGame, is_simulation_relation,
                                materialize_2trg, reduce_2trg_to_simulation, simulation_game,
                                simulation_preorder, simulation_witnesses, swap_halves)

from oracles import classical_simulation, py_twotokens_moves


@st.composite
def two_tokens_games(draw, max_n=5):
    n0 = draw(st.integers(0, max_n))
    n1 = draw(st.integers(0, max_n))
    pairs = lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),  # noqa: E731
                               max_size=2 * n) if n else st.just([])
    g0 = Digraph(n0, draw(pairs(n0)))
    g1 = Digraph(n1, draw(pairs(n1)))
    f0 = np.array(draw(st.lists(st.booleans(), min_size=n0 * n1, max_size=n0 * n1)), dtype=bool)
    f1 = np.array(draw(st.lists(st.booleans(), min_size=n0 * n1, max_size=n0 * n1)), dtype=bool)
    return TwoTokensGame(g0, g1, f0.reshape(n0, n1), f1.reshape(n1, n0))


def self_loop_pair(final0=True, final1=True):
    return TwoTokensGame(Digraph(1, [(0, 0)]), Digraph(1), [[final0]], [[final1]])


@given(two_tokens_games())
def test_encoding_round_trip(t):
    for idx in range(t.num_configs):
        assert t.encode(*t.decode(idx)) == idx
    d = t.dual()
    flat = np.arange(t.num_configs)
    back = swap_halves(d, swap_halves(t, flat))
    assert np.array_equal(back, flat)


@given(two_tokens_games())
def test_materialize_matches_move_rule(t):
    g = materialize_2trg(t)
    assert g.n == 2 * t.n0 * t.n1
    assert sorted(g.graph.moves()) == sorted(py_twotokens_moves(t))
    assert g.m == t.n1 * t.g0.m + t.n0 * t.g1.m
    for idx in range(g.n):
        assert g.owner[idx] == t.decode(idx)[0]


def test_materialize_examples():
    t = TwoTokensGame(Digraph(1), Digraph(1), [[True]], [[True]])
    g = materialize_2trg(t)
    assert (g.n, g.m) == (2, 0)
    g = materialize_2trg(self_loop_pair())
    assert list(g.graph.moves()) == [(0, 1)]


def test_dual_swaps_players():
    t = self_loop_pair(final0=True, final1=False)
    d = t.dual()
    g, h = materialize_2trg(t), materialize_2trg(d)
    rt, rd = solve_reachability(g), solve_reachability(h)
    assert np.array_equal(swap_halves(t, rt.surv1), rd.surv0)


def test_simulation_game_tags():
    K = KripkeStructure(Digraph(1), [7])
    t = simulation_game(K)
    assert t.final0.tolist() == [[True]] and not t.final1.any()
    K = KripkeStructure(Digraph(3, [(0, 1), (1, 2)]), [0, 1, 0])
    t = simulation_game(K)
    assert np.array_equal(t.final0, K.labels[:, None] == K.labels[None, :])


def test_simulation_preorder_examples():
    K = KripkeStructure(Digraph(3), [4, 4, 4])
    assert simulation_preorder(K).all()
    K = KripkeStructure(Digraph(2, [(0, 1)]), [0, 0])
    assert simulation_preorder(K).tolist() == [[True, False], [True, True]]
    K = KripkeStructure(Digraph(2), [0, 1])
    assert simulation_preorder(K).tolist() == [[True, False], [False, True]]


def test_dnc_preorder_needs_acyclic():
    K = KripkeStructure(Digraph(2, [(0, 1), (1, 0)]), [0, 0])
    with pytest.raises(PreconditionError):
        simulation_preorder(K, method="dnc")


def test_preorder_against_classical_definition(rng):
    for _ in range(60):
        K = random_kripke(rng, int(rng.integers(1, 9)), InstanceConfig(edge_prob=0.3))
        R = simulation_preorder(K)
        assert set(zip(*np.nonzero(R))) == classical_simulation(K)
        assert np.all(np.diag(R))
        assert np.all(((R.astype(int) @ R.astype(int)) > 0) <= R)


def test_is_simulation_relation_basics(rng):
    K = random_kripke(rng, 6)
    assert is_simulation_relation(K, np.zeros((6, 6), dtype=bool))
    assert is_simulation_relation(K, np.eye(6, dtype=bool))


def test_reduction_examples():
    t = TwoTokensGame(Digraph(1), Digraph(1), [[True]], [[False]])
    red = reduce_2trg_to_simulation(t)
    K = red.kripke
    assert K.n == 3
    assert sorted(map(tuple, K.graph.edges.tolist())) == [(0, 1), (2, 1)]
    new = solve_reachability(materialize_2trg(simulation_game(K)))
    old = solve_reachability(materialize_2trg(t))
    start = t.encode(0, 0, 0)
    assert old.surv1[start] and new.surv1[red.config_map[start]]

    t = TwoTokensGame(Digraph(1), Digraph(1), [[False]], [[False]])
    red = reduce_2trg_to_simulation(t)
    assert red.kripke.graph.edges.tolist() == [[0, 1]]
    new = solve_reachability(materialize_2trg(simulation_game(red.kripke)))
    assert solve_reachability(materialize_2trg(t)).win0[start]
    assert new.win0[red.config_map[start]]


def test_witness_examples():
    t = TwoTokensGame(Digraph(1), Digraph(1), [[False]], [[False]])
    red = reduce_2trg_to_simulation(t)
    n = red.kripke.n
    p, U = simulation_witnesses(t, solve_reachability(materialize_2trg(t)), red)
    u, ustar, v = 0, 1, 2
    assert p[n * n + v * n + ustar] == 0
    assert p[u * n + v] == 1

    t = TwoTokensGame(Digraph(2, [(0, 1)]), Digraph(1), [[True], [True]], [[True, True]])
    red = reduce_2trg_to_simulation(t)
    n = red.kripke.n
    p, U = simulation_witnesses(t, solve_reachability(materialize_2trg(t)), red)
    assert U[red.config_map].all()
    assert all(U[x * n + x] for x in range(n))


def test_reduction_preserves_acyclicity(rng):
    for _ in range(30):
        t = random_2trg(rng, 5, 5, InstanceConfig(acyclic=True))
        assert reduce_2trg_to_simulation(t).kripke.graph.is_acyclic()


@given(two_tokens_games(max_n=4))
def test_reduction_equivalence_and_witnesses(t):
    old = solve_reachability(materialize_2trg(t))
    red = reduce_2trg_to_simulation(t)
    assert red.kripke.n == 2 * t.n0 + t.n1
    G = materialize_2trg(simulation_game(red.kripke))
    new = solve_reachability(G)
    assert np.array_equal(new.surv1[red.config_map], old.surv1)
    p, U = simulation_witnesses(t, old, red)
    assert is_progress_measure(G, 0, p)
    assert is_closed(G, 1, U)


def test_remark_sizes(rng):
    K = random_kripke(rng, 9)
    g = materialize_2trg(simulation_game(K))
    assert g.n == 2 * K.n ** 2 and g.m == 2 * K.n * K.graph.m
