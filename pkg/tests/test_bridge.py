import numpy as np
import pytest
from hypothesis import given, strategies as st

from simgames.bridge import (AcyclicCertificate, CyclicCertificate, lift_via_msbmm,
                             liftset_via_bmm, make_acyclic_certificate, make_cyclic_certificate,
                             product_factors,
                             verify_acyclic_certificate, verify_cyclic_certificate)
from simgames.games import INF, PreconditionError, lift, lift_set, solve_reachability
from simgames.generators import InstanceConfig, random_2trg
from simgames.matrices import BMM_BACKENDS, int_product, kernel_calls
from simgames.twotokens import Digraph, TwoTokensGame, join_blocks, materialize_2trg

from oracles import py_lift, py_lift_set
from test_twotokens import two_tokens_games


def pair_game():
    # V0 = {u} with a self-loop, V1 = {v} edgeless, only <1,v,u> tagged 0
    return TwoTokensGame(Digraph(1, [(0, 0)]), Digraph(1), [[True]], [[False]])


def test_liftset_examples():
    t = TwoTokensGame(Digraph(2, [(0, 1)]), Digraph(2), np.ones((2, 2)), np.ones((2, 2)))
    assert not liftset_via_bmm(t, 0, set()).any()
    t = pair_game()
    assert set(np.flatnonzero(liftset_via_bmm(t, 0, {1}))) == {0, 1}


def test_lift_examples():
    t = TwoTokensGame(Digraph(2, [(0, 1)]), Digraph(1, [(0, 0)]), np.ones((2, 1)), np.ones((1, 2)))
    assert np.all(lift_via_msbmm(t, 0, np.full(t.num_configs, INF)) == INF)
    out = lift_via_msbmm(pair_game(), 0, [INF, 0.0])
    assert out[0] == 1


@given(two_tokens_games(max_n=6), st.integers(0, 1), st.sampled_from(BMM_BACKENDS), st.data())
def test_liftset_bridge_matches_game_core(t, P, backend, data):
    n = t.num_configs
    U = np.array(data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=bool)
    g = materialize_2trg(t)
    got = liftset_via_bmm(t, P, U, backend=backend)
    assert np.array_equal(got, lift_set(g, P, U))
    assert set(np.flatnonzero(got).tolist()) == py_lift_set(g, P, np.flatnonzero(U).tolist())


@given(two_tokens_games(max_n=6), st.integers(0, 1), st.data())
def test_lift_bridge_matches_game_core(t, P, data):
    n = t.num_configs
    p = data.draw(st.lists(st.one_of(st.just(INF), st.integers(0, 2 * n + 1).map(float)),
                           min_size=n, max_size=n))
    g = materialize_2trg(t)
    got = lift_via_msbmm(t, P, p)
    assert np.array_equal(got, lift(g, P, p))
    assert got.tolist() == py_lift(g, P, p)


def test_exactly_two_kernel_calls(rng):
    t = random_2trg(rng, 7, 5)
    before = kernel_calls["bmm"]
    liftset_via_bmm(t, 1, rng.random(t.num_configs) < 0.5)
    assert kernel_calls["bmm"] - before == 2
    before = kernel_calls["msbmm"]
    lift_via_msbmm(t, 0, np.zeros(t.num_configs))
    assert kernel_calls["msbmm"] - before == 2


def test_acyclic_certificate_edgeless():
    t = TwoTokensGame(Digraph(2), Digraph(3), np.eye(2, 3, dtype=bool), np.zeros((3, 2), bool))
    claimed, cert = make_acyclic_certificate(t)
    g = materialize_2trg(t)
    assert np.array_equal(claimed, solve_reachability(g).surv1)
    assert all(not np.any(p) for p in cert.products)
    assert verify_acyclic_certificate(t, claimed, cert)


def test_acyclic_certificate_needs_an_acyclic_side():
    cyc = Digraph(2, [(0, 1), (1, 0)])
    t = TwoTokensGame(cyc, cyc, np.ones((2, 2)), np.ones((2, 2)))
    with pytest.raises(PreconditionError):
        make_acyclic_certificate(t)


def test_acyclic_certificate_shape_mismatch(rng):
    t = random_2trg(rng, 3, 3, InstanceConfig(acyclic=True))
    claimed, cert = make_acyclic_certificate(t)
    bad = AcyclicCertificate(cert.player, (cert.claimed[0][:2], cert.claimed[1]), cert.products)
    with pytest.raises(ValueError):
        verify_acyclic_certificate(t, claimed, bad)


def _semi_acyclic(rng, n0, n1):
    t = random_2trg(rng, n0, n1, InstanceConfig(acyclic=True))
    if rng.random() < 0.5:
        t = TwoTokensGame(t.g0, Digraph(n1, np.argwhere(rng.random((n1, n1)) < 0.3)),
                          t.final0, t.final1)
    return t


def test_acyclic_round_trip(rng):
    for _ in range(40):
        t = _semi_acyclic(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)))
        for P in (0, 1):
            claimed, cert = make_acyclic_certificate(t, P)
            assert np.array_equal(claimed, solve_reachability(materialize_2trg(t)).surv(P))
            assert verify_acyclic_certificate(t, claimed, cert, mode="freivalds", seed=3)
            assert verify_acyclic_certificate(t, claimed, cert, mode="deterministic")


def acyclic_perturbations(t, claimed, cert):
    """Every single-entry corruption: one claimed bit (products recomputed) or one product entry."""
    for idx in range(t.num_configs):
        bad = claimed.copy()
        bad[idx] = ~bad[idx]
        blocks = tuple(b.copy() for b in t.split(bad))
        prods = tuple(int_product(a, b) for a, b in product_factors(t, cert.player, blocks))
        yield bad, AcyclicCertificate(cert.player, blocks, prods)
    for q in (0, 1):
        for pos in np.ndindex(cert.products[q].shape):
            prods = [p.copy() for p in cert.products]
            prods[q][pos] += 1
            yield claimed, AcyclicCertificate(cert.player, cert.claimed, tuple(prods))


def test_acyclic_single_perturbations_rejected(rng):
    for _ in range(15):
        t = _semi_acyclic(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        claimed, cert = make_acyclic_certificate(t, int(rng.integers(0, 2)))
        for bad_claim, bad_cert in acyclic_perturbations(t, claimed, cert):
            assert not verify_acyclic_certificate(t, bad_claim, bad_cert, mode="deterministic")


def test_cyclic_certificate_examples():
    t = TwoTokensGame(Digraph(2), Digraph(2), np.eye(2, dtype=bool), np.zeros((2, 2), bool))
    cert = make_cyclic_certificate(t, 0)
    flat = cert.flat()
    assert np.array_equal(flat, np.where(t.final_mask(0), 0.0, INF))
    cyc = TwoTokensGame(Digraph(1, [(0, 0)]), Digraph(1, [(0, 0)]), [[True]], [[False]])
    assert np.all(make_cyclic_certificate(cyc, 0).flat() == INF)


def cyclic_perturbations(p, n):
    for idx in range(p.size):
        vals = [INF] if np.isfinite(p[idx]) else [0.0, 1.0, float(n - 1)]
        if np.isfinite(p[idx]):
            vals += [p[idx] + 1, p[idx] - 1]
        for v in vals:
            q = p.copy()
            q[idx] = v
            yield q


def test_cyclic_round_trip_and_perturbations(rng):
    for _ in range(30):
        t = random_2trg(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        res = solve_reachability(materialize_2trg(t))
        for P in (0, 1):
            cert = make_cyclic_certificate(t, P)
            assert verify_cyclic_certificate(t, res.win(P), cert)
            assert not verify_cyclic_certificate(t, ~res.win(P), cert) or t.num_configs == 0
            for q in cyclic_perturbations(cert.flat(), t.num_configs):
                bad = CyclicCertificate(P, t.split(q))
                assert not verify_cyclic_certificate(t, np.isfinite(q), bad)


def test_cyclic_rejects_large_entries():
    t = TwoTokensGame(Digraph(1), Digraph(1), [[False]], [[False]])
    cert = CyclicCertificate(0, (np.array([[0.0]]), np.array([[2.0]])))
    assert not verify_cyclic_certificate(t, [True, True], cert)
    cert = CyclicCertificate(0, (np.array([[0.0]]), np.array([[0.5]])))
    assert not verify_cyclic_certificate(t, [True, True], cert)
