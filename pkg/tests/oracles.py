"""Reference implementations written straight from the definitions.

None of these reuse package code beyond plain data access, so they serve as
independent oracles for the vectorized and matrix-based versions.
"""

import itertools

INF = float("inf")


def moves_of(game):
    succ = [[] for _ in range(game.n)]
    for u, v in game.graph.moves():
        succ[u].append(v)
    return succ


def py_lift_set(game, P, U):
    U = set(U)
    succ = moves_of(game)
    out = set()
    for s in range(game.n):
        final = int(game.final[s]) == P
        if int(game.owner[s]) == P:
            ok = final or any(t in U for t in succ[s])
        else:
            ok = final and all(t in U for t in succ[s])
        if ok:
            out.add(s)
    return out


def py_lift(game, P, p):
    succ = moves_of(game)
    out = []
    for s in range(game.n):
        bottom = 0 if int(game.final[s]) == P else INF
        vals = [1 + p[t] for t in succ[s]]
        if int(game.owner[s]) == P:
            out.append(min([bottom] + vals))
        else:
            out.append(max([bottom] + vals))
    return out


def py_levels(game, P):
    """r^P(s) = first round k at which s enters the iterated LiftSet from the empty set."""
    r = [INF] * game.n
    W = set()
    for k in range(game.n + 1):
        nxt = py_lift_set(game, P, W)
        for s in nxt - W:
            r[s] = k
        if nxt == W:
            break
        W = nxt
    return r


def py_twotokens_moves(t):
    """Explicit move list of a 2TRG built from the move rule."""
    out = []
    for P in (0, 1):
        g = t.graph(P)
        n_other = t.n1 if P == 0 else t.n0
        for u, u2 in g.edges.tolist():
            for v in range(n_other):
                out.append((t.encode(P, u, v), t.encode(1 - P, v, u2)))
    return out


def classical_simulation(K):
    """Greatest simulation: refine label equality until the transfer clause holds."""
    n = K.n
    succ = [[] for _ in range(n)]
    for a, b in K.graph.edges.tolist():
        succ[a].append(b)
    R = {(s, t) for s in range(n) for t in range(n) if K.labels[s] == K.labels[t]}
    changed = True
    while changed:
        changed = False
        for s, t in sorted(R):
            if any(all((s2, t2) not in R for t2 in succ[t]) for s2 in succ[s]):
                R.discard((s, t))
                changed = True
    return R


def py_bmm(a, b, c):
    n, k = len(a), len(b)
    return [[any(a[i][x] and b[x][j] for x in range(k)) for j in range(c)] for i in range(n)]


def py_msbmm(a, b, c, mode):
    n, k = len(a), len(b)
    pick = max if mode == "max" else min
    empty = -INF if mode == "max" else INF
    return [[pick([a[i][x] for x in range(k) if b[x][j]], default=empty) for j in range(c)]
            for i in range(n)]


def winners_by_enumeration(game, P, max_steps):
    """Configs from which some positional P-strategy beats every opponent strategy."""
    from simgames.games import all_strategies, play
    mine = list(all_strategies(game, P))
    theirs = list(all_strategies(game, 1 - P))
    won = set()
    for s in range(game.n):
        for a in mine:
            ok = True
            for b in theirs:
                s0, s1 = (a, b) if P == 0 else (b, a)
                if play(game, s, s0, s1, max_steps).winner != P:
                    ok = False
                    break
            if ok:
                won.add(s)
                break
    return won


def all_subsets(n):
    return itertools.chain.from_iterable(itertools.combinations(range(n), k) for k in range(n + 1))
