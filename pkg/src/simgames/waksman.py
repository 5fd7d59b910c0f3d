"""Waksman permutation networks and their guard-vertex gadgets.

Permutations are 0-based sequences: ``pi[i]`` is the outlet reached from
inlet ``i``.  Ports are tuples ``('u', i)`` for inlets, ``('v', i)`` for
outlets, ``('x', s, j)`` / ``('y', s, k)`` for the inputs / outputs of gate
``s``.  A straight gate sends ``x_j`` to ``y_j``; an active gate crosses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .twotokens import Digraph


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def gate_count(n: int) -> int:
    """``n log2 n - n + 1`` for ``n = 2^k >= 2``."""
    k = n.bit_length() - 1
    return n * k - n + 1


def check_permutation(pi, n: int) -> np.ndarray:
    pi = np.asarray(pi, dtype=np.int64).reshape(-1)
    if pi.size != n or not np.array_equal(np.sort(pi), np.arange(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {pi.tolist()}")
    return pi


@dataclass(frozen=True)
class _Block:
    # recursive layout kept for routing; a size-2 block is a single gate
    n: int
    gate: int = -1
    in_gates: tuple = ()
    out_gates: tuple = ()
    upper: _Block | None = None
    lower: _Block | None = None


@dataclass(frozen=True, eq=False)
class PermNetwork:
    n: int
    gates: tuple[int, ...]
    wires: dict
    layout: _Block

    @property
    def inlets(self) -> list:
        return [("u", i) for i in range(self.n)]

    @property
    def outlets(self) -> list:
        return [("v", i) for i in range(self.n)]

    def ports(self, s: int) -> tuple:
        return ("x", s, 0), ("x", s, 1), ("y", s, 0), ("y", s, 1)


@dataclass(frozen=True)
class Routing:
    active: frozenset


def build_network(n: int) -> PermNetwork:
    if not is_power_of_two(n) or n < 2:
        raise ValueError(f"network size must be a power of two >= 2, got {n}")
    wires: dict = {}
    counter = [0]

    def new_gate() -> int:
        counter[0] += 1
        return counter[0] - 1

    def block(inputs: list) -> tuple[_Block, list]:
        size = len(inputs)
        if size == 2:
            s = new_gate()
            wires[inputs[0]] = ("x", s, 0)
            wires[inputs[1]] = ("x", s, 1)
            return _Block(2, gate=s), [("y", s, 0), ("y", s, 1)]
        half = size // 2
        ins = [new_gate() for _ in range(half)]
        for i, s in enumerate(ins):
            wires[inputs[2 * i]] = ("x", s, 0)
            wires[inputs[2 * i + 1]] = ("x", s, 1)
        up, up_out = block([("y", s, 0) for s in ins])
        lo, lo_out = block([("y", s, 1) for s in ins])
        outs = [new_gate() for _ in range(half - 1)]
        result = []
        for j, s in enumerate(outs):
            wires[up_out[j]] = ("x", s, 0)
            wires[lo_out[j]] = ("x", s, 1)
            result += [("y", s, 0), ("y", s, 1)]
        result += [up_out[-1], lo_out[-1]]
        return _Block(size, in_gates=tuple(ins), out_gates=tuple(outs), upper=up, lower=lo), result

    layout, outs = block([("u", i) for i in range(n)])
    for i, port in enumerate(outs):
        wires[port] = ("v", i)
    return PermNetwork(n, tuple(range(counter[0])), wires, layout)


def _route_block(b: _Block, pi: list, active: set) -> None:
    n = b.n
    if n == 2:
        if pi[0] == 1:
            active.add(b.gate)
        return
    pinv = [0] * n
    for i, o in enumerate(pi):
        pinv[o] = i
    side = [-1] * n  # 0 = upper subnetwork, 1 = lower

    def close_loop(x: int, s: int) -> None:
        # inputs sharing a gate take opposite sides, and so do the sources
        # of two outlets sharing a gate; follow the chain until it closes
        while side[x] < 0:
            side[x] = s
            mate = x ^ 1
            side[mate] = 1 - s
            x = pinv[pi[mate] ^ 1]

    close_loop(pinv[n - 1], 1)
    for x in range(n):
        if side[x] < 0:
            close_loop(x, 0)
    half = n // 2
    sub = ([0] * half, [0] * half)
    for i, s in enumerate(b.in_gates):
        if side[2 * i] == 1:
            active.add(s)
    for x in range(n):
        sub[side[x]][x // 2] = pi[x] // 2
    for j, s in enumerate(b.out_gates):
        if side[pinv[2 * j]] == 1:
            active.add(s)
    _route_block(b.upper, sub[0], active)
    _route_block(b.lower, sub[1], active)


def route(net: PermNetwork, pi) -> Routing:
    """Gate settings realizing ``pi`` by the looping algorithm, O(n log n)."""
    pi = check_permutation(pi, net.n).tolist()
    active: set = set()
    _route_block(net.layout, pi, active)
    return Routing(frozenset(active))


def trace(net: PermNetwork, active) -> list[list]:
    """Port sequence from each inlet to its outlet under the given settings."""
    active = active.active if isinstance(active, Routing) else frozenset(active)
    paths = []
    for i in range(net.n):
        port = ("u", i)
        path = [port]
        while port[0] != "v":
            port = net.wires[port]
            path.append(port)
            if port[0] == "x":
                _, s, j = port
                port = ("y", s, j ^ int(s in active))
                path.append(port)
        paths.append(path)
    return paths


def realize(net: PermNetwork, active) -> np.ndarray:
    return np.array([path[-1][1] for path in trace(net, active)], dtype=np.int64)


# gadgets


@dataclass(frozen=True, eq=False)
class PermGadget:
    """Vertex layout: inlets ``0..n-1``, outlets ``n..2n-1``, then eight vertices per gate."""

    n: int
    graph: Digraph
    port_index: dict
    guard_index: dict

    def inlet(self, i: int) -> int:
        return i

    def outlet(self, i: int) -> int:
        return self.n + i


def to_gadget(net: PermNetwork) -> PermGadget:
    n = net.n
    port_index = {("u", i): i for i in range(n)}
    port_index.update({("v", i): n + i for i in range(n)})
    guard_index = {}
    edges = []
    for s in net.gates:
        base = 2 * n + 8 * s
        for off, port in enumerate(net.ports(s)):
            port_index[port] = base + off
        for j in range(2):
            for k in range(2):
                z = base + 4 + 2 * j + k
                guard_index[(s, j, k)] = z
                edges.append((port_index[("x", s, j)], z))
                edges.append((z, port_index[("y", s, k)]))
    for a, b in net.wires.items():
        edges.append((port_index[a], port_index[b]))
    return PermGadget(n, Digraph(2 * n + 8 * len(net.gates), edges), port_index, guard_index)


def guard_set(gadget: PermGadget, net: PermNetwork, pi) -> frozenset:
    """Guards to delete so that the gadget routes exactly along ``pi``."""
    active = route(net, pi).active
    out = set()
    for s in net.gates:
        pair = ((0, 0), (1, 1)) if s in active else ((0, 1), (1, 0))
        out.update(gadget.guard_index[(s, j, k)] for j, k in pair)
    return frozenset(out)


def maximal_paths(g: Digraph, removed=(), starts=None) -> list[list[int]]:
    """Follow the unique successor from each start vertex after deleting ``removed``.

    Raises ``ValueError`` if some vertex on the way has more than one
    remaining successor.
    """
    gone = np.zeros(g.n, dtype=bool)
    gone[list(removed)] = True
    succ = [[w for w in ws if not gone[w]] for ws in g.successors()]
    if starts is None:
        indeg = np.zeros(g.n, dtype=np.int64)
        for v, ws in enumerate(succ):
            if not gone[v]:
                for w in ws:
                    indeg[w] += 1
        starts = [v for v in range(g.n) if not gone[v] and indeg[v] == 0]
    paths = []
    for v in starts:
        path = [v]
        while succ[path[-1]]:
            if len(succ[path[-1]]) > 1:
                raise ValueError(f"vertex {path[-1]} branches")
            path.append(succ[path[-1]][0])
            if len(path) > g.n:
                raise ValueError("path revisits a vertex")
        paths.append(path)
    return paths
