"""Command-line front end.

Exit codes: 0 success or accept, 1 verification reject, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import textio
from .bridge import (AcyclicCertificate, make_acyclic_certificate, make_cyclic_certificate,
                     verify_acyclic_certificate, verify_cyclic_certificate)
from .dnc import solve_acyclic_dnc
from .games import PreconditionError, solve_reachability
from .generators import InstanceConfig, random_2trg
from .matrices import BMM_BACKENDS, bmm, freivalds_verify, int_product
from .reductions import PrecheckFailure, bmm_to_2trg, msbmm_verify_to_2trg
from .textio import FormatError
from .twotokens import join_blocks, materialize_2trg, simulation_preorder
from .waksman import build_network, realize, route, to_gadget

EXIT_OK, EXIT_REJECT, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _mask_line(name: str, mask) -> str:
    mask = np.asarray(mask, dtype=bool)
    return f"{name}: " + "".join("1" if b else "0" for b in mask)


def cmd_solve_game(args) -> int:
    game = textio.load(args.game, textio.parse_game)
    res = solve_reachability(game)
    print(f"win0: {int(res.win0.sum())} configs")
    print(f"win1: {int(res.win1.sum())} configs")
    print("r0: " + textio.format_potential(res.r0))
    print("r1: " + textio.format_potential(res.r1))
    return EXIT_OK


def _surv(t, method: str, backend: str):
    if method == "naive":
        res = solve_reachability(materialize_2trg(t))
        return res.surv0, res.surv1
    s0 = solve_acyclic_dnc(t, 0, backend=backend)
    return s0, ~s0


def cmd_solve_2trg(args) -> int:
    t = textio.load(args.game, textio.parse_2trg)
    s0, s1 = _surv(t, args.method, args.backend)
    print(f"surv0: {int(s0.sum())} configs")
    print(f"surv1: {int(s1.sum())} configs")
    print(_mask_line("S0", s0))
    print(_mask_line("S1", s1))
    return EXIT_OK


def cmd_simulate(args) -> int:
    K = textio.load(args.kripke, textio.parse_kripke)
    R = simulation_preorder(K, method=args.method, backend=args.backend)
    sys.stdout.write(textio.format_matrix(R))
    return EXIT_OK


def cmd_certify(args) -> int:
    t = textio.load(args.game, textio.parse_2trg)
    if args.case == "acyclic":
        _, cert = make_acyclic_certificate(t, args.player)
    else:
        cert = make_cyclic_certificate(t, args.player)
    _emit(textio.format_certificate(cert), args.out)
    return EXIT_OK


def cmd_verify_cert(args) -> int:
    t = textio.load(args.game, textio.parse_2trg)
    cert = textio.load(args.cert, textio.parse_certificate)
    if args.claimed:
        claimed = textio.load(args.claimed, textio.parse_matrix, "bool").reshape(-1)
    elif isinstance(cert, AcyclicCertificate):
        claimed = join_blocks(*cert.claimed)
    else:
        claimed = np.isfinite(cert.flat())
    try:
        if isinstance(cert, AcyclicCertificate):
            ok = verify_acyclic_certificate(t, claimed, cert, mode=args.mode,
                                            rounds=args.rounds, seed=args.seed)
        else:
            ok = verify_cyclic_certificate(t, claimed, cert)
    except ValueError as exc:
        raise FormatError(args.cert, 0, str(exc)) from None
    print("accept" if ok else "reject")
    return EXIT_OK if ok else EXIT_REJECT


def cmd_reduce(args) -> int:
    mats = [textio.load(p, textio.parse_matrix) for p in args.inputs]
    sidecar = []
    if args.kind == "bmm":
        if len(mats) != 2:
            raise UsageError("reduce bmm takes two matrix files")
        inst = bmm_to_2trg(*mats)
        t = inst.game
        for (i, j), idx in np.ndenumerate(inst.start):
            sidecar.append(f"start {i} {j} {idx}")
    else:
        if len(mats) != 3:
            raise UsageError("reduce msbmm takes three matrix files")
        inst = msbmm_verify_to_2trg(*mats)
        if isinstance(inst, PrecheckFailure):
            print(f"reject: precheck failed at ({inst.i}, {inst.j}): {inst.reason}")
            return EXIT_REJECT
        t = inst.game
        for i in range(t.n0):
            for k in range(inst.m):
                sidecar.append(f"start {i} {k} {inst.start_config(i, k)}")
    _emit(textio.format_2trg(t), args.out)
    if args.sidecar:
        with open(args.sidecar, "w") as fh:
            fh.write("\n".join(sidecar) + ("\n" if sidecar else ""))
    return EXIT_OK


def _parse_perm(text: str, n: int) -> list[int]:
    try:
        vals = [int(x) - 1 for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--perm must be comma-separated integers, got {text!r}") from None
    if sorted(vals) != list(range(n)):
        raise UsageError(f"--perm is not a permutation of 1..{n}")
    return vals


def cmd_waksman(args) -> int:
    try:
        net = build_network(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pi = _parse_perm(args.perm, args.n) if args.perm else list(range(args.n))
    routing = route(net, pi)
    got = realize(net, routing).tolist()
    print(f"gates: {len(net.gates)}")
    print(f"gadget vertices: {to_gadget(net).graph.n}")
    print("active: " + " ".join(map(str, sorted(routing.active))))
    print("realized: ok" if got == pi else "realized: mismatch")
    return EXIT_OK if got == pi else EXIT_REJECT


# benchmarks


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple = (256, 512, 1024)
    backends: tuple = ("naive", "bitpacked")
    repeats: int = 5
    seed: int = 0
    density: float = 0.5
    rounds: int = 20


@dataclass
class BenchRow:
    kind: str
    n: int
    variant: str
    times: list = field(default_factory=list)

    @property
    def median(self) -> float:
        return statistics.median(self.times)

    def tsv(self) -> str:
        return f"{self.kind}\t{self.n}\t{self.variant}\t{self.median:.6f}"


def _timed(fn, repeats: int) -> list[float]:
    out = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return out


def bench(kind: str, cfg: BenchConfig) -> list[BenchRow]:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n in cfg.sizes:
        if kind == "bmm":
            a = rng.random((n, n)) < cfg.density
            b = rng.random((n, n)) < cfg.density
            for be in cfg.backends:
                rows.append(BenchRow(kind, n, be, _timed(lambda: bmm(a, b, backend=be), cfg.repeats)))
        elif kind == "solver":
            t = random_2trg(rng, n, n, InstanceConfig(edge_prob=cfg.density, acyclic=True))
            for be in cfg.backends:
                fn = {"naive": lambda: solve_reachability(materialize_2trg(t)),
                      "dnc": lambda: solve_acyclic_dnc(t, 0)}[be]
                rows.append(BenchRow(kind, n, be, _timed(fn, cfg.repeats)))
        elif kind == "verify":
            a = (rng.random((n, n)) < cfg.density).astype(np.int64)
            b = (rng.random((n, n)) < cfg.density).astype(np.int64)
            c = a @ b
            for be in cfg.backends:
                fn = {"freivalds": lambda: freivalds_verify(a, b, c, rounds=cfg.rounds, seed=cfg.seed),
                      "det": lambda: np.array_equal(int_product(a, b), c)}[be]
                rows.append(BenchRow(kind, n, be, _timed(fn, cfg.repeats)))
        else:
            raise UsageError(f"unknown bench kind {kind!r}")
    return rows


_BENCH_VARIANTS = {"bmm": BMM_BACKENDS, "solver": ("naive", "dnc"), "verify": ("freivalds", "det")}


def cmd_bench(args) -> int:
    sizes = tuple(int(x) for x in args.sizes.split(",")) if args.sizes else None
    variants = tuple(args.variants.split(",")) if args.variants else None
    defaults = {"bmm": ((256, 512, 1024), ("naive", "bitpacked")),
                "solver": ((8, 16, 32), ("naive", "dnc")),
                "verify": ((256, 1024), ("freivalds", "det"))}[args.kind]
    variants = variants or defaults[1]
    for v in variants:
        if v not in _BENCH_VARIANTS[args.kind]:
            raise UsageError(f"unknown variant {v!r} for bench {args.kind}")
    cfg = BenchConfig(sizes=sizes or defaults[0], backends=variants,
                      repeats=args.repeats, seed=args.seed)
    print("kind\tn\tvariant\tmedian_s")
    for row in bench(args.kind, cfg):
        print(row.tsv())
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    failures = run_selftest(seed=args.seed)
    for line in failures:
        print(f"FAIL {line}")
    print("selftest: ok" if not failures else f"selftest: {len(failures)} failures")
    return EXIT_OK if not failures else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="simgames", description="Simulation games, two-tokens games and matrix products.")
    p.add_argument("--seed", type=int, default=0, help="randomness source for every subcommand")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve-game", help="solve an explicit reachability game")
    s.add_argument("game")
    s.set_defaults(func=cmd_solve_game)

    s = sub.add_parser("solve-2trg", help="surviving sets of a two-tokens game")
    s.add_argument("game")
    s.add_argument("--method", choices=("naive", "dnc"), default="naive")
    s.add_argument("--backend", choices=BMM_BACKENDS, default="bitpacked")
    s.set_defaults(func=cmd_solve_2trg)

    s = sub.add_parser("simulate", help="simulation preorder of a Kripke structure")
    s.add_argument("kripke")
    s.add_argument("--method", choices=("naive", "dnc"), default="naive")
    s.add_argument("--backend", choices=BMM_BACKENDS, default="bitpacked")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("certify", help="write a certificate for a two-tokens game")
    s.add_argument("game")
    s.add_argument("--case", choices=("acyclic", "cyclic"), default="cyclic")
    s.add_argument("--player", type=int, choices=(0, 1), default=None)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("verify-cert", help="check a certificate against a two-tokens game")
    s.add_argument("game")
    s.add_argument("cert")
    s.add_argument("--mode", choices=("freivalds", "det"), default="freivalds")
    s.add_argument("--rounds", type=int, default=30)
    s.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="overrides the global seed")
    s.add_argument("--claimed", help="bool matrix file with the claimed set (default: read from cert)")
    s.set_defaults(func=cmd_verify_cert)

    s = sub.add_parser("reduce", help="build the game of a hardness reduction")
    s.add_argument("kind", choices=("bmm", "msbmm"))
    s.add_argument("inputs", nargs="+", help="matrix files: B1 B2 for bmm, A B C for msbmm")
    s.add_argument("-o", "--out")
    s.add_argument("--sidecar", help="write 'start i k index' lines here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("waksman", help="build and route a Waksman network")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--perm", help="1-based comma-separated permutation")
    s.set_defaults(func=cmd_waksman)

    s = sub.add_parser("bench", help="median-of-repeats timings as TSV")
    s.add_argument("kind", choices=("bmm", "solver", "verify"))
    s.add_argument("sizes", nargs="?")
    s.add_argument("variants", nargs="?")
    s.add_argument("--repeats", type=int, default=5)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", help="quick randomized consistency checks")
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "player", "unset") is None:
            args.player = 1 if args.case == "acyclic" else 0
        if getattr(args, "rounds", 1) < 1:
            raise UsageError("--rounds must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"simgames: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FormatError as exc:
        print(f"simgames: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"simgames: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"simgames: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
