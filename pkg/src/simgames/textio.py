"""Line-based text formats for games, structures, matrices and certificates.

Tokens are separated by whitespace; ``#`` starts a comment.  Every parser
reports problems as ``FormatError`` with the file name and line number.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .bridge import AcyclicCertificate, CyclicCertificate
from .games import ReachabilityGame
from .twotokens import Digraph, KripkeStructure, TwoTokensGame


class FormatError(ValueError):
    def __init__(self, path: str, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.path, self.line, self.msg = path, line, msg


class Tokens:
    def __init__(self, text: str, path: str = "<input>"):
        self.path = path
        self.items = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            for tok in line.split("#", 1)[0].split():
                self.items.append((tok, lineno))
        self.pos = 0

    @property
    def line(self) -> int:
        if self.pos < len(self.items):
            return self.items[self.pos][1]
        return self.items[-1][1] if self.items else 1

    def error(self, msg: str) -> FormatError:
        return FormatError(self.path, self.line, msg)

    def next(self, what: str) -> str:
        if self.pos >= len(self.items):
            raise self.error(f"unexpected end of input, expected {what}")
        tok = self.items[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, word: str) -> None:
        tok = self.next(repr(word))
        if tok != word:
            self.pos -= 1
            raise self.error(f"expected {word!r}, got {tok!r}")

    def integer(self, what: str, lo: int = 0, hi: int | None = None) -> int:
        tok = self.next(what)
        try:
            val = int(tok)
        except ValueError:
            self.pos -= 1
            raise self.error(f"expected integer {what}, got {tok!r}") from None
        if val < lo or (hi is not None and val >= hi):
            self.pos -= 1
            rng = f"[{lo}, {hi})" if hi is not None else f">= {lo}"
            raise self.error(f"{what} {val} outside {rng}")
        return val

    def bit(self, what: str) -> bool:
        return bool(self.integer(what, 0, 2))

    def number(self, what: str) -> float:
        tok = self.next(what)
        if tok in ("inf", "+inf"):
            return np.inf
        if tok == "-inf":
            return -np.inf
        try:
            val = float(tok)
        except ValueError:
            self.pos -= 1
            raise self.error(f"expected number {what}, got {tok!r}") from None
        if not np.isfinite(val):
            self.pos -= 1
            raise self.error(f"bad number {tok!r}")
        return val

    def end(self) -> None:
        if self.pos < len(self.items):
            raise self.error(f"trailing token {self.items[self.pos][0]!r}")


def _fmt_num(x: float) -> str:
    if np.isposinf(x):
        return "inf"
    if np.isneginf(x):
        return "-inf"
    return str(int(x)) if x == int(x) else repr(float(x))


def read_text(path) -> Tokens:
    path = str(path)
    try:
        return Tokens(Path(path).read_text(), path)
    except OSError as exc:
        raise FormatError(path, 0, f"cannot read file: {exc.strerror}") from None


# reachability games


def parse_game(tk: Tokens) -> ReachabilityGame:
    tk.expect("game")
    n = tk.integer("configuration count")
    m = tk.integer("move count")
    owner = [tk.integer("owner tag", 0, 2) for _ in range(n)]
    final = [tk.integer("final tag", 0, 2) for _ in range(n)]
    moves = [(tk.integer("move source", 0, n), tk.integer("move target", 0, n)) for _ in range(m)]
    return ReachabilityGame.build(owner, final, moves)


def format_game(game: ReachabilityGame) -> str:
    lines = [f"game {game.n} {game.m}",
             " ".join(map(str, game.owner.tolist())),
             " ".join(map(str, game.final.tolist()))]
    lines += [f"{u} {v}" for u, v in game.graph.moves()]
    return "\n".join(lines) + "\n"


def parse_potential(tk: Tokens, n: int) -> np.ndarray:
    return np.array([tk.number("potential") for _ in range(n)], dtype=np.float64)


def format_potential(p) -> str:
    return " ".join(_fmt_num(x) for x in np.asarray(p, dtype=np.float64))


# graphs, structures, two-tokens games


def _parse_graph(tk: Tokens) -> Digraph:
    tk.expect("graph")
    n = tk.integer("vertex count")
    m = tk.integer("edge count")
    edges = [(tk.integer("edge source", 0, n), tk.integer("edge target", 0, n)) for _ in range(m)]
    return Digraph(n, edges)


def _format_graph(g: Digraph, head: str = "graph") -> list[str]:
    return [f"{head} {g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges.tolist()]


def parse_kripke(tk: Tokens) -> KripkeStructure:
    tk.expect("kripke")
    n = tk.integer("state count")
    m = tk.integer("edge count")
    labels = [tk.integer("label") for _ in range(n)]
    edges = [(tk.integer("edge source", 0, n), tk.integer("edge target", 0, n)) for _ in range(m)]
    return KripkeStructure(Digraph(n, edges), labels)


def format_kripke(K: KripkeStructure) -> str:
    g = K.graph
    lines = [f"kripke {g.n} {g.m}", " ".join(map(str, K.labels.tolist()))]
    lines += [f"{u} {v}" for u, v in g.edges.tolist()]
    return "\n".join(lines) + "\n"


def _parse_bits(tk: Tokens, rows: int, cols: int) -> np.ndarray:
    return np.array([[tk.bit("bit") for _ in range(cols)] for _ in range(rows)],
                    dtype=bool).reshape(rows, cols)


def _format_bits(a: np.ndarray) -> list[str]:
    return [" ".join("1" if x else "0" for x in row) for row in np.asarray(a)]


def parse_2trg(tk: Tokens) -> TwoTokensGame:
    tk.expect("2trg")
    g0 = _parse_graph(tk)
    g1 = _parse_graph(tk)
    f0 = _parse_bits(tk, g0.n, g1.n)
    f1 = _parse_bits(tk, g1.n, g0.n)
    return TwoTokensGame(g0, g1, f0, f1)


def format_2trg(t: TwoTokensGame) -> str:
    lines = ["2trg"] + _format_graph(t.g0) + _format_graph(t.g1)
    lines += _format_bits(t.final0) + _format_bits(t.final1)
    return "\n".join(lines) + "\n"


# matrices


def parse_matrix(tk: Tokens, kind: str | None = None) -> np.ndarray:
    head = tk.next("matrix header")
    if head not in ("bool", "num") or (kind is not None and head != kind):
        tk.pos -= 1
        raise tk.error(f"expected {kind or 'bool or num'} matrix, got {head!r}")
    r = tk.integer("row count")
    c = tk.integer("column count")
    if head == "bool":
        return _parse_bits(tk, r, c)
    return np.array([[tk.number("entry") for _ in range(c)] for _ in range(r)],
                    dtype=np.float64).reshape(r, c)


def format_matrix(a) -> str:
    a = np.asarray(a)
    if a.dtype == bool:
        body = _format_bits(a)
        head = "bool"
    else:
        body = [" ".join(_fmt_num(x) for x in row) for row in a.astype(np.float64)]
        head = "num"
    return "\n".join([f"{head} {a.shape[0]} {a.shape[1]}"] + body) + "\n"


# certificates


def parse_certificate(tk: Tokens) -> AcyclicCertificate | CyclicCertificate:
    tk.expect("cert")
    case = tk.next("certificate case")
    if case not in ("acyclic", "cyclic"):
        tk.pos -= 1
        raise tk.error(f"unknown certificate case {case!r}")
    player = tk.integer("player", 0, 2)
    if case == "acyclic":
        claimed = (parse_matrix(tk, "bool"), parse_matrix(tk, "bool"))
        products = (parse_matrix(tk, "num"), parse_matrix(tk, "num"))
        for p in products:
            if not (np.all(np.isfinite(p)) and np.all(p == np.round(p))):
                raise tk.error("product entries must be finite integers")
        return AcyclicCertificate(player, claimed, tuple(p.astype(np.int64) for p in products))
    return CyclicCertificate(player, (parse_matrix(tk, "num"), parse_matrix(tk, "num")))


def format_certificate(cert) -> str:
    if isinstance(cert, AcyclicCertificate):
        parts = [f"cert acyclic {cert.player}\n"]
        parts += [format_matrix(np.asarray(b, dtype=bool)) for b in cert.claimed]
        parts += [format_matrix(np.asarray(p, dtype=np.float64)) for p in cert.products]
    else:
        parts = [f"cert cyclic {cert.player}\n"]
        parts += [format_matrix(np.asarray(p, dtype=np.float64)) for p in cert.potentials]
    return "".join(parts)


def load(path, parser, *args):
    tk = read_text(path)
    obj = parser(tk, *args)
    tk.end()
    return obj
