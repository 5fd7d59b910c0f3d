"""Boolean and numeric matrix kernels.

Numeric matrices are float64 arrays; finite entries are integers and
``np.inf`` / ``-np.inf`` are the two sentinels.  Boolean matrices are
``BoolMatrix`` values (row-major, bit-packed into 64-bit words) or plain
boolean arrays, which every kernel accepts.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

WORD = 64
STRASSEN_CUTOFF = 64

# incremented by every bmm / msbmm call; tests use it to count products
kernel_calls: Counter = Counter()


class BoolMatrix:
    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        self.rows = int(rows)
        self.cols = int(cols)
        self.words = words

    @classmethod
    def from_dense(cls, a) -> BoolMatrix:
        a = np.asarray(a, dtype=bool)
        if a.ndim != 2:
            raise ValueError("boolean matrix must be 2-dimensional")
        rows, cols = a.shape
        nwords = -(-cols // WORD)
        packed = np.packbits(a, axis=1, bitorder="little")
        buf = np.zeros((rows, nwords * 8), dtype=np.uint8)
        buf[:, :packed.shape[1]] = packed
        return cls(rows, cols, buf.view("<u8").reshape(rows, nwords).astype(np.uint64))

    @classmethod
    def identity(cls, n: int) -> BoolMatrix:
        return cls.from_dense(np.eye(n, dtype=bool))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        bytes_ = self.words.astype("<u8").view(np.uint8).reshape(self.rows, self.words.shape[1] * 8)
        return np.unpackbits(bytes_, axis=1, count=self.cols, bitorder="little").astype(bool)

    def transpose(self) -> BoolMatrix:
        return BoolMatrix.from_dense(self.to_dense().T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoolMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __repr__(self) -> str:
        return f"BoolMatrix({self.rows}x{self.cols})"


def as_bool(a) -> np.ndarray:
    if isinstance(a, BoolMatrix):
        return a.to_dense()
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    return a.astype(bool)


def as_num(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    return a


def _check_inner(s1, s2) -> None:
    if s1[1] != s2[0]:
        raise ValueError(f"inner dimensions disagree: {s1} x {s2}")


def _bmm_naive(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # entry by entry, straight from the definition: or_k a[i,k] and b[k,j]
    bt = np.ascontiguousarray(b.T)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=bool)
    for i in range(a.shape[0]):
        row = a[i]
        for j in range(b.shape[1]):
            out[i, j] = np.any(row & bt[j])
    return out


def _bmm_bitpacked(a: BoolMatrix, b: BoolMatrix) -> np.ndarray:
    # transpose once so both operands are packed along the inner dimension,
    # then AND word by word and OR-accumulate
    bt = b.transpose().words
    aw = a.words
    acc = np.zeros((a.rows, b.cols), dtype=np.uint64)
    for w in range(aw.shape[1]):
        acc |= aw[:, w, None] & bt[None, :, w]
    return acc != 0


def _strassen(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n1, n2 = a.shape
    n3 = b.shape[1]
    if min(n1, n2, n3) <= STRASSEN_CUTOFF:
        return a @ b
    h1, h2, h3 = -(-n1 // 2), -(-n2 // 2), -(-n3 // 2)
    ap = np.zeros((2 * h1, 2 * h2), dtype=a.dtype)
    bp = np.zeros((2 * h2, 2 * h3), dtype=b.dtype)
    ap[:n1, :n2] = a
    bp[:n2, :n3] = b
    a11, a12, a21, a22 = ap[:h1, :h2], ap[:h1, h2:], ap[h1:, :h2], ap[h1:, h2:]
    b11, b12, b21, b22 = bp[:h2, :h3], bp[:h2, h3:], bp[h2:, :h3], bp[h2:, h3:]
    m1 = _strassen(a11 + a22, b11 + b22)
    m2 = _strassen(a21 + a22, b11)
    m3 = _strassen(a11, b12 - b22)
    m4 = _strassen(a22, b21 - b11)
    m5 = _strassen(a11 + a12, b22)
    m6 = _strassen(a21 - a11, b11 + b12)
    m7 = _strassen(a12 - a22, b21 + b22)
    c = np.empty((2 * h1, 2 * h3), dtype=a.dtype)
    c[:h1, :h3] = m1 + m4 - m5 + m7
    c[:h1, h3:] = m3 + m5
    c[h1:, :h3] = m2 + m4
    c[h1:, h3:] = m1 - m2 + m3 + m6
    return c[:n1, :n3]


BMM_BACKENDS = ("naive", "bitpacked", "strassen_int")


def bmm(b1, b2, backend: str = "bitpacked") -> BoolMatrix:
    """Boolean product over (or, and)."""
    kernel_calls["bmm"] += 1
    x = b1 if isinstance(b1, BoolMatrix) else BoolMatrix.from_dense(as_bool(b1))
    y = b2 if isinstance(b2, BoolMatrix) else BoolMatrix.from_dense(as_bool(b2))
    _check_inner(x.shape, y.shape)
    if backend == "naive":
        out = _bmm_naive(x.to_dense(), y.to_dense())
    elif backend == "bitpacked":
        out = _bmm_bitpacked(x, y)
    elif backend == "strassen_int":
        out = _strassen(x.to_dense().astype(np.int64), y.to_dense().astype(np.int64)) > 0
    else:
        raise ValueError(f"unknown bmm backend {backend!r}")
    return BoolMatrix.from_dense(out)


def _as_int(a, name: str) -> np.ndarray:
    a = as_bool(a).astype(np.int64) if isinstance(a, BoolMatrix) else np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional")
    if a.dtype.kind == "f":
        if not np.all(np.isfinite(a)):
            raise ValueError(f"{name} has infinite entries")
        if not np.all(a == np.round(a)):
            raise ValueError(f"{name} has non-integer entries")
    return a.astype(np.int64)


def int_product(m1, m2) -> np.ndarray:
    """Ordinary (+, x) product of two finite integer matrices."""
    x, y = _as_int(m1, "left factor"), _as_int(m2, "right factor")
    _check_inner(x.shape, y.shape)
    return x @ y


def freivalds_verify(m1, m2, c, rounds: int = 30, seed=None) -> bool:
    """Randomized check of ``m1 @ m2 == c``; never rejects a correct product.

    A wrong ``c`` survives one round with probability at most 1/2.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    x, y, z = _as_int(m1, "left factor"), _as_int(m2, "right factor"), _as_int(c, "product")
    _check_inner(x.shape, y.shape)
    if z.shape != (x.shape[0], y.shape[1]):
        raise ValueError("product has the wrong shape")
    rng = np.random.default_rng(seed)
    for _ in range(rounds):
        r = rng.integers(0, 2, size=y.shape[1], dtype=np.int64)
        if not np.array_equal(x @ (y @ r), z @ r):
            return False
    return True


def msbmm(a, b, mode: str = "max") -> np.ndarray:
    """Semi-boolean product: ``out[i,j]`` = min/max of ``a[i,k]`` over ``b[k,j]``.

    An empty witness set yields ``+inf`` (min) or ``-inf`` (max).
    """
    kernel_calls["msbmm"] += 1
    a, b = as_num(a), as_bool(b)
    _check_inner(a.shape, b.shape)
    if mode == "max":
        fill, reduce = -np.inf, np.max
    elif mode == "min":
        fill, reduce = np.inf, np.min
    else:
        raise ValueError(f"unknown msbmm mode {mode!r}")
    out = np.full((a.shape[0], b.shape[1]), fill)
    for j in range(b.shape[1]):
        ks = np.flatnonzero(b[:, j])
        if ks.size:
            out[:, j] = reduce(a[:, ks], axis=1)
    return out


def make_distinct(a) -> np.ndarray:
    """Replace each row by the 1-based ranks of its entries (ties: lower column first)."""
    a = as_num(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("rank transform needs finite entries")
    order = np.argsort(a, axis=1, kind="stable")
    ranks = np.empty_like(a)
    rows = np.arange(a.shape[0])[:, None]
    ranks[rows, order] = np.arange(1, a.shape[1] + 1, dtype=np.float64)[None, :]
    return ranks


def maxmin_product(a, b) -> np.ndarray:
    """(max, min) product with a cubic kernel."""
    a, b = as_num(a), as_num(b)
    _check_inner(a.shape, b.shape)
    out = np.full((a.shape[0], b.shape[1]), -np.inf)
    if a.shape[1] == 0:
        return out
    for i in range(a.shape[0]):
        out[i] = np.minimum(a[i][:, None], b).max(axis=0)
    return out


def msbmm_via_maxmin(a, b) -> np.ndarray:
    """``msbmm(a, b, 'max')`` computed through the (max, min) semiring."""
    b = as_bool(b)
    return maxmin_product(a, np.where(b, np.inf, -np.inf))
