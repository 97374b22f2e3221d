"""Dense exact linear algebra over prime fields.

Two layers live here.  The array layer (``*_mod`` functions) works on plain
``numpy.int64`` arrays holding residues and is what the rest of the package
calls in its inner loops.  ``PrimeField`` and ``PrimeMatrix`` wrap it in an
immutable value type for the public surface.

Pivoting always takes the first nonzero entry, so echelon forms and kernel
bases are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import isprime

MAX_PRIME = 2**31 - 1
_FLOAT_EXACT = 2**53


def as_mod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of residue arrays, reduced mod p."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1] if a.ndim else 1
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        # BLAS in float64 is exact below 2**53.
        out = np.rint(a.astype(np.float64) @ b.astype(np.float64))
        return out.astype(np.int64) % p
    out = (a.astype(object) @ b.astype(object)) % p
    return out.astype(np.int64)


def matpow_mod(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(a.shape[0], dtype=np.int64)
    base = a % p
    while e:
        if e & 1:
            result = matmul_mod(result, base, p)
        e >>= 1
        if e:
            base = matmul_mod(base, base, p)
    return result


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = as_mod(a, p).copy()
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r, c:] = (m[r, c:] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            m[np.ix_(idx, np.arange(c, cols))] = (
                m[np.ix_(idx, np.arange(c, cols))] - np.outer(col[idx], m[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # Eliminate along the shorter side.
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref_mod(a, p)[1])


def nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : a x = 0}; shape (cols, cols - rank)."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref_mod(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, f]) % p
    return basis


def solve_mod(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Some x with a x = b (b may be a matrix), or None if inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    rows, cols = a.shape
    r, pivots = rref_mod(np.hstack([a, b]), p)
    if any(pc >= cols for pc in pivots):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if vec else x


def inv_mod(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    r, pivots = rref_mod(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod p")
    return r[:, n:].copy()


def column_space_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Independent columns spanning the column space, in echelon form."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    r, pivots = rref_mod(a.T, p)
    return r[: len(pivots)].T.copy()


def left_inverse_mod(basis: np.ndarray, p: int) -> np.ndarray:
    """L with L @ basis = I for a full-column-rank basis."""
    n, k = basis.shape
    if k == 0:
        return np.zeros((0, n), dtype=np.int64)
    # Pick k independent rows of basis and invert that square block.
    r, pivots = rref_mod(basis.T, p)
    if len(pivots) != k:
        raise ValueError("basis is not of full column rank")
    block = basis[pivots, :]
    inv = inv_mod(block, p)
    left = np.zeros((k, n), dtype=np.int64)
    left[:, pivots] = inv
    return left


def complement_mod(basis: np.ndarray, p: int) -> list[int]:
    """Standard basis indices completing the columns of basis to a basis."""
    n, k = basis.shape
    current = basis.copy()
    chosen: list[int] = []
    rk = rank_mod(current, p) if k else 0
    for i in range(n):
        if rk == n:
            break
        e = np.zeros((n, 1), dtype=np.int64)
        e[i, 0] = 1
        trial = np.hstack([current, e])
        r2 = rank_mod(trial, p)
        if r2 > rk:
            current, rk = trial, r2
            chosen.append(i)
    return chosen


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not (2 <= self.p <= MAX_PRIME) or not isprime(self.p):
            raise ValueError(f"{self.p} is not a prime in [2, 2^31-1]")

    def inv(self, x: int) -> int:
        return pow(x % self.p, -1, self.p)

    def __call__(self, x: int) -> int:
        return x % self.p


class PrimeMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("field", "_a")

    def __init__(self, field: PrimeField | int, entries: Iterable, shape: Sequence[int] | None = None):
        if isinstance(field, int):
            field = PrimeField(field)
        a = np.array(entries, dtype=np.int64)
        if shape is not None:
            a = a.reshape(tuple(shape))
        if a.ndim == 1 and shape is None:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        a %= field.p
        a.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_a", a)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeMatrix is immutable")

    @classmethod
    def identity(cls, field, n: int) -> "PrimeMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "PrimeMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def array(self) -> np.ndarray:
        return self._a

    def entries(self) -> list[int]:
        return [int(x) for x in self._a.ravel()]

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def _check(self, other: "PrimeMatrix"):
        if other.p != self.p:
            raise ValueError("matrices over different fields")

    def __matmul__(self, other: "PrimeMatrix") -> "PrimeMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return PrimeMatrix(self.field, matmul_mod(self._a, other._a, self.p))

    def __add__(self, other: "PrimeMatrix") -> "PrimeMatrix":
        self._check(other)
        return PrimeMatrix(self.field, self._a + other._a)

    def __sub__(self, other: "PrimeMatrix") -> "PrimeMatrix":
        self._check(other)
        return PrimeMatrix(self.field, self._a - other._a)

    def __neg__(self) -> "PrimeMatrix":
        return PrimeMatrix(self.field, -self._a)

    def scale(self, c: int) -> "PrimeMatrix":
        return PrimeMatrix(self.field, self._a * (c % self.p))

    @property
    def T(self) -> "PrimeMatrix":
        return PrimeMatrix(self.field, self._a.T)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PrimeMatrix)
            and other.p == self.p
            and other.shape == self.shape
            and bool(np.array_equal(other._a, self._a))
        )

    def __hash__(self):
        return hash((self.p, self.shape, self._a.tobytes()))

    def __repr__(self):
        return f"PrimeMatrix(p={self.p}, {self.tolist()})"

    def is_zero(self) -> bool:
        return not self._a.any()


def rank(m: PrimeMatrix) -> int:
    return rank_mod(m.array, m.p)


def kernel_basis(m: PrimeMatrix) -> list[tuple[int, ...]]:
    ns = nullspace_mod(m.array, m.p)
    return [tuple(int(x) for x in ns[:, k]) for k in range(ns.shape[1])]


def solve(m: PrimeMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some x with m x = b, or None when the system is inconsistent."""
    b = np.asarray(b, dtype=np.int64)
    if b.ndim != 1 or b.shape[0] != m.rows:
        raise ValueError(f"right-hand side of length {b.shape} does not match {m.rows} rows")
    x = solve_mod(m.array, b, m.p)
    return None if x is None else tuple(int(v) for v in x)


def kronecker(a: PrimeMatrix, b: PrimeMatrix) -> PrimeMatrix:
    a._check(b)
    return PrimeMatrix(a.field, np.kron(a.array, b.array))
