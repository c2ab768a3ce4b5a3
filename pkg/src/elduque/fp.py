"""Exact linear algebra over the prime field GF(p).

All arithmetic is on integer residues in [0, p); there is no floating
point anywhere, so every result is reproducible bit for bit.  Matrices
are immutable once constructed.  Elimination pivots are always the first
nonzero entry in a left-to-right column scan, which pins down reduced
forms, kernel bases and solution vectors across runs and platforms.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SingularMatrix",
    "FpMatrix",
    "identity",
    "zeros",
    "is_prime",
    "inv_scalar",
    "signed_lift",
]


class SingularMatrix(ValueError):
    """Raised when inverting a square matrix of deficient rank."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def inv_scalar(a: int, p: int) -> int:
    """Multiplicative inverse of a nonzero residue mod p."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def signed_lift(a: int, p: int) -> int:
    """The representative of a in (-p/2, p/2]."""
    a %= p
    return a if a <= p // 2 else a - p


def _check_same_p(a: "FpMatrix", b: "FpMatrix") -> None:
    if a.p != b.p:
        raise ValueError(f"mixed moduli: {a.p} vs {b.p}")


class FpMatrix:
    """Immutable dense matrix of residues mod a prime p.

    Entries may be supplied as arbitrary integers (negative values are
    fine); they are normalized into [0, p) on construction.
    """

    __slots__ = ("p", "_a")

    def __init__(self, p: int, entries: Iterable) -> None:
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        object.__setattr__(self, "p", int(p))
        a = np.array(entries, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise ValueError("entries must form a 2-d array")
        a = a % p
        a.setflags(write=False)
        object.__setattr__(self, "_a", a)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("FpMatrix is immutable")

    # -- basic shape / access ------------------------------------------

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only int64 view of the residues."""
        return self._a

    def __getitem__(self, idx) -> int:
        i, j = idx
        return int(self._a[i, j])

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a[i])

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def signed_rows(self) -> tuple[tuple[int, ...], ...]:
        """Rows with entries lifted to (-p/2, p/2], for display."""
        return tuple(
            tuple(signed_lift(int(x), self.p) for x in r) for r in self._a
        )

    # -- identity -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self._a.shape == other._a.shape and bool(
            (self._a == other._a).all()
        )

    def __hash__(self) -> int:
        return hash((self.p, self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"

    # -- arithmetic -----------------------------------------------------

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        _check_same_p(self, other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        return FpMatrix(self.p, (self._a @ other._a) % self.p)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product, returning a residue tuple."""
        v = np.asarray(vec, dtype=np.int64)
        if v.shape != (self.cols,):
            raise ValueError("vector length mismatch")
        return tuple(int(x) for x in (self._a @ v) % self.p)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self._a.T)

    # -- elimination ----------------------------------------------------

    def rref(self) -> tuple["FpMatrix", tuple[int, ...]]:
        """Reduced row echelon form and its pivot columns."""
        r, piv = _rref(self._a, self.p)
        return FpMatrix(self.p, r), tuple(piv)

    def rank(self) -> int:
        return len(_rref(self._a, self.p)[1])

    def kernel_basis(self) -> list[tuple[int, ...]]:
        """Basis of the right null space {v : M v = 0}.

        One vector per free column, in ascending column order; the free
        coordinate of each vector is 1.
        """
        r, piv = _rref(self._a, self.p)
        p = self.p
        free = [c for c in range(self.cols) if c not in piv]
        basis = []
        for fc in free:
            v = np.zeros(self.cols, dtype=np.int64)
            v[fc] = 1
            for t, pc in enumerate(piv):
                v[pc] = (-r[t, fc]) % p
            basis.append(tuple(int(x) for x in v))
        return basis

    def invert(self) -> "FpMatrix":
        """Inverse matrix; raises SingularMatrix if rank is deficient."""
        if self.rows != self.cols:
            raise SingularMatrix("only square matrices can be inverted")
        n = self.rows
        aug = np.concatenate([self._a, np.eye(n, dtype=np.int64)], axis=1)
        r, piv = _rref(aug, self.p)
        if list(piv) != list(range(n)):
            raise SingularMatrix(f"matrix is singular mod {self.p}")
        return FpMatrix(self.p, r[:, n:])

    def solve(self, b: Sequence[int]) -> tuple[int, ...] | None:
        """One solution x of M x = b, or None if the system is inconsistent.

        Free coordinates are set to 0, so the answer is deterministic.
        """
        v = np.asarray(b, dtype=np.int64).reshape(-1, 1) % self.p
        if v.shape[0] != self.rows:
            raise ValueError("right-hand side length mismatch")
        aug = np.concatenate([self._a, v], axis=1)
        r, piv = _rref(aug, self.p)
        if self.cols in piv:
            return None
        x = np.zeros(self.cols, dtype=np.int64)
        for t, pc in enumerate(piv):
            x[pc] = r[t, self.cols]
        return tuple(int(e) for e in x)


def _rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pr = -1
        for i in range(r, m):
            if a[i, c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        for i in range(m):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def identity(p: int, n: int) -> FpMatrix:
    return FpMatrix(p, np.eye(n, dtype=np.int64))


def zeros(p: int, rows: int, cols: int) -> FpMatrix:
    return FpMatrix(p, np.zeros((rows, cols), dtype=np.int64))
