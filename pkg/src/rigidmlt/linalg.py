"""Exact rational and modular linear algebra.

Everything here works on plain Python lists of ints or ``Fraction``s.  The
matrices in this package are small (a few dozen rows and columns), so dense
elimination in pure Python is fast enough and keeps every result exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

# Three fixed 61-bit primes (2**61 - 1 and the next two primes below it).
PRIMES: tuple[int, ...] = (
    2305843009213693951,
    2305843009213693921,
    2305843009213693907,
)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=64)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalMatrix:
    """Dense matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(_as_fraction(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.cols, self._data))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix([[-x for x in r] for r in self._data], cols=self.cols)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
            cols=self.cols,
        )

    def scale(self, c) -> "RationalMatrix":
        c = _as_fraction(c)
        return RationalMatrix([[c * x for x in r] for r in self._data], cols=self.cols)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            ot = other.transpose()._data
            return RationalMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ot] for r in self._data],
                cols=other.cols,
            )
        vec = [_as_fraction(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self._data)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        d = self._data
        return all(d[i][j] == d[j][i] for i in range(self.rows) for j in range(i))

    def is_zero(self) -> bool:
        return not any(x for r in self._data for x in r)

    def integer_rows(self) -> list[list[int]]:
        """Rows scaled by their denominators' lcm; same row space, same kernel."""
        out = []
        for r in self._data:
            den = reduce(lcm, (x.denominator for x in r), 1)
            out.append([int(x * den) for x in r])
        return out

    def rank(self) -> int:
        return integer_rank(self.integer_rows(), self.cols)

    def kernel(self) -> list[tuple[Fraction, ...]]:
        return kernel_rational(self)


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def rank_mod_p(m: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix over GF(p)."""
    _check_prime(p)
    rows = [[x % p for x in r] for r in m]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col], p - 2, p)
        prow = [x * inv % p for x in prow]
        rows[rank] = prow
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def integer_rank(m: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    """Exact rank over Q of an integer matrix (fraction-free Bareiss elimination)."""
    a = [list(r) for r in m if any(r)]
    if not a:
        return 0
    ncols = len(a[0]) if ncols is None else ncols
    prev = 1
    rank = 0
    nrows = len(a)
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        pv = pr[col]
        for i in range(rank + 1, nrows):
            ri = a[i]
            f = ri[col]
            a[i] = [(pv * x - f * y) // prev for x, y in zip(ri, pr)]
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def _gauss_jordan_ff(a: list[list[int]], ncols: int) -> tuple[list[int], int]:
    """In-place fraction-free Gauss-Jordan.

    On return the first ``len(pivots)`` rows are the reduced rows; every pivot
    entry equals the returned common value and other pivot columns are zero.
    """
    prev = 1
    pivots: list[int] = []
    nrows = len(a)
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pv = pr[col]
        for i in range(nrows):
            if i == r:
                continue
            ri = a[i]
            f = ri[col]
            a[i] = [(pv * x - f * y) // prev for x, y in zip(ri, pr)]
        prev = pv
        pivots.append(col)
        r += 1
    return pivots, prev


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Primitive integer basis of the right kernel of an integer matrix."""
    a = [list(r) for r in m if any(r)]
    if not a:
        basis = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
        return basis
    pivots, det = _gauss_jordan_ff(a, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        v[f] = det
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        g = reduce(gcd, v, 0)
        if g > 1:
            v = [x // g for x in v]
        basis.append(v)
    return basis


def kernel_rational(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel; each vector is exactly annihilated by ``m``."""
    basis = integer_kernel(m.integer_rows(), m.cols)
    out = [tuple(Fraction(x) for x in v) for v in basis]
    for v in out:
        if any(m @ v):
            raise ArithmeticError("kernel vector failed exact verification")
    return out


@dataclass(frozen=True)
class SymmetricDecomposition:
    """Inertia of a real symmetric matrix."""

    n_plus: int
    n_minus: int
    n_zero: int

    @property
    def rank(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def dimension(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero

    @property
    def psd(self) -> bool:
        return self.n_minus == 0

    @property
    def signature(self) -> tuple[int, int, int]:
        return self.n_plus, self.n_minus, self.n_zero


def symmetric_inertia(m: RationalMatrix) -> SymmetricDecomposition:
    """Exact inertia by symmetric LDL^T with 1x1 and 2x2 pivots.

    A nonzero diagonal entry is eliminated as a 1x1 pivot.  When the remaining
    diagonal is entirely zero but an off-diagonal entry b is not, the 2x2 block
    [[0, b], [b, 0]] is eliminated instead; it contributes one positive and one
    negative eigenvalue.  Sylvester's law of inertia makes the counts exact.
    """
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")
    n = m.rows
    a = m.tolist()
    active = list(range(n))
    pos = neg = 0
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is not None:
            d = a[i][i]
            if d > 0:
                pos += 1
            else:
                neg += 1
            active.remove(i)
            col = {k: a[k][i] for k in active if a[k][i] != 0}
            for s, asi in col.items():
                f = asi / d
                row_s = a[s]
                for t in active:
                    ait = a[i][t]
                    if ait:
                        row_s[t] -= f * ait
            continue
        pair = next(
            ((j, k) for idx, j in enumerate(active) for k in active[idx + 1:] if a[j][k] != 0),
            None,
        )
        if pair is None:
            break
        j, k = pair
        b = a[j][k]
        pos += 1
        neg += 1
        active.remove(j)
        active.remove(k)
        # Schur complement of [[0, b], [b, 0]]; its inverse is [[0, 1/b], [1/b, 0]].
        cj = {s: a[s][j] for s in active}
        ck = {s: a[s][k] for s in active}
        for s in active:
            for t in active:
                delta = cj[s] * ck[t] + ck[s] * cj[t]
                if delta:
                    a[s][t] -= delta / b
    return SymmetricDecomposition(pos, neg, n - pos - neg)


def inverse(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan over Q; raises ZeroDivisionError if singular."""
    n = m.rows
    if n != m.cols:
        raise ValueError("inverse of a non-square matrix")
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.tolist())]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return RationalMatrix([r[n:] for r in a], cols=n)
