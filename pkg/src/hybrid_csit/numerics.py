"""Complex linear algebra in two modes: exact Gaussian rationals or floats.

A matrix here is a plain 2-D :class:`numpy.ndarray`.  Exact matrices have
``dtype=object`` and hold :class:`CRational` entries; float matrices are
``complex128``.  Integer arrays are accepted wherever an exact matrix is and
are promoted on the way in.  Mixing the two modes in one matrix is rejected.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateProjector, InvalidInput

#: Relative singular-value threshold for float-mode rank decisions.
TOL_REL = 1e-9


class Mode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class CRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, CRational):
            re, im = re.re, re.im + Fraction(im)
        elif isinstance(re, complex):
            raise InvalidInput("float complex values cannot enter exact mode")
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "CRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def __repr__(self) -> str:
        return f"CRational({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}j)"

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other) -> bool:
        if isinstance(other, CRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.re == other and not self.im
        return NotImplemented

    def conjugate(self) -> "CRational":
        return CRational._raw(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __neg__(self) -> "CRational":
        return CRational._raw(-self.re, -self.im)

    def __pos__(self) -> "CRational":
        return self

    def __add__(self, other):
        if isinstance(other, CRational):
            return CRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return CRational._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, CRational):
            return CRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return CRational._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return CRational._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, CRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return CRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, Rational):
            return CRational._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            other = CRational._raw(Fraction(other), Fraction(0))
        if not isinstance(other, CRational):
            return NotImplemented
        den = other.abs2()
        if not den:
            raise ZeroDivisionError("CRational division by zero")
        a, b, c, d = self.re, self.im, other.re, other.im
        return CRational._raw((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return CRational._raw(Fraction(other), Fraction(0)) / self
        return NotImplemented


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, Rational)):
        return Fraction(x)
    raise InvalidInput(f"cannot represent {x!r} exactly")


ZERO = CRational()
ONE = CRational(1)


def to_exact(x) -> CRational:
    """Convert an int, Fraction, string or CRational to a CRational."""
    if isinstance(x, CRational):
        return x
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return CRational(x[0], x[1])
    if isinstance(x, (bool, np.bool_)):
        raise InvalidInput("booleans are not matrix entries")
    if isinstance(x, (np.integer,)):
        return CRational(int(x))
    if isinstance(x, (float, complex, np.floating, np.complexfloating)):
        raise InvalidInput(f"float value {x!r} cannot enter exact mode")
    return CRational(x)


def exact_matrix(data) -> np.ndarray:
    """Build an exact matrix from nested ints / Fractions / ``"p/q"`` strings."""
    arr = np.asarray(data, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        # [[re, im], ...] pairs
        out = np.empty(arr.shape[:2], dtype=object)
        for idx in np.ndindex(out.shape):
            out[idx] = CRational(arr[idx][0], arr[idx][1])
        return out
    if arr.ndim != 2:
        raise InvalidInput("matrix must be 2-D")
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = to_exact(arr[idx])
    return out


def float_matrix(data) -> np.ndarray:
    arr = np.asarray(data)
    if arr.dtype == object:
        arr = np.vectorize(complex, otypes=[complex])(arr)
    arr = arr.astype(complex)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InvalidInput("matrix must be 2-D")
    return arr


def mode_of(m: np.ndarray) -> Mode:
    """Return the arithmetic mode of ``m``; reject mixed object arrays."""
    m = np.asarray(m)
    if m.dtype == object:
        if not all(isinstance(x, CRational) for x in m.flat):
            raise InvalidInput("exact matrix holds non-CRational entries (mixed modes)")
        return Mode.EXACT
    if np.issubdtype(m.dtype, np.integer):
        return Mode.EXACT
    if np.issubdtype(m.dtype, np.inexact):
        return Mode.FLOAT
    raise InvalidInput(f"unsupported matrix dtype {m.dtype}")


def _coerce(m) -> tuple[np.ndarray, Mode]:
    m = np.asarray(m)
    mode = mode_of(m)
    if mode is Mode.EXACT and m.dtype != object:
        m = exact_matrix(m)
    return m, mode


def zeros(shape, mode: Mode) -> np.ndarray:
    if mode is Mode.EXACT:
        return np.full(shape, ZERO, dtype=object)
    return np.zeros(shape, dtype=complex)


def eye(n: int, mode: Mode) -> np.ndarray:
    out = zeros((n, n), mode)
    for i in range(n):
        out[i, i] = ONE if mode is Mode.EXACT else 1.0
    return out


def conj_t(m: np.ndarray) -> np.ndarray:
    """Hermitian (conjugate) transpose."""
    m = np.asarray(m)
    if m.dtype == object:
        return np.vectorize(CRational.conjugate, otypes=[object])(m.T) if m.size else m.T.copy()
    return m.conj().T


def is_zero(m: np.ndarray) -> bool:
    """True when every entry is exactly zero (exact) or literally 0.0 (float)."""
    return not any(bool(x) for x in np.asarray(m).flat)


def frobenius2(m: np.ndarray) -> float:
    """Squared Frobenius norm as a float."""
    m = np.asarray(m)
    if m.dtype == object:
        return float(sum((x.abs2() for x in m.flat), Fraction(0)))
    return float(np.sum(np.abs(m) ** 2))


# -- exact elimination over the Gaussian integers -------------------------


def _gaussian_int_rows(m: np.ndarray) -> list[list[tuple[int, int]]]:
    """Scale each row by its common denominator so entries become Z[i]."""
    rows = []
    for row in m:
        den = 1
        for x in row:
            den = lcm(den, x.re.denominator, x.im.denominator)
        rows.append([
            (x.re.numerator * (den // x.re.denominator), x.im.numerator * (den // x.im.denominator))
            for x in row
        ])
    return rows


def _bareiss(rows: list[list[tuple[int, int]]]) -> list[int]:
    """Fraction-free echelon reduction in place; return the pivot columns.

    Every intermediate entry is a minor of the input, so the division by
    the previous pivot is exact in Z[i].
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    prev = (1, 0)
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        for i in range(r, n_rows):
            if rows[i][c] != (0, 0):
                break
        else:
            continue
        if i != r:
            rows[r], rows[i] = rows[i], rows[r]
        pr, pi = rows[r][c]
        qr, qi = prev
        qn = qr * qr + qi * qi
        piv_row = rows[r]
        for i in range(r + 1, n_rows):
            row = rows[i]
            fr, fi = row[c]
            for j in range(c + 1, n_cols):
                xr, xi = row[j]
                yr, yi = piv_row[j]
                # (p*x - f*y) / prev
                nr = pr * xr - pi * xi - (fr * yr - fi * yi)
                ni = pr * xi + pi * xr - (fr * yi + fi * yr)
                if qn != 1:
                    # multiply by conj(prev) then divide by |prev|^2
                    nr, ni = nr * qr + ni * qi, ni * qr - nr * qi
                    nr //= qn
                    ni //= qn
                elif (qr, qi) != (1, 0):
                    nr, ni = nr * qr + ni * qi, ni * qr - nr * qi
                row[j] = (nr, ni)
            row[c] = (0, 0)
        prev = (pr, pi)
        pivots.append(c)
        r += 1
    return pivots


def _pivot_columns(m: np.ndarray) -> list[int]:
    """Pivot columns of an exact matrix (first maximal independent set)."""
    if m.shape[0] == 0 or m.shape[1] == 0:
        return []
    return _bareiss(_gaussian_int_rows(m))


def _float_rank(m: np.ndarray, tol_rel: float, scale: float | None = None) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    ref = s[0] if scale is None else scale
    if ref == 0.0:
        return 0
    return int(np.sum(s > tol_rel * ref))


def spectral_norm(m: np.ndarray) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)[0])


def rank(m, tol_rel: float = TOL_REL, scale: float | None = None) -> int:
    """Rank of ``m``.

    Exact mode uses fraction-free Gaussian elimination; float mode counts
    singular values above ``tol_rel`` times ``scale`` (default: the largest
    singular value of ``m``).  Pass the parent matrix's norm as ``scale``
    when ranking a submatrix, so numerically-zero columns stay zero.
    """
    m, mode = _coerce(m)
    if m.ndim != 2 or m.size == 0:
        raise InvalidInput("rank of an empty matrix is undefined")
    if mode is Mode.EXACT:
        return len(_pivot_columns(m))
    return _float_rank(m, tol_rel, scale)


def _rank_allow_empty(m: np.ndarray, mode: Mode, tol_rel: float = TOL_REL,
                      scale: float | None = None) -> int:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    if mode is Mode.EXACT:
        return len(_pivot_columns(m))
    return _float_rank(m, tol_rel, scale)


def independent_rows(m: np.ndarray, tol_rel: float = TOL_REL) -> list[int]:
    """Indices of a maximal linearly independent subset of the rows."""
    m, mode = _coerce(m)
    if m.shape[0] == 0:
        return []
    if mode is Mode.EXACT:
        return _pivot_columns(m.T)
    keep: list[int] = []
    for i in range(m.shape[0]):
        if _float_rank(m[keep + [i]], tol_rel) == len(keep) + 1:
            keep.append(i)
    return keep


def inv(m: np.ndarray) -> np.ndarray:
    """Inverse of a square nonsingular matrix (Gauss-Jordan when exact)."""
    m, mode = _coerce(m)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n or n == 0:
        raise InvalidInput("inverse needs a nonempty square matrix")
    if mode is Mode.FLOAT:
        return np.linalg.inv(m)
    a = [list(row) + list(e) for row, e in zip(m, eye(n, Mode.EXACT))]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            f = a[i][c]
            if i != c and f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        out[i, :] = a[i][n:]
    return out


def orth_projector(rows: Sequence, M: int, tol_rel: float = TOL_REL) -> np.ndarray:
    """Hermitian idempotent projector onto the orthogonal complement of ``rows``.

    Returns ``P = I - H^H (H H^H)^{-1} H`` where ``H`` stacks a maximal
    independent subset of the supplied ``1 x M`` rows, so ``h @ P == 0`` for
    every supplied ``h``.

    Raises
    ------
    DegenerateProjector
        If the rows span all of ``C^M``.
    """
    if len(rows) == 0:
        raise InvalidInput("orth_projector needs at least one row")
    stacked = [np.asarray(r).reshape(-1) for r in rows]
    if any(r.shape[0] != M for r in stacked):
        raise InvalidInput(f"every row must have length {M}")
    H, mode = _coerce(np.vstack(stacked))
    keep = independent_rows(H, tol_rel)
    if len(keep) >= M:
        raise DegenerateProjector(f"rows span C^{M}; no orthogonal direction")
    if not keep:
        return eye(M, mode)
    H = H[keep]
    Hh = conj_t(H)
    return eye(M, mode) - Hh @ inv(H @ Hh) @ H


def solve_zero_forcer(G, desired: Iterable[int], tol_rel: float = TOL_REL):
    """Minimum-norm linear filter isolating the ``desired`` columns of ``G``.

    Returns ``W`` (``|D| x n``) with ``W @ G[:, D] == I`` and
    ``W @ G[:, ~D] == 0``, or ``None`` when no such filter exists, which is
    exactly when ``rank(G) != rank(G[:, ~D]) + |D|``.
    """
    G, mode = _coerce(G)
    n, S = G.shape
    D = list(desired)
    if len(set(D)) != len(D) or any(not 0 <= d < S for d in D):
        raise InvalidInput("desired columns must be distinct column indices")
    if not D:
        return zeros((0, n), mode)
    rest = [j for j in range(S) if j not in set(D)]
    G_rest = G[:, rest]
    scale = None if mode is Mode.EXACT else spectral_norm(G)
    r_rest = _rank_allow_empty(G_rest, mode, tol_rel, scale)
    if _rank_allow_empty(G, mode, tol_rel, scale) != r_rest + len(D):
        return None
    # Project observations onto the complement of the interference span.
    if mode is Mode.FLOAT:
        U = np.linalg.svd(G_rest, full_matrices=False)[0][:, :r_rest] if r_rest else np.zeros((n, 0))
        G_eff = G[:, D] - U @ (U.conj().T @ G[:, D])
        return np.linalg.pinv(G_eff)
    if r_rest:
        Pi = orth_projector(list(conj_t(G_rest)), n, tol_rel)
    else:
        Pi = eye(n, mode)
    G_eff = Pi @ G[:, D]
    Gh = conj_t(G_eff)
    return inv(Gh @ G_eff) @ Gh
