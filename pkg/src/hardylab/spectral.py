"""Linear-algebra cross-check of the inequality on a finite window.

Restricted to sequences supported in ``{1..M}`` (Dirichlet truncation),
``D(u) - W(u) = u^* A u`` with ``A`` the symmetric tridiagonal matrix of
diagonal ``2 - w_n`` and off-diagonal ``-1``.  For the KPP weight
``A = C^T C`` with ``C`` the ``M x M`` lower bidiagonal matrix whose row
for index ``n = 2..M+1`` holds ``-b_n`` in column ``n-1`` and ``a_n`` in
column ``n``.  The smallest eigenvalue of ``A`` is located by Sturm
counting and bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ChainViolation, ConsistencyError, ValidationError
from .forms import remainder_coefficients
from .sequences import Sequence
from .weights import KPP, WeightTable, weight_value

__all__ = [
    "TridiagonalForm", "BidiagonalFactor", "build_form", "build_factor",
    "factorization_residual", "sturm_count", "smallest_eigenvalue",
    "FACTORIZATION_ULPS",
]

FACTORIZATION_ULPS = 8


@dataclass(frozen=True, eq=False)
class TridiagonalForm:
    """``diagonal[i]`` is the entry for index ``n = i + 1``."""

    diagonal: np.ndarray
    offdiagonal: np.ndarray
    table: WeightTable

    @property
    def size(self) -> int:
        return len(self.diagonal)

    def dense(self) -> np.ndarray:
        return (np.diag(self.diagonal) + np.diag(self.offdiagonal, 1)
                + np.diag(self.offdiagonal, -1))

    def quadratic(self, u: Sequence) -> float:
        """``u^* A u`` for ``u`` supported in ``{1..M}``."""
        if u.max_index > self.size:
            raise ValidationError(
                f"sequence support reaches {u.max_index}, form has size {self.size}")
        x = np.zeros(self.size, dtype=complex)
        for n, v in u.items():
            x[n - 1] = complex(v)
        ax = self.diagonal * x
        ax[:-1] += self.offdiagonal * x[1:]
        ax[1:] += self.offdiagonal * x[:-1]
        return float(np.vdot(x, ax).real)


@dataclass(frozen=True, eq=False)
class BidiagonalFactor:
    """``a[i] = a_{i+1}`` (``a[0]`` unused, 0) and ``b[i] = b_{i+2}``."""

    a: np.ndarray
    b: np.ndarray

    @property
    def size(self) -> int:
        return len(self.a)

    def dense(self) -> np.ndarray:
        M = self.size
        C = np.zeros((M, M))
        for i in range(M):
            # row for index n = i + 2
            C[i, i] = -self.b[i]
            if i + 1 < M:
                C[i, i + 1] = self.a[i + 1]
        return C

    def gram(self):
        """Diagonal and off-diagonal of ``C^T C`` without forming ``C``."""
        a2 = self.a * self.a
        diag = a2 + self.b * self.b
        off = -self.b[:-1] * self.a[1:]
        return diag, off


def build_form(M: int, table: WeightTable = KPP) -> TridiagonalForm:
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    d = np.array([2.0 - float(weight_value(table, n)) for n in range(1, M + 1)])
    return TridiagonalForm(d, -np.ones(M - 1), table)


def build_factor(M: int) -> BidiagonalFactor:
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    a = np.zeros(M)
    b = np.zeros(M)
    for n in range(2, M + 2):
        an, bn = remainder_coefficients(n)
        if n <= M:
            a[n - 1] = an
        b[n - 2] = bn
    return BidiagonalFactor(a, b)


def factorization_residual(M: int, check: bool = True) -> float:
    """Max entrywise ``|A - C^T C|`` for the KPP form of size ``M``.

    With ``check`` the residual must not exceed :data:`FACTORIZATION_ULPS`
    ulps of the largest entry; a :class:`ChainViolation` is raised otherwise.
    """
    form = build_form(M, KPP)
    diag, off = build_factor(M).gram()
    res = float(np.max(np.abs(form.diagonal - diag)))
    if M > 1:
        res = max(res, float(np.max(np.abs(form.offdiagonal - off))))
    if check:
        scale = max(float(np.max(np.abs(form.diagonal))), 1.0)
        limit = FACTORIZATION_ULPS * math.ulp(scale)
        if res > limit:
            raise ChainViolation(
                f"factorization residual {res:.3e} exceeds {FACTORIZATION_ULPS} ulp ({limit:.3e})")
    return res


def sturm_count(diagonal, off_squared, x: float) -> int:
    """Number of eigenvalues strictly below ``x``.

    Counts negative pivots of the LDL^T factorisation of ``A - x I``.
    """
    count = 0
    q = diagonal[0] - x
    tiny = 1e-300
    if q == 0.0:
        q = -tiny
    if q < 0:
        count += 1
    for i in range(1, len(diagonal)):
        q = (diagonal[i] - x) - off_squared[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def smallest_eigenvalue(form: TridiagonalForm, tol: float = 1e-12) -> float:
    """Smallest eigenvalue of ``form`` to absolute accuracy ``tol``."""
    if not tol > 0:
        raise ValidationError("tol must be positive")
    d = form.diagonal.tolist()
    e2 = (form.offdiagonal * form.offdiagonal).tolist()
    if len(d) == 1:
        return d[0]
    radius = 2.0 * float(np.max(np.abs(form.offdiagonal)))
    lo = min(d) - radius
    hi = max(d) + radius
    # widen by a hair so rounding cannot push an eigenvalue onto the bracket ends
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    lo -= pad
    hi += pad
    if sturm_count(d, e2, lo) != 0 or sturm_count(d, e2, hi) < 1:
        raise ConsistencyError("Gershgorin interval does not bracket the spectrum")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sturm_count(d, e2, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
