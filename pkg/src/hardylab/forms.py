"""Quadratic forms on finitely supported sequences.

``D(u)``  Dirichlet energy  sum_{n>=1} |u_n - u_{n-1}|^2
``W(u)``  weighted form     sum_{n>=1} w_n |u_n|^2
``R(u)``  remainder         sum_{n>=2} |a_n u_n - b_n u_{n-1}|^2,
          a_n = ((n-1)/n)^(1/4),  b_n = (n/(n-1))^(1/4)

For the KPP weight ``D = W + R`` holds exactly.  Sums over differences
run up to ``max_index + 1`` so that the last jump back to zero is counted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2

from .errors import IdentityViolation, ValidationError
from .numerics import (
    COMPENSATED, Accumulator, SummationMode, abs2, fourth_root_ratio, sqrt,
    sum_terms, to_complex, to_real,
)
from .sequences import Sequence
from .weights import KPP, WeightTable, h, weight_value

__all__ = [
    "FormReport", "remainder_coefficients", "dirichlet_energy", "weighted_form",
    "remainder_form", "identity_report", "pointwise_identity_residual",
    "pointwise_scale", "pointwise_terms", "summation_by_parts_residual", "hardy_quotient",
    "difference_indices",
]


@dataclass(frozen=True)
class FormReport:
    """``D``, ``W`` (KPP weight), ``R`` and ``residual = D - W - R``.

    The residual is formed in the working precision before rounding to a
    float, so in extended mode it keeps its tiny magnitude.
    """

    dirichlet: float
    weighted: float
    remainder: float
    residual: float
    mode: SummationMode
    support_size: int

    @property
    def bound(self) -> float:
        return self.mode.tolerance * max(self.dirichlet, 1.0)

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.bound


def difference_indices(u: Sequence):
    """Indices ``n`` where ``u_n`` or ``u_{n-1}`` is nonzero, ascending."""
    last = 0
    for n in u.indices:
        if n > last:
            yield n
        yield n + 1
        last = n + 1


@lru_cache(maxsize=1 << 17)
def _coeffs_ext(n, bits):
    mode = SummationMode("extended", bits)
    with mode.context():
        return fourth_root_ratio(n - 1, n, mode), fourth_root_ratio(n, n - 1, mode)


def remainder_coefficients(n: int, mode: SummationMode | None = None):
    """``(a_n, b_n)`` for ``n >= 2``."""
    if n < 2:
        raise ValidationError(f"remainder coefficients start at n=2, got {n}")
    if mode is not None and mode.extended:
        return _coeffs_ext(n, mode.precision_bits)
    return _float_coeffs(n)


def _ext_getter(u, mode):
    table = u.lifted(mode.precision_bits)
    zero = to_real(0, mode)
    return lambda n: table.get(n, zero)


def _float_coeffs(n):
    # a_n, b_n as in fourth_root_ratio, without argument checks
    r = math.sqrt(n - 1) / math.sqrt(n)
    q = math.sqrt(n) / math.sqrt(n - 1)
    return math.sqrt(r), math.sqrt(q)


def dirichlet_energy(u: Sequence, mode: SummationMode = COMPENSATED):
    get = u.get
    if not mode.extended:
        return sum_terms((abs2(get(n) - get(n - 1)) for n in difference_indices(u)), mode)
    get = _ext_getter(u, mode)
    with mode.context():
        return sum_terms((abs2(get(n) - get(n - 1)) for n in difference_indices(u)), mode)


def weighted_form(u: Sequence, table: WeightTable = KPP,
                  mode: SummationMode = COMPENSATED):
    if not mode.extended:
        return sum_terms((weight_value(table, n) * abs2(v) for n, v in u.items()), mode)
    lifted = u.lifted(mode.precision_bits)
    with mode.context():
        return sum_terms(
            (weight_value(table, n, mode) * abs2(lifted[n]) for n in u.indices), mode)


def _remainder_terms(u, mode):
    get = u.get
    if not mode.extended:
        for n in difference_indices(u):
            if n >= 2:
                a, b = _float_coeffs(n)
                yield abs2(a * get(n) - b * get(n - 1))
        return
    get = _ext_getter(u, mode)
    bits = mode.precision_bits
    for n in difference_indices(u):
        if n >= 2:
            a, b = _coeffs_ext(n, bits)
            yield abs2(a * get(n) - b * get(n - 1))


def remainder_form(u: Sequence, mode: SummationMode = COMPENSATED):
    with mode.context():
        return sum_terms(_remainder_terms(u, mode), mode)


def identity_report(u: Sequence, mode: SummationMode = COMPENSATED,
                    check: bool = True) -> FormReport:
    """Evaluate ``D``, ``W``, ``R`` and the residual of ``D = W + R``.

    Raises :class:`IdentityViolation` when the residual exceeds
    ``mode.tolerance * max(D, 1)`` (pass ``check=False`` to skip).
    """
    d = dirichlet_energy(u, mode)
    w = weighted_form(u, KPP, mode)
    r = remainder_form(u, mode)
    with mode.context():
        res = d - w - r
    report = FormReport(float(d), float(w), float(r), float(res), mode, u.support_size)
    if check and not report.passed:
        raise IdentityViolation(
            f"|D - W - R| = {abs(report.residual):.3e} exceeds {report.bound:.3e}", report)
    return report


def pointwise_terms(n: int, u_n, u_prev, mode: SummationMode | None = None):
    """The three terms ``(S, T, D)`` of the single-index identity ``S + T = D``.

    ``S = |sqrt(1 - h_n/sqrt(n)) u_n - sqrt(1 + h_n/sqrt(n-1)) u_prev|^2``,
    ``T = h_n (|u_n|^2/sqrt(n) - |u_prev|^2/sqrt(n-1))`` and
    ``D = |u_n - u_prev|^2``.  At ``n = 1`` every ``u_prev`` term is zero.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if mode is not None and mode.extended:
        with mode.context():
            u = to_complex(u_n, mode)
            hn = h(n, mode)
            rn = sqrt(n, mode)
            c1 = sqrt(1 - hn / rn, mode)
            if n == 1:
                return abs2(c1 * u), hn * abs2(u) / rn, abs2(u)
            v = to_complex(u_prev, mode)
            rm = sqrt(n - 1, mode)
            c2 = sqrt(1 + hn / rm, mode)
            return (abs2(c1 * u - c2 * v), hn * (abs2(u) / rn - abs2(v) / rm),
                    abs2(u - v))
    u = complex(u_n)
    hn = h(n)
    rn = math.sqrt(n)
    c1 = math.sqrt(1.0 - hn / rn)
    if n == 1:
        return abs2(c1 * u), hn * abs2(u) / rn, abs2(u)
    v = complex(u_prev)
    rm = math.sqrt(n - 1)
    c2 = math.sqrt(1.0 + hn / rm)
    return abs2(c1 * u - c2 * v), hn * (abs2(u) / rn - abs2(v) / rm), abs2(u - v)


def pointwise_identity_residual(n: int, u_n, u_prev, mode: SummationMode | None = None):
    """``S + T - D`` for the terms returned by :func:`pointwise_terms`."""
    s, t, d = pointwise_terms(n, u_n, u_prev, mode)
    if mode is not None and mode.extended:
        with mode.context():
            return s + t - d
    return s + t - d


def pointwise_scale(n: int, u_n, u_prev) -> float:
    """Magnitude a pointwise residual is judged against.

    ``|u_n|^2 + |u_prev|^2 + |S| + |T| + |D|``: the squared inputs plus the
    three terms, since either can dominate the rounding error.
    """
    s, t, d = pointwise_terms(n, u_n, u_prev)
    inputs = abs2(complex(u_n)) + (0.0 if n == 1 else abs2(complex(u_prev)))
    return inputs + abs(s) + abs(t) + abs(d)


def summation_by_parts_residual(u: Sequence, mode: SummationMode = COMPENSATED):
    """``sum w_n |u_n|^2 - sum h_n (|u_n|^2/sqrt(n) - |u_{n-1}|^2/sqrt(n-1))``."""
    ext = mode.extended
    wmode = mode if ext else None
    get = _ext_getter(u, mode) if ext else u.get
    rhs = Accumulator(mode)
    with mode.context():
        lhs = weighted_form(u, KPP, mode)
        for n in difference_indices(u):
            cur = abs2(get(n)) / sqrt(n, wmode)
            prev = abs2(get(n - 1)) / sqrt(n - 1, wmode) if n > 1 else 0
            rhs.add(h(n, wmode) * (cur - prev))
        return lhs - rhs.value


def hardy_quotient(u: Sequence, table: WeightTable = KPP,
                   mode: SummationMode = COMPENSATED):
    """Rayleigh-type quotient ``D(u) / W(u)``."""
    if u.is_zero():
        raise ValidationError("hardy_quotient is undefined for the zero sequence")
    d = dirichlet_energy(u, mode)
    w = weighted_form(u, table, mode)
    with mode.context():
        return d / w
