"""Scalar and reduction kernels with selectable accuracy.

Three summation policies are offered through :class:`SummationMode`:

``naive``
    left-to-right binary64 addition;
``compensated``
    Neumaier's variant of Kahan summation in binary64, which stays
    accurate when an incoming term is larger than the running sum;
``extended``
    software multiple precision (MPFR through :mod:`gmpy2`) at a
    configurable number of mantissa bits, 256 by default.

Every reduction runs in ascending input order, so a fixed mode and a
fixed input give bit-identical results.  Nothing here runs in parallel.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2

from .errors import ConfigurationError, InputError

__all__ = [
    "SummationMode", "Accumulator", "NAIVE", "COMPENSATED", "EXTENDED",
    "sum_terms", "sqrt_ratio", "fourth_root_ratio", "sqrt", "log", "log1p",
    "to_real", "to_complex", "abs2", "ulp", "is_finite",
]

KINDS = ("naive", "compensated", "extended")


@dataclass(frozen=True)
class SummationMode:
    """Summation policy; ``precision_bits`` only matters for ``extended``."""

    kind: str = "compensated"
    precision_bits: int = 256

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(
                f"unknown summation mode {self.kind!r}; expected one of {KINDS}")
        if self.kind == "extended":
            if not isinstance(self.precision_bits, int) or self.precision_bits < 64:
                raise ConfigurationError("extended mode needs precision_bits >= 64")
            if self.precision_bits > gmpy2.get_max_precision():
                raise ConfigurationError(
                    f"precision_bits={self.precision_bits} exceeds the MPFR maximum "
                    f"{gmpy2.get_max_precision()}")

    @property
    def extended(self) -> bool:
        return self.kind == "extended"

    @property
    def tolerance(self) -> float:
        """Relative tolerance for exact identities evaluated in this mode."""
        if self.kind == "compensated":
            return 1e-12
        if self.kind == "naive":
            return 1e-10
        return min(1e-12, 1e-60 * 2.0 ** (256 - self.precision_bits))

    def context(self):
        """Context manager activating the working precision for operators."""
        if self.extended:
            return gmpy2.context(gmpy2.get_context(), precision=self.precision_bits)
        return contextlib.nullcontext()

    def describe(self) -> dict:
        d = {"kind": self.kind}
        if self.extended:
            d["precision_bits"] = self.precision_bits
        return d


NAIVE = SummationMode("naive")
COMPENSATED = SummationMode("compensated")
EXTENDED = SummationMode("extended", 256)


@lru_cache(maxsize=None)
def _mpfr_context(bits):
    return gmpy2.context(precision=bits)


def is_finite(x) -> bool:
    if isinstance(x, (gmpy2.mpfr, gmpy2.mpc)):
        return gmpy2.is_finite(x)
    if isinstance(x, complex):
        return math.isfinite(x.real) and math.isfinite(x.imag)
    return math.isfinite(x)


class Accumulator:
    """Running sum under a :class:`SummationMode`.

    >>> acc = Accumulator(COMPENSATED)
    >>> for t in (1.0, 1e-16, -1.0):
    ...     acc.add(t)
    >>> acc.value
    1e-16
    """

    __slots__ = ("mode", "_s", "_c", "_ctx")

    def __init__(self, mode: SummationMode = COMPENSATED):
        self.mode = mode
        self._c = 0.0
        if mode.extended:
            self._ctx = _mpfr_context(mode.precision_bits)
            self._s = self._ctx.plus(0)
        else:
            self._ctx = None
            self._s = 0.0

    def add(self, x):
        if not is_finite(x):
            raise InputError(f"non-finite term {x!r}")
        kind = self.mode.kind
        if kind == "compensated":
            x = float(x)
            s = self._s
            t = s + x
            if abs(s) >= abs(x):
                self._c += (s - t) + x
            else:
                self._c += (x - t) + s
            self._s = t
        elif kind == "naive":
            self._s += float(x)
        else:
            self._s = self._ctx.add(self._s, x)

    def extend(self, terms):
        kind = self.mode.kind
        if kind == "extended":
            for x in terms:
                self.add(x)
            return self
        isfinite = math.isfinite
        s = self._s
        if kind == "naive":
            for x in terms:
                x = float(x)
                if not isfinite(x):
                    raise InputError(f"non-finite term {x!r}")
                s += x
            self._s = s
            return self
        c = self._c
        for x in terms:
            x = float(x)
            if not isfinite(x):
                raise InputError(f"non-finite term {x!r}")
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        self._s, self._c = s, c
        return self

    @property
    def value(self):
        if self.mode.kind == "compensated":
            return self._s + self._c
        return self._s


def sum_terms(terms, mode: SummationMode = COMPENSATED):
    """Sum ``terms`` in the given order under ``mode``.

    Returns a float for the binary64 modes and an ``mpfr`` for ``extended``.
    """
    return Accumulator(mode).extend(terms).value


def to_real(x, mode: SummationMode | None = None):
    """Convert a real number exactly (or correctly rounded) to the working type."""
    if mode is not None and mode.extended:
        return _mpfr_context(mode.precision_bits).plus(gmpy2.mpfr(x, mode.precision_bits))
    return float(x)


def to_complex(z, mode: SummationMode | None = None):
    if mode is not None and mode.extended:
        if isinstance(z, gmpy2.mpc):
            return z
        return gmpy2.mpc(z, precision=mode.precision_bits)
    return complex(z)


def abs2(z):
    """Squared modulus ``|z|**2`` of a complex or mpc value."""
    if type(z) is float:
        return z * z
    if type(z) is complex:
        return z.real * z.real + z.imag * z.imag
    if isinstance(z, gmpy2.mpc):
        return gmpy2.norm(z)
    if isinstance(z, gmpy2.mpfr):
        return z * z
    z = complex(z)
    return z.real * z.real + z.imag * z.imag


def sqrt(x, mode: SummationMode | None = None):
    if mode is not None and mode.extended:
        return _mpfr_context(mode.precision_bits).sqrt(x)
    return math.sqrt(x)


def log(x, mode: SummationMode | None = None):
    if mode is not None and mode.extended:
        return _mpfr_context(mode.precision_bits).log(x)
    return math.log(x)


def log1p(x, mode: SummationMode | None = None):
    if mode is not None and mode.extended:
        return _mpfr_context(mode.precision_bits).log1p(x)
    return math.log1p(x)


def sqrt_ratio(p: int, q: int, mode: SummationMode | None = None):
    """``sqrt(p/q)`` evaluated as ``sqrt(p)/sqrt(q)``."""
    if p < 0 or q < 1:
        raise InputError(f"sqrt_ratio needs p >= 0 and q >= 1, got {p}, {q}")
    if mode is not None and mode.extended:
        ctx = _mpfr_context(mode.precision_bits)
        return ctx.div(ctx.sqrt(p), ctx.sqrt(q))
    return math.sqrt(p) / math.sqrt(q)


def fourth_root_ratio(p: int, q: int, mode: SummationMode | None = None):
    """``(p/q)**(1/4)`` as the square root of :func:`sqrt_ratio`."""
    if p < 1 or q < 1:
        raise InputError(f"fourth_root_ratio needs p, q >= 1, got {p}, {q}")
    return sqrt(sqrt_ratio(p, q, mode), mode)


def ulp(x) -> float:
    """Unit in the last place of ``x`` as a binary64 number."""
    return math.ulp(float(x))
