"""Hardy weights: the improved (KPP) weight, the classical ``1/(4n^2)``
weight, the auxiliary sequence ``h`` and single-site perturbations.

In binary64 the KPP weight is evaluated through the cancellation-free
product form

    w_n = 2 / ( sqrt(n) (sqrt(n+1)+sqrt(n-1)) (sqrt(n)+sqrt(n-1)) (sqrt(n+1)+sqrt(n)) )

which equals ``2 - sqrt((n+1)/n) - sqrt((n-1)/n)`` but keeps full relative
accuracy for large ``n`` (the literal expression loses ``2*log10(2n)``
digits).  In extended mode the literal expression is used, so the
extended value doubles as an oracle for the product form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ValidationError, WeightIndexError
from .numerics import EXTENDED, SummationMode, sqrt, sqrt_ratio, to_real

__all__ = [
    "kpp_weight", "classical_weight", "h", "weight_gap", "telescoping_residual",
    "WeightTable", "KPP", "CLASSICAL", "weight_value", "GAP_EXTENDED_FROM",
]

# weight_gap switches to extended arithmetic from this index on
GAP_EXTENDED_FROM = 10_000


def _check_index(n):
    if int(n) != n or n < 1:
        raise WeightIndexError(f"weights are indexed from 1, got n={n}")


def kpp_weight(n: int, mode: SummationMode | None = None):
    """Improved Hardy weight ``w_n = 2 - sqrt((n+1)/n) - sqrt((n-1)/n)``.

    >>> kpp_weight(1)
    0.5857864376269049
    """
    _check_index(n)
    if mode is not None and mode.extended:
        return _kpp_ext(n, mode.precision_bits)
    r0, rm, rp = math.sqrt(n), math.sqrt(n - 1), math.sqrt(n + 1)
    return 2.0 / (r0 * (rp + rm) * (r0 + rm) * (rp + r0))


@lru_cache(maxsize=1 << 17)
def _kpp_ext(n, bits):
    mode = SummationMode("extended", bits)
    with mode.context():
        return to_real(2, mode) - sqrt_ratio(n + 1, n, mode) - sqrt_ratio(n - 1, n, mode)


def classical_weight(n: int, mode: SummationMode | None = None):
    _check_index(n)
    if mode is not None and mode.extended:
        with mode.context():
            return 1 / (4 * to_real(n, mode) ** 2)
    return 1.0 / (4.0 * n * n)


def h(n: int, mode: SummationMode | None = None):
    """``sqrt(n) - sqrt(n-1)``, evaluated as ``1/(sqrt(n) + sqrt(n-1))``."""
    _check_index(n)
    if mode is not None and mode.extended:
        with mode.context():
            return 1 / (sqrt(n, mode) + sqrt(n - 1, mode))
    return 1.0 / (math.sqrt(n) + math.sqrt(n - 1))


def weight_gap(n: int, mode: SummationMode | None = None):
    """``kpp_weight(n) - classical_weight(n)``.

    With no explicit mode the difference is taken in binary64 below
    :data:`GAP_EXTENDED_FROM` and in 256-bit arithmetic from there on;
    the result is then rounded to a float.
    """
    _check_index(n)
    if mode is None:
        if n < GAP_EXTENDED_FROM:
            return kpp_weight(n) - classical_weight(n)
        return float(weight_gap(n, EXTENDED))
    if mode.extended:
        with mode.context():
            return kpp_weight(n, mode) - classical_weight(n, mode)
    return kpp_weight(n) - classical_weight(n)


def telescoping_residual(n: int, mode: SummationMode = EXTENDED) -> float:
    """``w_n - (h_n - h_{n+1})/sqrt(n)``, rounded to binary64.

    Both sides are formed in ``mode``; in the default 256-bit mode the
    result measures how far the identity is from exact at double
    resolution.
    """
    _check_index(n)
    if mode.extended:
        with mode.context():
            r = kpp_weight(n, mode) - (h(n, mode) - h(n + 1, mode)) / sqrt(n, mode)
        return float(r)
    return kpp_weight(n) - (h(n) - h(n + 1)) / math.sqrt(n)


@dataclass(frozen=True)
class WeightTable:
    """A weight sequence: ``kpp``, ``classical`` or a single-site bump.

    ``perturbed`` tables add ``epsilon`` to ``base`` at index ``site`` only.
    """

    kind: str = "kpp"
    base: "WeightTable | None" = None
    site: int | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if self.kind not in ("kpp", "classical", "perturbed"):
            raise ValidationError(f"unknown weight kind {self.kind!r}")
        if self.kind == "perturbed":
            if self.base is None:
                raise ValidationError("perturbed weight needs a base table")
            if self.site is None or int(self.site) != self.site or self.site < 1:
                raise ValidationError("perturbation site must be an integer >= 1")
            if self.epsilon is None or not self.epsilon > 0 or not math.isfinite(self.epsilon):
                raise ValidationError("perturbation epsilon must be finite and > 0")

    def perturb(self, site: int, epsilon: float) -> "WeightTable":
        return WeightTable("perturbed", self, site, epsilon)

    def __call__(self, n: int, mode: SummationMode | None = None):
        return weight_value(self, n, mode)

    def describe(self) -> str:
        if self.kind == "perturbed":
            return f"{self.base.describe()}+{self.epsilon!r}*delta_{self.site}"
        return self.kind


KPP = WeightTable("kpp")
CLASSICAL = WeightTable("classical")


def weight_value(table: WeightTable, n: int, mode: SummationMode | None = None):
    """Evaluate ``table`` at index ``n``."""
    if table.kind == "kpp":
        return kpp_weight(n, mode)
    if table.kind == "classical":
        return classical_weight(n, mode)
    v = weight_value(table.base, n, mode)
    if n == table.site:
        if mode is not None and mode.extended:
            with mode.context():
                return v + to_real(table.epsilon, mode)
        return v + table.epsilon
    return v
