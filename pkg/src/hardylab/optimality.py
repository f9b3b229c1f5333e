"""Optimality machinery: the regularised ground state as a probe, the
bound chain that drives its remainder to zero, and explicit witnesses
that a single-site increase of the KPP weight breaks the inequality.

For ``u^N = xi^N sqrt(n)`` every remainder term below ``N`` and above
``N^2`` vanishes, and the remaining ones collapse to

    R(u^N) = (1/log^2 N) sum_{n=N+1}^{N^2} sqrt(n(n-1)) log^2(n/(n-1)),

which is bounded, in turn, by

    (1/log^2 N) sum sqrt(n(n-1))/(n-1)^2
    <= (2/log^2 N) sum 1/(n-1)
    <= 2 log(N+1)/log^2 N
    <= 4/log N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2

from .errors import ChainViolation, ConsistencyError, FeasibilityError, ValidationError
from .forms import dirichlet_energy, remainder_form, weighted_form
from .numerics import COMPENSATED, Accumulator, SummationMode, log, log1p, sqrt, to_real
from .sequences import _check_level, cutoff, regularized_ground_state, support_cap
from .weights import KPP

__all__ = [
    "ProbeResult", "WitnessResult", "CHAIN_LABELS", "closed_form_remainder",
    "verify_bound_chain", "probe_remainder", "minimum_witness_level", "find_witness",
    "FEASIBILITY_THRESHOLD",
]

CHAIN_LABELS = ("remainder", "log_bound", "harmonic_bound", "integral_bound", "final_bound")
FEASIBILITY_THRESHOLD = 0.5


@dataclass(frozen=True)
class ProbeResult:
    level: int
    remainder: float
    remainder_closed_form: float
    paper_bound: float
    chain: tuple
    margin: float
    terms: int
    mode: SummationMode


@dataclass(frozen=True)
class WitnessResult:
    """Outcome of testing ``w + epsilon * delta_site`` on ``u^level``.

    ``violation_margin`` is summed directly as ``W~(u) - D(u)``;
    ``identity_margin`` is ``epsilon * site * xi_site^2 - R(u)``.  A positive
    margin means the perturbed inequality fails.
    """

    site: int
    epsilon: float
    level: int
    perturbed_form: float
    dirichlet: float
    remainder: float
    violation_margin: float
    identity_margin: float
    min_level: int | None = None
    log_min_level: float | None = None

    @property
    def violated(self) -> bool:
        return self.violation_margin > 0


def _chain_sums(N, mode, check_lemmas=True):
    """One pass over ``n = N+1 .. N^2`` accumulating the three sums."""
    ext = mode.extended
    rmode = mode if ext else None
    exact, quad, harm = Accumulator(mode), Accumulator(mode), Accumulator(mode)
    root2 = sqrt(2, rmode)
    with mode.context():
        for n in range(N + 1, N * N + 1):
            m = to_real(n - 1, rmode) if ext else float(n - 1)
            g = sqrt(m * n, rmode) if ext else math.sqrt(n * (n - 1))
            lg = log1p(1 / m, rmode)
            lg2 = lg * lg
            inv2 = 1 / (m * m)
            if check_lemmas:
                if not lg2 <= inv2:
                    raise ChainViolation(f"log^2(n/(n-1)) <= 1/(n-1)^2 fails at n={n}")
                if not g <= root2 * m:
                    raise ChainViolation(f"sqrt(n(n-1)) <= sqrt(2)(n-1) fails at n={n}")
            exact.add(g * lg2)
            quad.add(g * inv2)
            harm.add(1 / m)
    return exact.value, quad.value, harm.value


def closed_form_remainder(N: int, mode: SummationMode = COMPENSATED):
    """``R(u^N)`` from the collapsed single sum (no sequence is built)."""
    _check_level(N)
    s, _, _ = _chain_sums(N, mode, check_lemmas=False)
    rmode = mode if mode.extended else None
    with mode.context():
        logN = log(N, rmode)
        return s / (logN * logN)


def _chain(N, mode):
    rmode = mode if mode.extended else None
    s_exact, s_quad, s_harm = _chain_sums(N, mode)
    with mode.context():
        logN = log(N, rmode)
        l2 = logN * logN
        values = (
            s_exact / l2,
            s_quad / l2,
            2 * s_harm / l2,
            2 * log(N + 1, rmode) / l2,
            4 / logN,
        )
    for (la, a), (lb, b) in zip(zip(CHAIN_LABELS, values), zip(CHAIN_LABELS[1:], values[1:])):
        if not a <= b:
            raise ChainViolation(f"bound chain decreases at N={N}: {la}={a} > {lb}={b}")
    return values


def verify_bound_chain(N: int, mode: SummationMode = COMPENSATED) -> list:
    """The five chain stages as ``(label, value)`` pairs, checked non-decreasing.

    Raises :class:`ChainViolation` if a stage decreases or a termwise lemma
    (``log x <= x - 1`` in squared form, ``sqrt(n(n-1)) <= sqrt(2)(n-1)``)
    fails for some ``n``.
    """
    _check_level(N)
    return [(label, float(v)) for label, v in zip(CHAIN_LABELS, _chain(N, mode))]


def probe_remainder(N: int, mode: SummationMode = COMPENSATED,
                    cap: int | None = None) -> ProbeResult:
    """Evaluate ``R(u^N)`` by summing over the sequence and by the closed form.

    The two routes must agree to ``mode.tolerance`` relative, otherwise
    :class:`ConsistencyError` is raised.
    """
    _check_level(N)
    u = regularized_ground_state(N, mode if mode.extended else None, cap)
    direct = remainder_form(u, mode)
    values = _chain(N, mode)
    closed = values[0]
    with mode.context():
        diff = abs(direct - closed)
    if diff > mode.tolerance * abs(closed):
        raise ConsistencyError(
            f"R(u^{N}): sequence route {float(direct)!r} vs closed form "
            f"{float(closed)!r} differ by {float(diff):.3e}")
    bound = float(values[-1])
    return ProbeResult(
        level=N,
        remainder=float(direct),
        remainder_closed_form=float(closed),
        paper_bound=bound,
        chain=tuple((label, float(v)) for label, v in zip(CHAIN_LABELS, values)),
        margin=bound - float(direct),
        terms=N * N - N,
        mode=mode,
    )


def minimum_witness_level(product: float):
    """Smallest integer ``N >= 2`` with ``4/log N < product``.

    Returns ``(N, log_threshold)`` where ``log_threshold = 4/product``.
    ``N`` is an exact integer even when it has thousands of digits.
    """
    if not product > 0:
        raise ValidationError("epsilon * k must be positive")
    x = 4.0 / product
    if x < 700:
        N = max(2, math.floor(math.exp(x)) + 1)
        while N > 2 and 4 / math.log(N - 1) < product:
            N -= 1
        while not 4 / math.log(N) < product:
            N += 1
        return N, x
    bits = int(x / math.log(2)) + 64
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        return int(gmpy2.floor(gmpy2.exp(gmpy2.mpfr(x)))) + 1, x


def _format_level(N, x):
    if N.bit_length() < 64:
        return str(N)
    return f"exp({x:.6g})"


def find_witness(k: int, epsilon: float, N: int | None = None,
                 mode: SummationMode = COMPENSATED,
                 threshold: float = FEASIBILITY_THRESHOLD,
                 cap: int | None = None) -> WitnessResult:
    """Show that ``w + epsilon * delta_k`` violates the Hardy inequality.

    Without an explicit ``N`` the level is ``max(k + 1, N_min)`` where
    ``N_min`` is the smallest level with ``4/log N < epsilon * k``.  Raises
    :class:`FeasibilityError` when ``epsilon * k`` is below ``threshold``
    or the level would exceed the support cap.
    """
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValidationError(f"site k must be an integer >= 1, got {k}")
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ValidationError(f"epsilon must be finite and > 0, got {epsilon}")
    cap = support_cap() if cap is None else cap
    product = epsilon * k
    min_level, log_min = minimum_witness_level(product)
    if N is None:
        shown = _format_level(min_level, log_min)
        if product < threshold:
            raise FeasibilityError(
                f"epsilon*k = {product:g} is below the feasibility threshold {threshold:g}; "
                f"the 4/log N bound needs N >= {shown}", min_level, log_min)
        level = max(k + 1, min_level)
    else:
        _check_level(N)
        if N <= k:
            raise ValidationError(f"witness level N={N} must exceed the site k={k}")
        level = N
    if level * level - 1 > cap:
        raise FeasibilityError(
            f"witness level N={_format_level(level, math.log(level))} needs "
            f"{level * level - 1} entries, above the support cap {cap}", min_level, log_min)

    u = regularized_ground_state(level, mode if mode.extended else None, cap)
    table = KPP.perturb(k, epsilon)
    wt = weighted_form(u, table, mode)
    d = dirichlet_energy(u, mode)
    r = remainder_form(u, mode)
    rmode = mode if mode.extended else None
    with mode.context():
        xi = cutoff(level, k, rmode)
        direct = wt - d
        via_identity = to_real(epsilon, rmode) * k * xi * xi - r
        gap = abs(direct - via_identity)
    if gap > mode.tolerance * max(float(d), 1.0):
        raise ConsistencyError(
            f"witness margins disagree: direct {float(direct)!r} vs identity "
            f"{float(via_identity)!r}")
    return WitnessResult(
        site=k, epsilon=epsilon, level=level, perturbed_form=float(wt),
        dirichlet=float(d), remainder=float(r), violation_margin=float(direct),
        identity_margin=float(via_identity), min_level=min_level, log_min_level=log_min)
