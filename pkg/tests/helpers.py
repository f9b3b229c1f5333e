"""mpmath oracles and random inputs shared by the test modules.

The oracles use mpmath (not gmpy2) so they stay independent of the
package's extended-precision path.
"""
import math

import mpmath as mp
import numpy as np

from hardylab.sequences import Sequence

ORACLE_PREC = 320


def mpf(x):
    return mp.mpf(x)


def kpp(n):
    with mp.workprec(ORACLE_PREC):
        return 2 - mp.sqrt(mp.mpf(n + 1) / n) - mp.sqrt(mp.mpf(n - 1) / n)


def coeffs(n):
    with mp.workprec(ORACLE_PREC):
        return mp.root(mp.mpf(n - 1) / n, 4), mp.root(mp.mpf(n) / (n - 1), 4)


def _values(u):
    return {n: mp.mpc(complex(v)) for n, v in u.items()}


def dirichlet(u):
    with mp.workprec(ORACLE_PREC):
        vals = _values(u)
        idx = sorted(set(vals) | {n + 1 for n in vals})
        return mp.fsum(abs(vals.get(n, 0) - vals.get(n - 1, 0)) ** 2 for n in idx)


def weighted(u, weight=kpp):
    with mp.workprec(ORACLE_PREC):
        vals = _values(u)
        return mp.fsum(weight(n) * abs(v) ** 2 for n, v in vals.items())


def remainder(u):
    with mp.workprec(ORACLE_PREC):
        vals = _values(u)
        idx = sorted(set(vals) | {n + 1 for n in vals})
        total = []
        for n in idx:
            if n < 2:
                continue
            a, b = coeffs(n)
            total.append(abs(a * vals.get(n, 0) - b * vals.get(n - 1, 0)) ** 2)
        return mp.fsum(total)


def probe_closed_form(N):
    """R(u^N) summed termwise in mpmath."""
    with mp.workprec(ORACLE_PREC):
        L = mp.log(N)
        return mp.fsum(mp.sqrt(n * (n - 1)) * mp.log(mp.mpf(n) / (n - 1)) ** 2
                       for n in range(N + 1, N * N + 1)) / L ** 2


def random_sequence(rng, size, lo=-6.0, hi=6.0, spread=2):
    """Complex sequence with ``size`` entries scattered in ``1..spread*size``,
    log-uniform moduli in ``[10**lo, 10**hi]`` and uniform phases."""
    top = int(rng.integers(size, spread * size + 1))
    idx = np.sort(rng.choice(np.arange(1, top + 1), size, replace=False))
    mag = 10.0 ** rng.uniform(lo, hi, size)
    ph = rng.uniform(0.0, 2 * math.pi, size)
    return Sequence(dict(zip(idx.tolist(), (mag * np.exp(1j * ph)).tolist())))
