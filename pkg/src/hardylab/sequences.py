"""Finitely supported complex sequences ``u`` with ``u_0 = 0``, the
logarithmic cutoff and the regularised ground state ``xi^N_n sqrt(n)``.

Sequences are sparse and immutable.  Only nonzero entries are stored and
iteration is always in ascending index order, which is what keeps every
downstream sum reproducible.
"""
from __future__ import annotations

import math
import os
from collections.abc import Iterable, Mapping

import gmpy2

from .errors import ConfigurationError, ParseError, ResourceError, ValidationError
from .numerics import SummationMode, is_finite, log, sqrt, to_real

__all__ = [
    "Sequence", "from_pairs", "unit", "cutoff", "regularized_ground_state",
    "ground_state", "step", "scale", "add", "support_cap", "DEFAULT_SUPPORT_CAP",
    "parse_sequence", "read_sequence", "format_sequence",
]

DEFAULT_SUPPORT_CAP = 10**8
SUPPORT_CAP_ENV = "HARDYLAB_SUPPORT_CAP"


def support_cap() -> int:
    """The support cap, overridable through ``HARDYLAB_SUPPORT_CAP``."""
    raw = os.environ.get(SUPPORT_CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SUPPORT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigurationError(f"{SUPPORT_CAP_ENV}={raw!r} is not an integer") from None
    if cap < 1:
        raise ConfigurationError(f"{SUPPORT_CAP_ENV} must be positive, got {cap}")
    return cap


def _is_zero(v) -> bool:
    if isinstance(v, (gmpy2.mpc, gmpy2.mpfr)):
        return gmpy2.is_zero(v)
    return v == 0


def _coerce(v):
    if isinstance(v, (gmpy2.mpc, gmpy2.mpfr, complex, float)):
        return v
    return complex(v)


class Sequence:
    """Sparse sequence ``{n: u_n}`` on ``n >= 1``; ``u_0`` is implicitly 0."""

    __slots__ = ("_entries", "_indices", "_lifted")

    def __init__(self, entries: Mapping | None = None):
        entries = {} if entries is None else entries
        clean = {}
        for n, v in entries.items():
            if isinstance(n, bool) or int(n) != n:
                raise ValidationError(f"index {n!r} is not an integer")
            n = int(n)
            if n == 0:
                raise ValidationError("u_0 must be 0")
            if n < 0:
                raise ValidationError(f"negative index {n}")
            v = _coerce(v)
            if not is_finite(v):
                raise ValidationError(f"non-finite value at index {n}")
            if not _is_zero(v):
                clean[n] = v
        self._indices = tuple(sorted(clean))
        self._entries = clean
        self._lifted = {}

    @classmethod
    def _trusted(cls, entries: dict, indices=None):
        # entries already validated, nonzero, keyed by ints >= 1
        obj = cls.__new__(cls)
        obj._entries = entries
        obj._indices = tuple(sorted(entries)) if indices is None else tuple(indices)
        obj._lifted = {}
        return obj

    def lifted(self, bits: int) -> dict:
        """Entries converted to ``mpfr``/``mpc`` at ``bits`` precision (memoised)."""
        table = self._lifted.get(bits)
        if table is None:
            with gmpy2.context(gmpy2.get_context(), precision=bits):
                table = {
                    n: gmpy2.mpfr(v) if isinstance(v, (float, gmpy2.mpfr)) else gmpy2.mpc(v)
                    for n, v in self._entries.items()
                }
            self._lifted[bits] = table
        return table

    @property
    def indices(self) -> tuple:
        return self._indices

    @property
    def max_index(self) -> int:
        return self._indices[-1] if self._indices else 0

    @property
    def support_size(self) -> int:
        return len(self._indices)

    def __len__(self):
        return len(self._indices)

    def __getitem__(self, n):
        return self._entries.get(n, 0.0)

    def get(self, n, default=0.0):
        return self._entries.get(n, default)

    def items(self):
        """``(n, u_n)`` pairs in ascending index order."""
        e = self._entries
        return [(n, e[n]) for n in self._indices]

    def is_zero(self) -> bool:
        return not self._indices

    def __eq__(self, other):
        if not isinstance(other, Sequence):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        if len(self) > 6:
            head = ", ".join(f"{n}: {v!r}" for n, v in self.items()[:3])
            return f"Sequence({{{head}, ...}}, support_size={len(self)})"
        return f"Sequence({dict(self.items())!r})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, other, -1)

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__


def from_pairs(pairs: Iterable) -> Sequence:
    """Build a sequence from ``(index, value)`` pairs.

    >>> from_pairs([(1, 1)])
    Sequence({1: (1+0j)})
    """
    entries = {}
    for n, v in pairs:
        if n in entries:
            raise ValidationError(f"duplicate index {n}")
        entries[n] = v
    return Sequence(entries)


def unit(k: int) -> Sequence:
    """The sequence ``e_k``."""
    return from_pairs([(k, 1)])


def scale(u: Sequence, c) -> Sequence:
    if c == 0:
        return Sequence._trusted({}, ())
    out = {n: c * v for n, v in u.items()}
    return Sequence._trusted({n: v for n, v in out.items() if not _is_zero(v)})


def add(u: Sequence, v: Sequence, c=1) -> Sequence:
    """``u + c*v``; entries that cancel to exactly zero are dropped."""
    out = dict(u.items())
    for n, x in v.items():
        out[n] = out.get(n, 0) + c * x
    return Sequence._trusted({n: x for n, x in out.items() if not _is_zero(x)})


def _check_level(N):
    if isinstance(N, bool) or int(N) != N or N < 2:
        raise ValidationError(f"N must be >= 2, got {N}")


def cutoff(N: int, n: int, mode: SummationMode | None = None):
    """Logarithmic cutoff ``xi^N_n``.

    1 below ``N``, ``(2 log N - log n)/log N`` on ``[N, N^2]`` and 0 above.
    The middle branch is evaluated as ``log(N^2/n)/log N``, which makes
    both junction values exact.
    """
    _check_level(N)
    if n < 1:
        raise ValidationError(f"cutoff is defined for n >= 1, got {n}")
    NN = N * N
    ext = mode is not None and mode.extended
    if n < N:
        return to_real(1, mode) if ext else 1.0
    if n > NN:
        return to_real(0, mode) if ext else 0.0
    if ext:
        with mode.context():
            return log(to_real(NN, mode) / n, mode) / log(N, mode)
    return math.log(NN / n) / math.log(N)


def regularized_ground_state(N: int, mode: SummationMode | None = None,
                             cap: int | None = None) -> Sequence:
    """``u^N_n = xi^N_n sqrt(n)``, supported on ``1 .. N^2 - 1``.

    In extended mode the entries are ``mpfr`` values at the working
    precision; otherwise floats.
    """
    _check_level(N)
    cap = support_cap() if cap is None else cap
    NN = N * N
    if NN - 1 > cap:
        raise ResourceError(
            f"probe level N={N} needs {NN - 1} entries, above the support cap {cap}")
    ext = mode is not None and mode.extended
    entries = {}
    if ext:
        with mode.context():
            logN = log(N, mode)
            nn = to_real(NN, mode)
            for n in range(1, NN):
                r = sqrt(n, mode)
                entries[n] = r if n < N else log(nn / n, mode) / logN * r
    else:
        logN = math.log(N)
        sq = math.sqrt
        for n in range(1, N):
            entries[n] = sq(n)
        for n in range(N, NN):
            entries[n] = math.log(NN / n) / logN * sq(n)
    return Sequence._trusted(entries, range(1, NN))


def ground_state(M: int) -> Sequence:
    """``u_n = sqrt(n)`` restricted to ``1..M``."""
    return Sequence._trusted({n: math.sqrt(n) for n in range(1, M + 1)}, range(1, M + 1))


def step(M: int) -> Sequence:
    """``u_n = 1`` for ``1 <= n <= M``."""
    return Sequence._trusted({n: 1.0 for n in range(1, M + 1)}, range(1, M + 1))


def parse_sequence(lines: Iterable[str]) -> Sequence:
    """Parse ``n,re,im`` lines (strictly increasing ``n >= 1``).

    Blank lines and ``#`` comments are ignored.  Errors carry the 1-based
    line number.
    """
    entries = {}
    last = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 3:
            raise ParseError(f"expected 'n,re,im', got {raw.strip()!r}", lineno)
        try:
            n = int(fields[0])
            re_, im = float(fields[1]), float(fields[2])
        except ValueError:
            raise ParseError(f"cannot parse {raw.strip()!r}", lineno) from None
        if n == 0:
            raise ParseError("u_0 must be 0", lineno)
        if n < 0:
            raise ParseError(f"negative index {n}", lineno)
        if n <= last:
            raise ParseError(f"indices must be strictly increasing ({n} after {last})", lineno)
        if not (math.isfinite(re_) and math.isfinite(im)):
            raise ParseError(f"non-finite value at index {n}", lineno)
        last = n
        entries[n] = complex(re_, im)
    return Sequence(entries)


def read_sequence(path) -> Sequence:
    with open(path, encoding="utf-8") as fh:
        return parse_sequence(fh)


def format_sequence(u: Sequence) -> str:
    """Inverse of :func:`parse_sequence` for binary64 sequences."""
    out = []
    for n, v in u.items():
        v = complex(v)
        out.append(f"{n},{v.real!r},{v.imag!r}")
    return "\n".join(out) + ("\n" if out else "")
