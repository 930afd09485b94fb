"""su(2) machinery of the finite oscillator.

Spin labels are handled through the integer ``two_j = 2j`` so that
half-integer arithmetic stays exact. A screen of side ``N`` has
``two_j = N - 1``; pixel index ``i`` in ``0..N-1`` sits at position
``q = i - j``.

Wigner little-d values are produced by a three-term recurrence in the row
projection, run inwards from both edges of the matrix and seeded by the
closed-form edge values evaluated in log space. The alternating factorial
sum is kept in :func:`wigner_d_sum` only as a cross-check for small spins.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, lgamma

import numpy as np

from .errors import DomainError

__all__ = [
    "OscillatorRep",
    "Su2Matrices",
    "WavefunctionTable",
    "su2_generators",
    "wigner_d_matrix",
    "wigner_little_d",
    "wigner_d_sum",
    "kravchuk_psi",
    "wavefunction_table",
]

# rescale threshold for the recurrence; well inside the double range
_BIG = 1e100
# below this the recurrence coefficients blow up like 1/sin(beta)
_SMALL = 1e-3


def _twice(value, what="label") -> int:
    """Return ``2*value`` as an exact int, rejecting non half-integers."""
    doubled = 2 * Fraction(value)
    if doubled.denominator != 1:
        raise DomainError(f"{what} must be an integer or half-integer, got {value!r}")
    return int(doubled)


@dataclass(frozen=True)
class OscillatorRep:
    """Representation of su(2) with dimension ``N = 2j + 1``.

    Parameters
    ----------
    two_j : int
        Twice the spin label; non-negative.
    """

    two_j: int

    def __post_init__(self):
        if int(self.two_j) != self.two_j or self.two_j < 0:
            raise DomainError(f"two_j must be a non-negative integer, got {self.two_j!r}")
        object.__setattr__(self, "two_j", int(self.two_j))

    @classmethod
    def from_size(cls, N: int) -> "OscillatorRep":
        if int(N) != N or N < 1:
            raise DomainError(f"screen side must be a positive integer, got {N!r}")
        return cls(int(N) - 1)

    @classmethod
    def from_j(cls, j) -> "OscillatorRep":
        return cls(_twice(j, "j"))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def N(self) -> int:
        return self.two_j + 1

    @property
    def positions(self) -> np.ndarray:
        """Positions ``q = -j, ..., j`` in pixel order."""
        return np.arange(self.N) - self.j

    def index_of(self, q) -> int:
        """Pixel index ``q + j`` of position ``q``."""
        i = (_twice(q, "position") + self.two_j)
        if i % 2 or not 0 <= i // 2 < self.N:
            raise DomainError(f"position {q!r} is not in {{-j..j}} for j={self.j}")
        return i // 2


@dataclass(frozen=True)
class Su2Matrices:
    Q: np.ndarray
    P: np.ndarray
    K: np.ndarray


def su2_generators(rep: OscillatorRep) -> Su2Matrices:
    """Position, momentum and mode generators in the position basis.

    ``Q`` is diagonal with the positions, ``K`` is real tridiagonal and ``P``
    is imaginary tridiagonal; together they close on su(2) with
    ``[K,Q] = -iP``, ``[K,P] = iQ``, ``[Q,P] = iK``.
    """
    j = rep.j
    q = rep.positions
    # coefficient coupling q and q+1
    up = 0.5 * np.sqrt((j - q[:-1]) * (j + q[:-1] + 1))
    Q = np.diag(q).astype(float)
    K = np.diag(up, 1) + np.diag(up, -1)
    P = -1j * np.diag(up, 1) + 1j * np.diag(up, -1)
    return Su2Matrices(Q=Q, P=P, K=K)


def _d_recurrence(two_j: int, beta: float) -> np.ndarray:
    """d^j(beta) for 0 < beta <= pi/2 (up to rounding), rows m', columns m."""
    n = two_j + 1
    j = two_j / 2
    half_c, half_s = np.cos(beta / 2), np.sin(beta / 2)
    log_c, log_s = np.log(half_c), np.log(half_s)
    cb, sb = np.cos(beta), np.sin(beta)

    m = np.arange(n) - j
    j_plus_m = np.arange(n)
    j_minus_m = two_j - j_plus_m
    lgam = np.array([lgamma(k + 1) for k in range(n)])
    log_binom = 0.5 * (lgam[-1] - lgam - lgam[::-1])

    # rows m' >= junction come from the downward sweep, the rest from the upward one
    junction = np.ceil(m * cb - 1e-9)
    out = np.zeros((n, n))

    def sweep(rows, seed_log, seed_sign, forward):
        cur = seed_sign.astype(float)
        prev = np.zeros(n)
        scale = seed_log.copy()
        for step, row in enumerate(rows):
            mp = row - j
            keep = (mp >= junction) if not forward else (mp < junction)
            with np.errstate(over="ignore", under="ignore"):
                out[row, keep] = (cur * np.exp(scale))[keep]
            if step == n - 1:
                break
            a = np.sqrt((j - mp) * (j + mp + 1))
            b = np.sqrt((j + mp) * (j - mp + 1))
            x = 2 * (m - mp * cb) / sb
            if forward:
                nxt = (x * cur - b * prev) / a
            else:
                nxt = (x * cur - a * prev) / b
            prev, cur = cur, nxt
            big = np.abs(cur) > _BIG
            if big.any():
                f = np.where(big, np.abs(cur), 1.0)
                cur, prev, scale = cur / f, prev / f, scale + np.log(f)

    # d_{j,m} = (-1)^{j-m} sqrt(C(2j, j+m)) c^{j+m} s^{j-m}
    sweep(range(n - 1, -1, -1), log_binom + j_plus_m * log_c + j_minus_m * log_s,
          (-1.0) ** j_minus_m, forward=False)
    # d_{-j,m} = sqrt(C(2j, j+m)) c^{j-m} s^{j+m}
    sweep(range(n), log_binom + j_minus_m * log_c + j_plus_m * log_s,
          np.ones(n), forward=True)
    return out


@lru_cache(maxsize=512)
def _d_cached(two_j: int, beta: float) -> np.ndarray:
    n = two_j + 1
    # d(beta + 2 pi) = (-1)^{2j} d(beta)
    turns = round(beta / (2 * np.pi))
    beta = beta - 2 * np.pi * turns
    sign = -1.0 if (two_j * turns) % 2 else 1.0

    flip = None
    if beta > np.pi / 2:
        beta -= np.pi
        flip = "plus"
    elif beta < -np.pi / 2:
        beta += np.pi
        flip = "minus"

    if beta == 0.0:
        d = np.eye(n)
    elif abs(beta) < _SMALL:
        # d(beta) = d(pi/2) d(beta - pi/2), both factors well conditioned
        half = _d_recurrence(two_j, np.pi / 2)
        d = half @ _d_recurrence(two_j, np.pi / 2 - beta).T
    elif beta > 0:
        d = _d_recurrence(two_j, beta)
    else:
        d = _d_recurrence(two_j, -beta).T

    if flip is not None:
        # d(beta) = d(+-pi) d(beta -+ pi); d(pi) is a signed anti-identity
        rows = np.arange(n)
        parity = rows if flip == "plus" else two_j - rows
        d = ((-1.0) ** parity)[:, None] * d[::-1]
    d = sign * d
    d.setflags(write=False)
    return d


def wigner_d_matrix(two_j: int, beta: float) -> np.ndarray:
    """Full Wigner little-d matrix ``d^j(beta)``.

    Entry ``[a, b]`` is ``d^j_{a-j, b-j}(beta)``. The returned array is
    read-only and may be shared.
    """
    if int(two_j) != two_j or two_j < 0:
        raise DomainError(f"two_j must be a non-negative integer, got {two_j!r}")
    return _d_cached(int(two_j), float(beta))


def _check_projection(two_j: int, two_m: int, what: str) -> int:
    if abs(two_m) > two_j or (two_j - two_m) % 2:
        raise DomainError(f"{what}={two_m / 2} is not a projection of j={two_j / 2}")
    return (two_m + two_j) // 2


def wigner_little_d(j, mp, m, beta: float) -> float:
    """Wigner little-d function ``d^j_{mp,m}(beta)``.

    ``j``, ``mp`` and ``m`` may be integers, half-integers as floats, or
    :class:`fractions.Fraction`.
    """
    two_j = _twice(j, "j")
    if two_j < 0:
        raise DomainError("j must be non-negative")
    a = _check_projection(two_j, _twice(mp, "mp"), "mp")
    b = _check_projection(two_j, _twice(m, "m"), "m")
    return float(wigner_d_matrix(two_j, beta)[a, b])


def wigner_d_sum(j, mp, m, beta: float) -> float:
    """Little-d from the alternating factorial sum, in double precision.

    Cancellation makes this unreliable beyond ``j`` of about 15; it exists
    to cross-check :func:`wigner_little_d`.
    """
    two_j = _twice(j, "j")
    two_mp, two_m = _twice(mp, "mp"), _twice(m, "m")
    _check_projection(two_j, two_mp, "mp")
    _check_projection(two_j, two_m, "m")
    jpm, jmm = (two_j + two_m) // 2, (two_j - two_m) // 2
    jpp, jmp = (two_j + two_mp) // 2, (two_j - two_mp) // 2
    dm = (two_mp - two_m) // 2
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    pre = np.sqrt(float(factorial(jpp) * factorial(jmp) * factorial(jpm) * factorial(jmm)))
    total = 0.0
    for k in range(max(0, -dm), min(jpm, jmp) + 1):
        denom = factorial(k) * factorial(jpm - k) * factorial(dm + k) * factorial(jmp - k)
        total += (-1) ** (dm + k) * c ** (jpm + jmp - 2 * k) * s ** (dm + 2 * k) / denom
    return float(pre * total)


@dataclass(frozen=True)
class WavefunctionTable:
    """All finite oscillator wavefunctions for one representation.

    ``values[n, q + j]`` holds ``Psi_n(q)``; rows are modes, columns pixels.
    """

    rep: OscillatorRep
    values: np.ndarray = field(repr=False)

    def psi(self, n: int, q) -> float:
        if not 0 <= n <= self.rep.two_j:
            raise DomainError(f"mode number {n} outside 0..{self.rep.two_j}")
        return float(self.values[n, self.rep.index_of(q)])


@lru_cache(maxsize=64)
def _table(two_j: int) -> np.ndarray:
    W = wigner_d_matrix(two_j, np.pi / 2)
    # Psi_n(q) = (-1)^(n-q-j) Psi_{q+j}(n-j): mirror the lower triangle so the
    # stored table obeys it bit for bit
    idx = np.arange(two_j + 1)
    sign = (-1.0) ** (idx[:, None] - idx[None, :])
    W = np.tril(W) + sign * np.tril(W, -1).T
    W.setflags(write=False)
    return W


def wavefunction_table(rep: OscillatorRep) -> WavefunctionTable:
    """Kravchuk functions ``Psi_n(q) = d^j_{n-j,q}(pi/2)`` for every ``n, q``."""
    return WavefunctionTable(rep=rep, values=_table(rep.two_j))


def kravchuk_psi(rep: OscillatorRep, n: int, q) -> float:
    """Single finite oscillator wavefunction value ``Psi_n(q)``."""
    if int(n) != n or not 0 <= n <= rep.two_j:
        raise DomainError(f"mode number {n!r} outside 0..{rep.two_j}")
    return wavefunction_table(rep).psi(int(n), q)
