"""Cartesian and polar bases of the two-dimensional finite oscillator.

A square screen of side ``N = 2j + 1`` carries ``N**2`` Cartesian modes
``Psi_{nx}(qx) Psi_{ny}(qy)`` and as many polar modes ``Lambda_{n,m}``.
The polar modes with total mode ``n = nx + ny`` are unitary mixtures of the
Cartesian modes of the same ``n``; the mixing matrix is a Wigner little-d at
angle ``pi/2`` of spin ``lambda/2`` where ``lambda = min(n, 4j - n)`` is one
less than the number of Cartesian modes with that ``n``.

Flattened images use row-major order over ``(ix, iy) = (qx + j, qy + j)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .oscillator import OscillatorRep, WavefunctionTable, wavefunction_table, wigner_d_matrix

__all__ = [
    "PolarIndex",
    "PolarMode",
    "CartesianMode",
    "enumerate_polar_indices",
    "shell_width",
    "cartesian_mode",
    "polar_wavefunction",
    "polar_coefficients",
    "cartesian_matrix",
    "polar_matrix",
]


@dataclass(frozen=True, order=True)
class PolarIndex:
    n: int
    m: int

    def valid_for(self, rep: OscillatorRep) -> bool:
        n, m = self.n, self.m
        return 0 <= n <= 2 * rep.two_j and abs(m) <= shell_width(rep, n) and (n - m) % 2 == 0


@dataclass(frozen=True)
class PolarMode:
    index: PolarIndex
    values: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class CartesianMode:
    nx: int
    ny: int
    values: np.ndarray = field(repr=False)


def shell_width(rep: OscillatorRep, n: int) -> int:
    """``min(n, 4j - n)``: twice the little-d spin used for total mode ``n``."""
    return min(n, 2 * rep.two_j - n)


def _shell_nx(rep: OscillatorRep, n: int) -> np.ndarray:
    return np.arange(max(0, n - rep.two_j), min(n, rep.two_j) + 1)


def enumerate_polar_indices(rep: OscillatorRep) -> list[PolarIndex]:
    """All ``(n, m)`` labels, ``n`` ascending then ``m`` ascending."""
    out = []
    for n in range(2 * rep.two_j + 1):
        w = shell_width(rep, n)
        out.extend(PolarIndex(n, m) for m in range(-w, w + 1, 2))
    return out


def cartesian_mode(table: WavefunctionTable, nx: int, ny: int) -> CartesianMode:
    two_j = table.rep.two_j
    if not (0 <= nx <= two_j and 0 <= ny <= two_j):
        raise DomainError(f"mode ({nx}, {ny}) outside 0..{two_j}")
    W = table.values
    return CartesianMode(nx, ny, np.outer(W[nx], W[ny]))


def polar_coefficients(rep: OscillatorRep, n: int) -> np.ndarray:
    """Coefficients of the polar modes of shell ``n`` on its Cartesian modes.

    Row ``a`` corresponds to ``nx = max(0, n - 2j) + a``; column ``b`` to
    ``m = -lambda + 2b``. Entry is
    ``(-1)^((|m|-m)/2) (-i)^ny d^{lambda/2}_{(nx-ny)/2, m/2}(pi/2)``.
    """
    if not 0 <= n <= 2 * rep.two_j:
        raise DomainError(f"total mode {n} outside 0..{2 * rep.two_j}")
    lam = shell_width(rep, n)
    nx = _shell_nx(rep, n)
    ny = n - nx
    # row index into d^{lam/2}: mu + lam/2 with mu = (nx - ny)/2
    rows = (nx - ny + lam) // 2
    d = wigner_d_matrix(lam, np.pi / 2)[rows]
    m = np.arange(-lam, lam + 1, 2)
    sign_m = (-1.0) ** ((np.abs(m) - m) // 2)
    phase_ny = (-1j) ** (ny % 4)
    return phase_ny[:, None] * d * sign_m[None, :]


def polar_wavefunction(rep: OscillatorRep, idx: PolarIndex, table: WavefunctionTable) -> PolarMode:
    """Polar mode ``Lambda_{n,m}`` on the ``N x N`` screen, indexed ``[ix, iy]``."""
    if table.rep != rep:
        raise DomainError(f"wavefunction table built for {table.rep}, not {rep}")
    if not idx.valid_for(rep):
        raise DomainError(f"{idx} is not a polar label for j={rep.j}")
    coeffs = polar_coefficients(rep, idx.n)[:, (idx.m + shell_width(rep, idx.n)) // 2]
    W = table.values
    nx = _shell_nx(rep, idx.n)
    values = np.einsum("a,ai,ak->ik", coeffs, W[nx], W[idx.n - nx])
    return PolarMode(idx, values)


@lru_cache(maxsize=8)
def _cartesian_order(two_j: int) -> tuple[np.ndarray, np.ndarray]:
    rep = OscillatorRep(two_j)
    nx = np.concatenate([_shell_nx(rep, n) for n in range(2 * two_j + 1)])
    shells = np.concatenate([np.full(len(_shell_nx(rep, n)), n) for n in range(2 * two_j + 1)])
    return nx, shells - nx


def cartesian_matrix(rep: OscillatorRep) -> np.ndarray:
    """All Cartesian modes as columns of an ``N**2 x N**2`` orthogonal matrix.

    Columns are ordered by shell ``n`` and then ``nx``, matching the row
    blocks of :func:`polar_coefficients`.
    """
    W = wavefunction_table(rep).values
    nx, ny = _cartesian_order(rep.two_j)
    N = rep.N
    return (W[nx][:, :, None] * W[ny][:, None, :]).reshape(N * N, N * N).T


def polar_matrix(rep: OscillatorRep) -> tuple[np.ndarray, np.ndarray]:
    """All polar modes as columns, plus the angular label of each column.

    Column order follows :func:`enumerate_polar_indices`.
    """
    N2 = rep.N ** 2
    B = cartesian_matrix(rep)
    L = np.empty((N2, N2), dtype=complex)
    ms = np.empty(N2, dtype=int)
    start = 0
    for n in range(2 * rep.two_j + 1):
        c = polar_coefficients(rep, n)
        k = c.shape[0]
        L[:, start:start + k] = B[:, start:start + k] @ c
        w = shell_width(rep, n)
        ms[start:start + k] = np.arange(-w, w + 1, 2)
        start += k
    return L, ms
