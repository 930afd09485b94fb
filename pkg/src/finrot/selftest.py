"""Invariant suites run by ``finrot selftest``.

Each suite loops over screens with ``2j = 1 .. max_two_j`` and reports the
worst residual against a fixed tolerance. The ``perturb`` hook receives
every kernel before the unitarity check; it exists so tests can confirm
that a broken kernel is caught.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernel import RotationKernel, build_kernel_cartesian, build_kernel_polar
from .oscillator import OscillatorRep, wavefunction_table
from .polar import polar_matrix

__all__ = ["SuiteResult", "TOLERANCES", "run_selftest"]

TOLERANCES = {
    "unitarity": 1e-9,
    "composition": 1e-9,
    "dual-formula": 1e-9,
    "orthonormality": 1e-10,
}

# fixed angles so that runs are reproducible
_ANGLES = (0.0, 0.3, np.pi / 8, -1.1, 2.5)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    residual: float
    tolerance: float
    worst_two_j: int

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name:<15} max residual {self.residual:.3e} "
                f"(tol {self.tolerance:.0e}, worst at N={self.worst_two_j + 1})")


def _worst(name, values):
    residual, two_j = max(values)
    return SuiteResult(name, residual, TOLERANCES[name], two_j)


def _unitarity(reps, perturb):
    for rep in reps:
        eye = np.eye(rep.N ** 2)
        for theta in _ANGLES:
            k = perturb(build_kernel_cartesian(rep, theta))
            yield float(np.abs(k.matrix @ k.matrix.T - eye).max()), rep.two_j


def _composition(reps):
    for rep in reps:
        half = build_kernel_cartesian(rep, np.pi / 8).matrix
        full = build_kernel_cartesian(rep, np.pi / 4).matrix
        yield float(np.abs(half @ half - full).max()), rep.two_j


def _dual(reps):
    for rep in reps:
        for theta in _ANGLES:
            c = build_kernel_cartesian(rep, theta).matrix
            p = build_kernel_polar(rep, theta)
            yield max(float(np.abs(c - p.matrix).max()), p.imag_residue), rep.two_j


def _orthonormality(reps):
    for rep in reps:
        W = wavefunction_table(rep).values
        L, _ = polar_matrix(rep)
        res = max(
            np.abs(W @ W.T - np.eye(rep.N)).max(),
            np.abs(W.T @ W - np.eye(rep.N)).max(),
            np.abs(L.conj().T @ L - np.eye(rep.N ** 2)).max(),
            np.abs(L @ L.conj().T - np.eye(rep.N ** 2)).max(),
        )
        yield float(res), rep.two_j


def run_selftest(max_two_j: int = 8,
                 perturb: Callable[[RotationKernel], RotationKernel] | None = None,
                 report: Callable[[str], None] | None = None) -> list[SuiteResult]:
    """Run all suites for ``2j = 1 .. max_two_j``.

    Parameters
    ----------
    max_two_j : int
        Largest ``2j``; the default 8 covers ``j <= 4``.
    perturb : callable, optional
        Applied to each kernel before the unitarity check.
    report : callable, optional
        Receives one status line per suite as it finishes.
    """
    reps = [OscillatorRep(t) for t in range(1, max_two_j + 1)]
    perturb = perturb or (lambda k: k)
    suites = [
        lambda: _worst("unitarity", _unitarity(reps, perturb)),
        lambda: _worst("composition", _composition(reps)),
        lambda: _worst("dual-formula", _dual(reps)),
        lambda: _worst("orthonormality", _orthonormality(reps)),
    ]
    results = []
    for suite in suites:
        result = suite()
        results.append(result)
        if report is not None:
            report(result.line())
    return results
