"""Measurements of the Gibbs-like ripples in rotated images.

Rotating a pattern with sharp pixel-value jumps makes values escape
``[0, 1]``. :func:`overshoot_stats` reports the global extremes and their
locations, together with the main anti-diagonal profile and the extremes
restricted to the border pixels (where the finite model shows its own
vertex and edge behaviour). :func:`gibbs_sweep` repeats the measurement
over several screen sizes.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError
from .image import pattern_delta, pattern_step, rotate_mono

__all__ = [
    "OvershootReport",
    "SweepRow",
    "GibbsSweep",
    "antidiagonal_profile",
    "overshoot_stats",
    "gibbs_sweep",
    "strictly_decreasing",
    "write_sweep_csv",
    "write_profile_csv",
]

PATTERNS = {"delta": pattern_delta, "step": pattern_step}


@dataclass(frozen=True)
class OvershootReport:
    """Extremes of one image.

    ``s_pos`` and ``S_pos`` are ``(ix, iy)``; ties go to the smallest
    flattened index. ``edge_min``/``edge_max`` cover the outermost ring of
    pixels only and ``interior_min``/``interior_max`` everything else (equal
    to the edge values when ``N <= 2``).
    """

    s: float
    S: float
    s_pos: tuple[int, int]
    S_pos: tuple[int, int]
    profile: np.ndarray = field(repr=False)
    edge_min: float = 0.0
    edge_max: float = 0.0
    interior_min: float = 0.0
    interior_max: float = 0.0

    @property
    def undershoot(self) -> float:
        return abs(self.s)

    @property
    def overshoot(self) -> float:
        return self.S - 1.0


def _pixels(image) -> np.ndarray:
    return np.asarray(getattr(image, "pixels", image), dtype=float)


def antidiagonal_profile(image) -> np.ndarray:
    """Pixels ``(i, N-1-i)`` for ``i = 0..N-1``."""
    px = _pixels(image)
    N = px.shape[0]
    return px[np.arange(N), N - 1 - np.arange(N)].copy()


def overshoot_stats(image) -> OvershootReport:
    px = _pixels(image)
    N = px.shape[0]
    # argmin/argmax return the first occurrence in row-major order
    lo, hi = int(np.argmin(px)), int(np.argmax(px))
    ring = np.ones_like(px, dtype=bool)
    if N > 2:
        ring[1:-1, 1:-1] = False
    inner = px[~ring] if N > 2 else px[ring]
    return OvershootReport(
        s=float(px.flat[lo]),
        S=float(px.flat[hi]),
        s_pos=divmod(lo, N),
        S_pos=divmod(hi, N),
        profile=antidiagonal_profile(px),
        edge_min=float(px[ring].min()),
        edge_max=float(px[ring].max()),
        interior_min=float(inner.min()),
        interior_max=float(inner.max()),
    )


@dataclass(frozen=True)
class SweepRow:
    N: int
    s: float
    S: float

    @property
    def undershoot(self) -> float:
        return abs(self.s)

    @property
    def overshoot(self) -> float:
        return self.S - 1.0


@dataclass(frozen=True)
class GibbsSweep:
    pattern: str
    theta: float
    rows: list[SweepRow]
    reports: list[OvershootReport] = field(repr=False)

    @property
    def undershoot_decreasing(self) -> bool:
        return strictly_decreasing([r.undershoot for r in self.rows])

    @property
    def overshoot_decreasing(self) -> bool:
        # an S below 1 is no overshoot at all, so it counts as magnitude 0
        return strictly_decreasing([max(r.overshoot, 0.0) for r in self.rows])

    @property
    def escapes_both_sides(self) -> bool:
        """True when every row has ``s < 0 < 1 < S``."""
        return all(r.s < 0.0 and r.S > 1.0 for r in self.rows)


def strictly_decreasing(values) -> bool:
    values = list(values)
    return all(b < a for a, b in zip(values, values[1:]))


def gibbs_sweep(pattern: str, Ns, theta: float, kernels=None) -> GibbsSweep:
    """Rotate the delta or step pattern at each ``N`` and tabulate extremes.

    Whether the extremes shrink with ``N`` is reported through
    :attr:`GibbsSweep.undershoot_decreasing` and
    :attr:`GibbsSweep.overshoot_decreasing`, never assumed.
    """
    if pattern not in PATTERNS:
        raise DomainError(f"unknown pattern {pattern!r}; choose from {sorted(PATTERNS)}")
    make = PATTERNS[pattern]
    images = [make(int(N)) for N in Ns]  # parity errors surface before any kernel is built
    rows, reports = [], []
    for img in images:
        rep = overshoot_stats(rotate_mono(img, theta, kernels))
        rows.append(SweepRow(img.N, rep.s, rep.S))
        reports.append(rep)
    return GibbsSweep(pattern, float(theta), rows, reports)


def write_sweep_csv(path, sweep: GibbsSweep) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "s", "S", "undershoot", "overshoot"])
        for r in sweep.rows:
            w.writerow([r.N, repr(r.s), repr(r.S), repr(r.undershoot), repr(r.overshoot)])


def write_profile_csv(path, profile) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "value"])
        for i, v in enumerate(np.asarray(profile, dtype=float)):
            w.writerow([i, repr(float(v))])
