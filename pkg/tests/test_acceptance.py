"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Tolerances are pinned here and never relaxed.
"""
import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from finrot.gibbs import gibbs_sweep, overshoot_stats
from finrot.image import (MonoImage, RgbImage, normalize_rgb_joint, pattern_delta, pattern_step, rotate_mono,
                          rotate_rgb)
from finrot.kernel import KernelCache, build_kernel_cartesian, build_kernel_polar
from finrot.oscillator import OscillatorRep, wavefunction_table
from finrot.polar import enumerate_polar_indices, polar_matrix

SPINS = [OscillatorRep(t) for t in range(1, 13)]  # j = 1/2, 1, ..., 6
RNG = np.random.default_rng(20240601)
THETAS = RNG.uniform(-np.pi, np.pi, 8)
FIXTURES = json.loads((Path(__file__).parent / "fixtures" / "gibbs_extremes.json").read_text())

TOL_UNITARY = 1e-9
TOL_COMPOSE = 1e-9
TOL_DUAL = 1e-9
TOL_IMAG = 1e-9
TOL_GRAM = 1e-10
TOL_PHASE = 1e-9
TOL_FIXTURE = 1e-10
TOL_RGB = 1e-8
TOL_IDENTITY = 1e-10
TOL_NORM = 1e-9


def report(number, title, passed, detail, out=None):
    line = f"[criterion {number:2d}] {'PASS' if passed else 'FAIL'} {title}: {detail}"
    if out is None:
        print(line)
    else:
        with out.disabled():
            print("\n" + line)
    return passed


def check_unitarity():
    start = time.perf_counter()
    worst = 0.0
    for rep in SPINS:
        eye = np.eye(rep.N ** 2)
        for theta in THETAS:
            R = build_kernel_cartesian(rep, theta).matrix
            worst = max(worst, np.abs(R @ R.T - eye).max())
    elapsed = time.perf_counter() - start
    return worst < TOL_UNITARY and elapsed < 60, f"max |RR^T - I| = {worst:.2e} (tol {TOL_UNITARY:.0e}), {elapsed:.1f}s (limit 60s)"


def check_composition():
    start = time.perf_counter()
    worst = 0.0
    for rep in [OscillatorRep(0)] + SPINS:
        half = build_kernel_cartesian(rep, np.pi / 8).matrix
        worst = max(worst, np.abs(half @ half - build_kernel_cartesian(rep, np.pi / 4).matrix).max())
    elapsed = time.perf_counter() - start
    return worst < TOL_COMPOSE and elapsed < 30, f"max residual {worst:.2e} (tol {TOL_COMPOSE:.0e}), {elapsed:.1f}s (limit 30s)"


def _dual_pairs():
    for rep in [OscillatorRep(0)] + SPINS:
        for theta in (np.pi / 8, *THETAS[:3]):
            yield build_kernel_cartesian(rep, theta), build_kernel_polar(rep, theta)


def check_dual():
    worst = max(np.abs(c.matrix - p.matrix).max() for c, p in _dual_pairs())
    return worst < TOL_DUAL, f"max |R_polar - R_cartesian| = {worst:.2e} (tol {TOL_DUAL:.0e})"


def check_realness():
    worst = max(p.imag_residue for _, p in _dual_pairs())
    return worst < TOL_IMAG, f"max imaginary residue {worst:.2e} (tol {TOL_IMAG:.0e})"


def check_basis():
    worst, counts_ok = 0.0, True
    for rep in [OscillatorRep(t) for t in range(0, 11)]:
        W = wavefunction_table(rep).values
        L, _ = polar_matrix(rep)
        n1, n2 = rep.N, rep.N ** 2
        counts_ok &= len(enumerate_polar_indices(rep)) == n2 == L.shape[1]
        worst = max(worst, np.abs(W @ W.T - np.eye(n1)).max(), np.abs(W.T @ W - np.eye(n1)).max(),
                    np.abs(L.conj().T @ L - np.eye(n2)).max(), np.abs(L @ L.conj().T - np.eye(n2)).max())
    return worst < TOL_GRAM and counts_ok, f"max Gram residual {worst:.2e} (tol {TOL_GRAM:.0e}), counts = N^2: {counts_ok}"


def check_phases():
    worst = 0.0
    for rep in [OscillatorRep(t) for t in range(0, 9)]:
        L, ms = polar_matrix(rep)
        for theta in THETAS[:4]:
            R = build_kernel_cartesian(rep, theta).matrix
            # R is real, so rotating Re and Im separately equals R @ L
            worst = max(worst, np.abs(R @ L.real + 1j * (R @ L.imag) - L * np.exp(-1j * ms * theta)).max())
    return worst < TOL_PHASE, f"max |R Lambda - e^(-im theta) Lambda| = {worst:.2e} (tol {TOL_PHASE:.0e})"


def check_gibbs():
    start = time.perf_counter()
    cache = KernelCache()
    problems = []
    sweeps = [gibbs_sweep("delta", [11, 31, 51], np.pi / 4, cache), gibbs_sweep("step", [10, 30, 50], np.pi / 4, cache)]
    for sw in sweeps:
        table = ", ".join(f"N={r.N}: s={r.s:.4f} S={r.S:.4f}" for r in sw.rows)
        if not sw.escapes_both_sides:
            problems.append(f"{sw.pattern} not s<0<1<S ({table})")
        if not sw.overshoot_decreasing:
            problems.append(f"{sw.pattern} S-1 not strictly decreasing ({table})")
    drift = 0.0
    angles = {"pi/4": np.pi / 4, "pi/8": np.pi / 8}
    for case in FIXTURES["cases"]:
        make = pattern_delta if case["pattern"] == "delta" else pattern_step
        rep = overshoot_stats(rotate_mono(make(case["N"]), angles[case["angle"]], cache))
        drift = max(drift, abs(rep.s - case["s"]), abs(rep.S - case["S"]))
    if drift >= TOL_FIXTURE:
        problems.append(f"fixture drift {drift:.2e}")
    elapsed = time.perf_counter() - start
    if elapsed >= 300:
        problems.append(f"runtime {elapsed:.0f}s")
    detail = f"fixture drift {drift:.1e} (tol {TOL_FIXTURE:.0e}), {elapsed:.1f}s"
    if problems:
        detail += "; " + "; ".join(problems)
    return not problems, detail


def check_rgb():
    start = time.perf_counter()
    cache = KernelCache()
    img = RgbImage.from_array(RNG.random((52, 52, 3)))
    twice = rotate_rgb(rotate_rgb(img, np.pi / 8, cache), np.pi / 8, cache)
    once = rotate_rgb(img, np.pi / 4, cache)
    compose = np.abs(twice.to_array() - once.to_array()).max()
    shown, _ = normalize_rgb_joint(once)
    a, b = once.to_array(), shown.to_array()
    ratio_in = (a[..., 0] - a[..., 1]) / (a[..., 1] - a[..., 2])
    ratio_out = (b[..., 0] - b[..., 1]) / (b[..., 1] - b[..., 2])
    ratio_err = np.abs(ratio_in - ratio_out).max() / max(1.0, np.abs(ratio_in).max())
    elapsed = time.perf_counter() - start
    passed = compose < TOL_RGB and ratio_err < 1e-9 and elapsed < 300
    return passed, (f"pi/8 twice vs pi/4 max diff {compose:.2e} (tol {TOL_RGB:.0e}), "
                    f"joint-normalization ratio error {ratio_err:.1e}, {elapsed:.1f}s incl. 2 kernels (limit 300s)")


def check_identity():
    worst = 0.0
    for N in (1, 2, 5, 10, 17, 26):
        img = MonoImage(RNG.normal(size=(N, N)))
        worst = max(worst, np.abs(rotate_mono(img, 0.0).pixels - img.pixels).max())
    return worst < TOL_IDENTITY, f"max |R(0)F - F| = {worst:.2e} (tol {TOL_IDENTITY:.0e})"


def check_norm():
    cache = KernelCache()
    worst = 0.0
    for k in range(20):
        rep = SPINS[k % len(SPINS)]
        img = MonoImage(RNG.normal(size=(rep.N, rep.N)))
        out = rotate_mono(img, THETAS[k % 8], cache)
        worst = max(worst, abs(np.linalg.norm(out.pixels) - np.linalg.norm(img.pixels)))
    return worst < TOL_NORM, f"max | |RF| - |F| | = {worst:.2e} (tol {TOL_NORM:.0e})"


CRITERIA = [
    (1, "unitarity", check_unitarity),
    (2, "group composition", check_composition),
    (3, "dual-formula equivalence", check_dual),
    (4, "realness of the polar kernel", check_realness),
    (5, "basis health", check_basis),
    (6, "rotation eigenmodes", check_phases),
    (7, "Gibbs-like regression", check_gibbs),
    (8, "RGB pipeline", check_rgb),
    (9, "zero-angle identity", check_identity),
    (10, "norm conservation", check_norm),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{n}-{t.replace(' ', '-')}" for n, t, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    passed, detail = check()
    assert report(number, title, passed, detail, capsys), detail


if __name__ == "__main__":
    results = [report(n, t, *check()) for n, t, check in CRITERIA]
    sys.exit(0 if all(results) else 1)
