"""Command-line interface: ``finrot rotate | kernel | pattern | analyze | selftest``.

Exit status: 0 success, 2 usage, 3 I/O, 4 format or domain, 5 numerical
consistency.
"""
from __future__ import annotations

import argparse
import logging
import os
import re
import sys
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np
from PIL import UnidentifiedImageError

from . import gibbs
from .errors import ConsistencyError, DomainError
from .image import (MonoImage, RgbImage, clip_mono, clip_rgb, normalize_mono, normalize_rgb_joint,
                    normalize_rgb_per_channel, pattern_delta, pattern_letter_r, pattern_step,
                    rotate_mono, rotate_rgb)
from .imageio import read_image, write_csv, write_image
from .kernel import KernelCache, build_kernel_cartesian, kernel_checksum, save_kernel
from .oscillator import OscillatorRep
from .selftest import run_selftest

__all__ = ["main", "parse_angle", "build_parser", "RunConfig"]

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FORMAT, EXIT_NUMERIC = 0, 2, 3, 4, 5
MODES = ("normalize-joint", "normalize-per-channel", "clip", "raw")
CACHE_ENV = "FINROT_CACHE_DIR"

log = logging.getLogger("finrot")

_PI_RE = re.compile(r"^([+-]?)(\d*)\s*\*?\s*pi(?:\s*/\s*(\d+))?$")


class UsageError(Exception):
    pass


def parse_angle(text: str, unit: str = "rad") -> float:
    """Angle in radians from ``"pi/8"``, ``"-3pi/4"``, ``"0.5"`` or, with
    ``unit="deg"``, ``"22.5"``.

    Pi-fractions are evaluated as ``k * pi / d`` in one rounding step, so
    ``pi/8`` and ``pi/4`` are the exact halves they should be.
    """
    s = text.strip().lower()
    m = _PI_RE.match(s)
    if m:
        sign, num, den = m.groups()
        if den is not None and int(den) == 0:
            raise ValueError(f"bad angle {text!r}: zero denominator")
        coef = Fraction(int(num or 1), int(den or 1))
        value = coef.numerator * np.pi / coef.denominator
        return -value if sign == "-" else value
    if s.endswith("deg"):
        s, unit = s[:-3].strip(), "deg"
    try:
        value = float(s)
    except ValueError:
        raise ValueError(f"bad angle {text!r}; use radians, degrees or forms like pi/8, 3pi/4") from None
    if not np.isfinite(value):
        raise ValueError(f"angle must be finite, got {text!r}")
    return float(np.deg2rad(value)) if unit == "deg" else value


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    angle: float = 0.0
    mode: str = "normalize-joint"
    raw_csv: Path | None = None
    cache_dir: Path | None = None
    threads: int = 1

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        """Snapshot of the options that matter for reproducing a run."""
        angle = getattr(args, "angle", None)
        cache_dir = getattr(args, "cache_dir", None) or os.environ.get(CACHE_ENV) or None
        return cls(
            command=args.command,
            input=getattr(args, "input", None),
            output=getattr(args, "output", None),
            angle=_angle(args) if angle is not None else 0.0,
            mode=getattr(args, "mode", "normalize-joint"),
            raw_csv=getattr(args, "raw_csv", None),
            cache_dir=Path(cache_dir) if cache_dir else None,
            threads=getattr(args, "threads", 1),
        )


def _angle_arg(parser):
    parser.add_argument("--angle", required=True, help="radians, 'NNdeg', or pi-fractions such as pi/8")
    parser.add_argument("--unit", choices=("rad", "deg"), default="rad",
                        help="unit for plain numbers (default rad)")


def _common(parser):
    parser.add_argument("--cache-dir", type=Path, default=None,
                        help=f"kernel cache directory (default ${CACHE_ENV}, else memory only)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for kernel builds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finrot", description="Unitary rotation of square pixellated images.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rotate", help="rotate a PNG/PGM/PPM/CSV image")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    _angle_arg(p)
    p.add_argument("--mode", choices=MODES, default="normalize-joint",
                   help="display tactic for the output (raw needs a .csv output)")
    p.add_argument("--raw-csv", type=Path, help="also write the unnormalized data-image here")
    _common(p)

    p = sub.add_parser("kernel", help="precompute and store a rotation kernel")
    p.add_argument("--N", type=int, required=True)
    _angle_arg(p)
    p.add_argument("-o", "--output", type=Path, help="kernel file (default: inside the cache directory)")
    _common(p)

    p = sub.add_parser("pattern", help="write a test pattern as PNG and CSV")
    p.add_argument("kind", choices=("delta", "step", "letter"))
    p.add_argument("--N", type=int, required=True)
    p.add_argument("-o", "--output", type=Path, required=True, help="PNG path; the CSV goes next to it")

    p = sub.add_parser("analyze", help="overshoot statistics of a pattern sweep or an image")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pattern", choices=sorted(gibbs.PATTERNS))
    src.add_argument("--input", type=Path, help="image to analyze (rotated first if --angle is given)")
    p.add_argument("--Ns", help="comma-separated screen sizes for --pattern")
    p.add_argument("--angle", help="rotation angle (required with --pattern)")
    p.add_argument("--unit", choices=("rad", "deg"), default="rad")
    p.add_argument("-o", "--output", type=Path, required=True, help="CSV table N,s,S,undershoot,overshoot")
    p.add_argument("--profile", type=Path, help="anti-diagonal profile CSV (suffixed _N<N> for sweeps)")
    _common(p)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--j", default="4", help="largest spin label j (default 4)")
    # test hook: added to one kernel entry so that the unitarity suite must fail
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def _cache(args) -> KernelCache:
    directory = args.cache_dir or os.environ.get(CACHE_ENV) or None
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    return KernelCache(directory, workers=args.threads)


def _angle(args) -> float:
    try:
        return parse_angle(args.angle, args.unit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _display(image, mode: str):
    if isinstance(image, MonoImage):
        if mode == "clip":
            return clip_mono(image), None
        return normalize_mono(image)
    if mode == "clip":
        return clip_rgb(image), None
    if mode == "normalize-per-channel":
        return normalize_rgb_per_channel(image)
    return normalize_rgb_joint(image)


def cmd_rotate(args) -> int:
    theta = _angle(args)
    if args.mode == "raw" and args.output.suffix.lower() != ".csv":
        raise UsageError("--mode raw writes a data-image and needs a .csv output")
    image = read_image(args.input)
    cache = _cache(args)
    if isinstance(image, RgbImage):
        rotated = rotate_rgb(image, theta, cache)
    else:
        rotated = rotate_mono(image, theta, cache)
    if args.raw_csv is not None:
        write_csv(args.raw_csv, rotated)
    if args.mode == "raw":
        write_csv(args.output, rotated)
        return EXIT_OK
    shown, stats = _display(rotated, args.mode)
    if stats is not None:
        for st in (stats if isinstance(stats, tuple) else (stats,)):
            print(f"{st.mode}: s={st.s!r} S={st.S!r} bounds=[{st.lower!r}, {st.upper!r}]")
    write_image(args.output, shown)
    return EXIT_OK


def cmd_kernel(args) -> int:
    theta = _angle(args)
    if args.N < 1:
        raise UsageError("--N must be positive")
    cache = _cache(args)
    if args.output is None and cache.directory is None:
        raise UsageError(f"give -o, --cache-dir or ${CACHE_ENV}")
    rep = OscillatorRep.from_size(args.N)
    start = time.perf_counter()
    kernel = build_kernel_cartesian(rep, theta, workers=args.threads)
    elapsed = time.perf_counter() - start
    path = args.output or cache.path_for(rep, theta)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_kernel(kernel, path)
    checksum = kernel_checksum(kernel)
    print(f"N={rep.N} theta={theta!r} threads={args.threads} build={elapsed:.3f}s "
          f"checksum={checksum:016x} -> {path}")
    return EXIT_OK


def cmd_pattern(args) -> int:
    makers = {"delta": pattern_delta, "step": pattern_step, "letter": pattern_letter_r}
    try:
        image = makers[args.kind](args.N)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    screen = MonoImage(image.pixels, screen=True)
    write_image(args.output, screen)
    write_csv(args.output.with_suffix(".csv"), image)
    return EXIT_OK


def _profile_path(path: Path, N: int) -> Path:
    return path.with_name(f"{path.stem}_N{N}{path.suffix}")


def cmd_analyze(args) -> int:
    if args.pattern is not None:
        if not args.Ns or args.angle is None:
            raise UsageError("--pattern needs --Ns and --angle")
        try:
            Ns = [int(v) for v in args.Ns.split(",")]
            sweep = gibbs.gibbs_sweep(args.pattern, Ns, _angle(args), _cache(args))
        except (ValueError, DomainError) as exc:
            raise UsageError(str(exc)) from None
        gibbs.write_sweep_csv(args.output, sweep)
        if args.profile is not None:
            for row, rep in zip(sweep.rows, sweep.reports):
                gibbs.write_profile_csv(_profile_path(args.profile, row.N), rep.profile)
        for row in sweep.rows:
            print(f"N={row.N} s={row.s!r} S={row.S!r}")
        print(f"undershoot decreasing: {sweep.undershoot_decreasing}; "
              f"overshoot decreasing: {sweep.overshoot_decreasing}")
        return EXIT_OK
    image = read_image(args.input)
    if isinstance(image, RgbImage):
        raise DomainError("analyze works on single-channel images")
    if args.angle is not None:
        image = rotate_mono(image, _angle(args), _cache(args))
    report = gibbs.overshoot_stats(image)
    row = gibbs.SweepRow(image.N, report.s, report.S)
    gibbs.write_sweep_csv(args.output, gibbs.GibbsSweep("image", 0.0, [row], [report]))
    if args.profile is not None:
        gibbs.write_profile_csv(args.profile, report.profile)
    print(f"N={row.N} s={report.s!r} at {report.s_pos} S={report.S!r} at {report.S_pos}")
    return EXIT_OK


def _perturbation(eps: float):
    def perturb(kernel):
        matrix = kernel.matrix.copy()
        matrix[0, 0] += eps
        return replace(kernel, matrix=matrix)
    return perturb


def cmd_selftest(args) -> int:
    try:
        max_two_j = OscillatorRep.from_j(args.j).two_j
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad --j: {exc}") from None

    perturb = _perturbation(args.perturb) if args.perturb else None
    results = run_selftest(max(max_two_j, 1), perturb=perturb, report=print)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return EXIT_NUMERIC
    print("all suites passed")
    return EXIT_OK


COMMANDS = {
    "rotate": cmd_rotate,
    "kernel": cmd_kernel,
    "pattern": cmd_pattern,
    "analyze": cmd_analyze,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        log.info("%s", RunConfig.from_args(args))
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"finrot {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"finrot {args.command}: numerical check failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, UnidentifiedImageError) as exc:
        # DomainError, KernelFormatError and unparsable file contents
        print(f"finrot {args.command}: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"finrot {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
