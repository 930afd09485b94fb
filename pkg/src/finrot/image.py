"""Image containers, rotation pipelines and display tactics.

Pixel arrays are indexed ``[ix, iy]`` with ``ix = qx + j`` and
``iy = qy + j``. A *data-image* holds unbounded reals as produced by the
unitary rotation; a *screen-image* has every value in ``[0, 1]`` and is
what gets quantized for display. The two are told apart by the ``screen``
flag, never by inspecting values.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .kernel import KernelCache, RotationKernel, apply_kernel, build_kernel_cartesian
from .oscillator import OscillatorRep

__all__ = [
    "MonoImage",
    "RgbImage",
    "NormalizationStats",
    "rotate_mono",
    "rotate_rgb",
    "normalize_mono",
    "normalize_rgb_joint",
    "normalize_rgb_per_channel",
    "clip_mono",
    "clip_rgb",
    "pattern_delta",
    "pattern_step",
    "pattern_letter_r",
    "to_bytes",
    "from_bytes",
]


@dataclass(frozen=True)
class MonoImage:
    """Single-channel square image.

    ``display`` records how a screen-image was produced (``"normalize"``,
    ``"clip"``) or is ``None``.
    """

    pixels: np.ndarray = field(repr=False)
    screen: bool = False
    display: str | None = None

    def __post_init__(self):
        pixels = np.array(self.pixels, dtype=float)
        if pixels.ndim != 2 or pixels.shape[0] != pixels.shape[1] or pixels.shape[0] < 1:
            raise DomainError(f"screen must be square N×N, got shape {pixels.shape}")
        if self.screen and (pixels.min() < 0 or pixels.max() > 1):
            raise DomainError("screen-image values must lie in [0, 1]")
        pixels.setflags(write=False)
        object.__setattr__(self, "pixels", pixels)

    @property
    def rep(self) -> OscillatorRep:
        return OscillatorRep.from_size(self.pixels.shape[0])

    @property
    def N(self) -> int:
        return self.pixels.shape[0]

    def as_data(self, pixels) -> "MonoImage":
        return MonoImage(pixels)


@dataclass(frozen=True)
class RgbImage:
    r: MonoImage
    g: MonoImage
    b: MonoImage
    display: str | None = None

    def __post_init__(self):
        if not (self.r.N == self.g.N == self.b.N):
            raise DomainError("RGB channels must share one screen size")
        if len({self.r.screen, self.g.screen, self.b.screen}) != 1:
            raise DomainError("RGB channels must all be data- or all screen-images")

    @classmethod
    def from_array(cls, array, screen: bool = False, display: str | None = None) -> "RgbImage":
        """Build from an ``N x N x 3`` array indexed ``[ix, iy, channel]``."""
        array = np.asarray(array, dtype=float)
        if array.ndim != 3 or array.shape[2] != 3:
            raise DomainError(f"expected an N×N×3 array, got shape {array.shape}")
        return cls(*(MonoImage(array[:, :, c], screen, display) for c in range(3)), display=display)

    @property
    def channels(self) -> tuple[MonoImage, MonoImage, MonoImage]:
        return (self.r, self.g, self.b)

    @property
    def screen(self) -> bool:
        return self.r.screen

    @property
    def N(self) -> int:
        return self.r.N

    def to_array(self) -> np.ndarray:
        return np.stack([c.pixels for c in self.channels], axis=-1)


@dataclass(frozen=True)
class NormalizationStats:
    """Extreme data values ``s <= S`` and the widened bounds actually used."""

    s: float
    S: float
    mode: str = "mono"

    @property
    def lower(self) -> float:
        return min(0.0, self.s)

    @property
    def upper(self) -> float:
        return max(1.0, self.S)


def _kernel_for(rep: OscillatorRep, theta: float, kernels) -> RotationKernel:
    if kernels is None:
        return build_kernel_cartesian(rep, theta)
    if isinstance(kernels, KernelCache):
        return kernels.get(rep, theta)
    if isinstance(kernels, RotationKernel):
        if kernels.rep != rep or kernels.theta != float(theta):
            raise DomainError(
                f"kernel is for N={kernels.N}, theta={kernels.theta}; image needs N={rep.N}, theta={theta}")
        return kernels
    raise DomainError(f"unsupported kernel source {type(kernels).__name__}")


def rotate_mono(image: MonoImage, theta: float, kernels=None) -> MonoImage:
    """Rotate by ``theta`` radians; the result is a data-image.

    ``kernels`` may be a prebuilt :class:`RotationKernel`, a
    :class:`KernelCache`, or ``None`` to build the kernel on the spot.
    """
    return apply_kernel(_kernel_for(image.rep, theta, kernels), image)


def rotate_rgb(image: RgbImage, theta: float, kernels=None) -> RgbImage:
    """Rotate the three channels with one shared kernel."""
    kernel = _kernel_for(image.r.rep, theta, kernels)
    return RgbImage(*(apply_kernel(kernel, c) for c in image.channels))


def _affine(pixels: np.ndarray, stats: NormalizationStats) -> np.ndarray:
    lo, hi = stats.lower, stats.upper
    if lo == 0.0 and hi == 1.0:
        return pixels.copy()
    # clamp guards against the last-ulp excursions of the division
    return np.clip((pixels - lo) / (hi - lo), 0.0, 1.0)


def normalize_mono(image: MonoImage) -> tuple[MonoImage, NormalizationStats]:
    """Affine map into ``[0, 1]`` using ``min(0, s)`` and ``max(1, S)``.

    Images already inside ``[0, 1]`` come back unchanged (as screen-images).
    """
    stats = NormalizationStats(float(image.pixels.min()), float(image.pixels.max()))
    return MonoImage(_affine(image.pixels, stats), screen=True, display="normalize"), stats


def normalize_rgb_joint(image: RgbImage) -> tuple[RgbImage, NormalizationStats]:
    """One affine map, from the extremes over all channels, for R, G and B."""
    stacked = image.to_array()
    stats = NormalizationStats(float(stacked.min()), float(stacked.max()), mode="joint")
    channels = [MonoImage(_affine(c.pixels, stats), True, "normalize") for c in image.channels]
    return RgbImage(*channels, display="normalize-joint"), stats


def normalize_rgb_per_channel(image: RgbImage) -> tuple[RgbImage, tuple[NormalizationStats, ...]]:
    """Normalize each channel on its own extremes. Shifts hue; kept for comparison."""
    out, stats = [], []
    for c in image.channels:
        st = NormalizationStats(float(c.pixels.min()), float(c.pixels.max()), mode="per-channel")
        out.append(MonoImage(_affine(c.pixels, st), True, "normalize"))
        stats.append(st)
    return RgbImage(*out, display="normalize-per-channel"), tuple(stats)


def clip_mono(image: MonoImage) -> MonoImage:
    return MonoImage(np.clip(image.pixels, 0.0, 1.0), screen=True, display="clip")


def clip_rgb(image: RgbImage) -> RgbImage:
    return RgbImage(*(clip_mono(c) for c in image.channels), display="clip")


def pattern_delta(N: int) -> MonoImage:
    """Line of ones along ``qy = 0`` on an odd screen."""
    if int(N) != N or N < 1 or N % 2 == 0:
        raise DomainError(f"delta pattern needs odd N (center row undefined), got {N}")
    pixels = np.zeros((N, N))
    pixels[:, N // 2] = 1.0
    return MonoImage(pixels)


def pattern_step(N: int) -> MonoImage:
    """Zeros for ``qy <= -1/2`` and ones for ``qy >= 1/2`` on an even screen."""
    if int(N) != N or N < 2 or N % 2:
        raise DomainError(f"step pattern needs even N, got {N}")
    pixels = np.zeros((N, N))
    pixels[:, N // 2:] = 1.0
    return MonoImage(pixels)


def pattern_letter_r(N: int = 50) -> MonoImage:
    """Binary block letter "R" of ones on a zero background.

    Drawn in file orientation (rows top to bottom) from a fixed 10 x 10
    stencil, so it is reproducible without any font.
    """
    if N < 10:
        raise DomainError("letter pattern needs N >= 10")
    stencil = np.array([
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 1, 1, 1, 1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 1, 1, 0, 0],
        [0, 1, 1, 0, 0, 0, 1, 1, 0, 0],
        [0, 1, 1, 1, 1, 1, 1, 0, 0, 0],
        [0, 1, 1, 1, 1, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 1, 1, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 1, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    ], dtype=float)
    rows = np.arange(N) * 10 // N
    drawing = stencil[np.ix_(rows, rows)]
    return MonoImage(drawing.T)


def from_bytes(values) -> np.ndarray:
    """8-bit channel values to floats ``v = byte / 255``."""
    return np.asarray(values, dtype=float) / 255.0


def to_bytes(values) -> np.ndarray:
    """Screen values to 8-bit, rounding half away from zero."""
    values = np.asarray(values, dtype=float)
    if values.size and (values.min() < 0 or values.max() > 1):
        raise DomainError("only screen values in [0, 1] can be quantized")
    return np.floor(values * 255.0 + 0.5).astype(np.uint8)
