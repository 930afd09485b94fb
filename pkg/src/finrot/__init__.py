"""Unitary rotation of square pixellated images in the finite oscillator model.

Typical use::

    from finrot import MonoImage, KernelCache, rotate_mono, normalize_mono
    cache = KernelCache()
    rotated = rotate_mono(image, np.pi / 8, cache)
    shown, stats = normalize_mono(rotated)
"""
from .errors import ConsistencyError, DomainError, KernelFormatError
from .gibbs import (GibbsSweep, OvershootReport, SweepRow, antidiagonal_profile, gibbs_sweep,
                    overshoot_stats, write_profile_csv, write_sweep_csv)
from .image import (MonoImage, NormalizationStats, RgbImage, clip_mono, clip_rgb, from_bytes,
                    normalize_mono, normalize_rgb_joint, normalize_rgb_per_channel, pattern_delta,
                    pattern_letter_r, pattern_step, rotate_mono, rotate_rgb, to_bytes)
from .imageio import read_image, write_image
from .kernel import (KernelCache, RotationKernel, apply_kernel, build_kernel, build_kernel_cartesian,
                     build_kernel_polar, compose_check, kernel_checksum, load_kernel, save_kernel)
from .oscillator import (OscillatorRep, WavefunctionTable, kravchuk_psi, su2_generators,
                         wavefunction_table, wigner_d_matrix, wigner_little_d)
from .polar import PolarIndex, cartesian_mode, enumerate_polar_indices, polar_matrix, polar_wavefunction

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
