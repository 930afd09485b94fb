"""Unitary rotation kernels for square pixellated screens.

The kernel ``R(theta)`` is a real orthogonal ``N**2 x N**2`` matrix acting
on flattened images (row-major over ``(ix, iy)``). Two constructions are
provided and must agree:

* :func:`build_kernel_cartesian` sandwiches, shell by shell, the little-d
  matrix at angle ``2 theta`` between Cartesian modes; real arithmetic only.
  This is the default builder.
* :func:`build_kernel_polar` sums polar modes weighted by ``exp(-i m theta)``
  and discards the (vanishing) imaginary part after checking it.

Building costs ``O(N**6)`` flops through dense products, split into
independent blocks of output rows that a thread pool can share. Kernels can
be stored in a small binary cache format (:func:`save_kernel`).
"""
from __future__ import annotations

import hashlib
import logging
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import ConsistencyError, DomainError, KernelFormatError
from .oscillator import OscillatorRep, wigner_d_matrix
from .polar import cartesian_matrix, polar_matrix, shell_width

__all__ = [
    "RotationKernel",
    "build_kernel",
    "build_kernel_cartesian",
    "build_kernel_polar",
    "apply_kernel",
    "compose_check",
    "save_kernel",
    "kernel_checksum",
    "load_kernel",
    "KernelCache",
    "MAGIC",
    "IMAG_ERROR",
    "IMAG_WARN",
]

log = logging.getLogger(__name__)

MAGIC = b"FINROT1\0"
ROW_MAJOR = 0
IMAG_ERROR = 1e-6
IMAG_WARN = 1e-9
_HEADER = struct.Struct("<8sIId")
_CHECKSUM = struct.Struct("<Q")


@dataclass(frozen=True)
class RotationKernel:
    """Rotation kernel for one screen size and angle.

    ``matrix[p, p']`` with ``p = ix * N + iy``. ``imag_residue`` is the
    largest discarded imaginary part for polar-built kernels, else ``None``.
    """

    rep: OscillatorRep
    theta: float
    matrix: np.ndarray = field(repr=False)
    method: str = "cartesian"
    imag_residue: float | None = None

    @property
    def N(self) -> int:
        return self.rep.N


def _shell_blocks(rep: OscillatorRep):
    start = 0
    for n in range(2 * rep.two_j + 1):
        k = shell_width(rep, n) + 1
        yield n, slice(start, start + k)
        start += k


def _row_product(left: np.ndarray, right: np.ndarray, rows_per_task: int, workers: int | None):
    """``left @ right`` computed in independent blocks of output rows.

    Every block runs single-threaded BLAS so the result does not depend on
    the number of workers.
    """
    out = np.empty((left.shape[0], right.shape[1]), dtype=np.result_type(left, right))
    starts = range(0, left.shape[0], rows_per_task)

    def task(s):
        out[s:s + rows_per_task] = left[s:s + rows_per_task] @ right

    with threadpool_limits(limits=1, user_api="blas"):
        if workers is None or workers <= 1:
            for s in starts:
                task(s)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(task, starts))
    return out


def build_kernel_cartesian(rep: OscillatorRep, theta: float, workers: int | None = None) -> RotationKernel:
    """Kernel from Cartesian modes and little-d matrices at ``2 theta``.

    Parameters
    ----------
    rep : OscillatorRep
        Screen representation, ``N = 2j + 1``.
    theta : float
        Rotation angle in radians.
    workers : int, optional
        Threads for the row-block product. ``None`` runs the blocks serially.
    """
    theta = float(theta)
    B = cartesian_matrix(rep)
    X = np.empty_like(B.T)
    for n, block in _shell_blocks(rep):
        # transposed little-d: matches the polar-sum orientation of theta
        X[block] = wigner_d_matrix(shell_width(rep, n), 2 * theta).T @ B[:, block].T
    R = _row_product(B, X, rep.N, workers)
    return RotationKernel(rep, theta, R, "cartesian")


def build_kernel_polar(rep: OscillatorRep, theta: float, workers: int | None = None) -> RotationKernel:
    """Kernel as the polar-mode sum ``sum Lambda exp(-i m theta) Lambda^*``.

    Raises
    ------
    ConsistencyError
        If the imaginary part exceeds ``IMAG_ERROR``; the kernel is real
        exactly, so this signals a basis bug.
    """
    theta = float(theta)
    L, ms = polar_matrix(rep)
    R = _row_product(L * np.exp(-1j * ms * theta), L.conj().T, rep.N, workers)
    residue = float(np.abs(R.imag).max()) if R.size else 0.0
    if residue > IMAG_ERROR:
        raise ConsistencyError(f"polar kernel has imaginary residue {residue:.3e}")
    if residue > IMAG_WARN:
        log.warning("polar kernel imaginary residue %.3e above %.0e", residue, IMAG_WARN)
    return RotationKernel(rep, theta, np.ascontiguousarray(R.real), "polar", residue)


def build_kernel(rep: OscillatorRep, theta: float, workers: int | None = None,
                 method: str = "cartesian") -> RotationKernel:
    if method == "cartesian":
        return build_kernel_cartesian(rep, theta, workers)
    if method == "polar":
        return build_kernel_polar(rep, theta, workers)
    raise DomainError(f"unknown kernel method {method!r}")


def apply_kernel(kernel: RotationKernel, image):
    """Rotate an image with a prebuilt kernel.

    ``image`` is either an ``N x N`` array indexed ``[ix, iy]`` or a
    :class:`~finrot.image.MonoImage`; the result has the same kind and is a
    data-image (values not confined to ``[0, 1]``).
    """
    pixels = getattr(image, "pixels", image)
    pixels = np.asarray(pixels)
    if pixels.shape != (kernel.N, kernel.N):
        raise DomainError(f"image shape {pixels.shape} does not match kernel N={kernel.N}")
    out = (kernel.matrix @ pixels.reshape(-1)).reshape(kernel.N, kernel.N)
    if hasattr(image, "pixels"):
        return image.as_data(out)
    return out


def compose_check(k1: RotationKernel, k2: RotationKernel, reference: RotationKernel | None = None) -> float:
    """Max-norm residual of ``R(t1) R(t2) - R(t1 + t2)``.

    The reference kernel is built with ``k1``'s method unless supplied.
    """
    if k1.rep != k2.rep:
        raise DomainError(f"kernels built for different screens: {k1.rep} vs {k2.rep}")
    if reference is None:
        reference = build_kernel(k1.rep, k1.theta + k2.theta, method=k1.method)
    elif reference.rep != k1.rep:
        raise DomainError("reference kernel built for a different screen")
    return float(np.abs(k1.matrix @ k2.matrix - reference.matrix).max())


def _checksum(payload: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def kernel_checksum(kernel: RotationKernel) -> int:
    """BLAKE2b-64 checksum of the kernel values as stored on disk."""
    return _checksum(np.ascontiguousarray(kernel.matrix, dtype="<f8").tobytes())


def save_kernel(kernel: RotationKernel, path) -> None:
    """Write ``kernel`` in the FINROT1 cache format.

    Layout: magic ``b"FINROT1\\0"``; little-endian u32 ``2j``; u32 flattening
    flag (0 = row-major, ``ix`` major); f64 ``theta``; ``N**4`` f64 values
    row-major; u64 BLAKE2b-64 checksum of the value bytes.
    """
    payload = np.ascontiguousarray(kernel.matrix, dtype="<f8").tobytes()
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, kernel.rep.two_j, ROW_MAJOR, kernel.theta))
        fh.write(payload)
        fh.write(_CHECKSUM.pack(_checksum(payload)))
    os.replace(tmp, path)


def load_kernel(path) -> RotationKernel:
    """Read a kernel written by :func:`save_kernel`.

    Raises
    ------
    KernelFormatError
        On a bad magic, unknown flattening flag, wrong size or checksum.
    """
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + _CHECKSUM.size:
        raise KernelFormatError(f"{path}: file too short ({len(data)} bytes)")
    magic, two_j, flag, theta = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise KernelFormatError(f"{path}: bad magic {magic!r}")
    if flag != ROW_MAJOR:
        raise KernelFormatError(f"{path}: unsupported flattening flag {flag}")
    N = two_j + 1
    expected = _HEADER.size + 8 * N ** 4 + _CHECKSUM.size
    if len(data) != expected:
        raise KernelFormatError(f"{path}: size {len(data)} does not match N={N} (expected {expected})")
    payload = data[_HEADER.size:-_CHECKSUM.size]
    (stored,) = _CHECKSUM.unpack_from(data, len(data) - _CHECKSUM.size)
    if stored != _checksum(payload):
        raise KernelFormatError(f"{path}: checksum mismatch")
    matrix = np.frombuffer(payload, dtype="<f8").reshape(N * N, N * N).astype(float)
    return RotationKernel(OscillatorRep(two_j), theta, matrix)


class KernelCache:
    """Kernels keyed by ``(N, theta)``, held in memory and optionally on disk.

    Angles match bit-exactly. A corrupt cache file is logged and rebuilt.
    """

    def __init__(self, directory=None, workers: int | None = None):
        self.directory = Path(directory) if directory is not None else None
        self.workers = workers
        self._memory: dict[tuple[int, float], RotationKernel] = {}

    def path_for(self, rep: OscillatorRep, theta: float) -> Path:
        bits = struct.unpack("<Q", struct.pack("<d", float(theta)))[0]
        return self.directory / f"kernel_N{rep.N}_{bits:016x}.finrot"

    def get(self, rep: OscillatorRep, theta: float) -> RotationKernel:
        key = (rep.two_j, float(theta))
        if key in self._memory:
            return self._memory[key]
        kernel = None
        if self.directory is not None:
            path = self.path_for(rep, theta)
            if path.exists():
                try:
                    kernel = load_kernel(path)
                except KernelFormatError as exc:
                    log.warning("ignoring cached kernel: %s; rebuilding", exc)
                else:
                    if kernel.rep != rep or kernel.theta != float(theta):
                        log.warning("cached kernel %s has wrong parameters; rebuilding", path)
                        kernel = None
        if kernel is None:
            kernel = build_kernel_cartesian(rep, theta, self.workers)
            if self.directory is not None:
                self.directory.mkdir(parents=True, exist_ok=True)
                save_kernel(kernel, self.path_for(rep, theta))
        self._memory[key] = kernel
        return kernel
