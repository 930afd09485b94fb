"""Reading and writing images.

Supported: 8-bit PNG (gray or RGB), ASCII PGM/PPM (``P2``/``P3``) and CSV
of floats for data-images. Files are stored in the usual picture
orientation: file row ``r`` is ``iy = r`` and file column ``c`` is
``ix = c``, so in memory ``pixels = file_array.T``.

RGB data-images go to CSV as three ``N x N`` blocks (R, G, B) stacked
vertically, preceded by a ``# channels=3`` comment line.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DomainError
from .image import MonoImage, RgbImage, from_bytes, to_bytes

__all__ = ["read_image", "write_image", "read_csv", "write_csv", "write_pnm", "read_pnm"]


def _to_image(file_array: np.ndarray, screen: bool):
    if file_array.ndim == 2:
        if file_array.shape[0] != file_array.shape[1]:
            raise DomainError(f"screen must be square N×N, got {file_array.shape[1]}×{file_array.shape[0]}")
        return MonoImage(file_array.T, screen=screen)
    if file_array.shape[0] != file_array.shape[1]:
        raise DomainError(f"screen must be square N×N, got {file_array.shape[1]}×{file_array.shape[0]}")
    return RgbImage.from_array(file_array.transpose(1, 0, 2), screen=screen)


def _file_array(image) -> np.ndarray:
    if isinstance(image, MonoImage):
        return image.pixels.T
    return image.to_array().transpose(1, 0, 2)


def read_pnm(path) -> tuple[np.ndarray, int]:
    """Raw sample array and maxval of an ASCII PGM/PPM file."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if not tokens or tokens[0] not in ("P2", "P3"):
        raise DomainError(f"{path}: not an ASCII PGM/PPM file")
    channels = 1 if tokens[0] == "P2" else 3
    width, height, maxval = (int(t) for t in tokens[1:4])
    samples = np.array(tokens[4:], dtype=np.int64)
    if samples.size != width * height * channels:
        raise DomainError(f"{path}: expected {width * height * channels} samples, found {samples.size}")
    shape = (height, width) if channels == 1 else (height, width, 3)
    return samples.reshape(shape), maxval


def write_pnm(path, samples: np.ndarray) -> None:
    samples = np.asarray(samples)
    magic = "P2" if samples.ndim == 2 else "P3"
    height, width = samples.shape[:2]
    rows = samples.reshape(height, -1)
    with open(path, "w") as fh:
        fh.write(f"{magic}\n{width} {height}\n255\n")
        for row in rows:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def read_csv(path):
    """Data-image from CSV (see module docstring for the RGB layout)."""
    values = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    rows, cols = values.shape
    if rows == cols:
        return MonoImage(values.T)
    if rows == 3 * cols:
        return RgbImage.from_array(values.reshape(3, cols, cols).transpose(2, 1, 0))
    raise DomainError(f"screen must be square N×N, got a {rows}×{cols} table")


def write_csv(path, image) -> None:
    """Full-precision CSV; values round-trip bit-exactly."""
    if isinstance(image, MonoImage):
        np.savetxt(path, image.pixels.T, delimiter=",", fmt="%.17g")
    else:
        blocks = np.concatenate([c.pixels.T for c in image.channels])
        np.savetxt(path, blocks, delimiter=",", fmt="%.17g", header="channels=3")


def read_image(path):
    """Load a PNG, PGM/PPM or CSV file as a :class:`MonoImage` or :class:`RgbImage`.

    8-bit files become screen-images with ``v = byte / 255``; CSV files
    become data-images.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return read_csv(path)
    if suffix in (".pgm", ".ppm", ".pnm"):
        samples, maxval = read_pnm(path)
        if maxval != 255:
            raise DomainError(f"{path}: only 8-bit files (maxval 255) are supported")
        return _to_image(from_bytes(samples), screen=True)
    with Image.open(path) as im:
        array = np.asarray(im.convert("L" if im.mode in ("1", "L", "LA") else "RGB"))
    return _to_image(from_bytes(array), screen=True)


def write_image(path, image) -> None:
    """Write ``image`` according to the file suffix.

    PNG and PGM/PPM require a screen-image; CSV accepts either kind.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".csv":
        write_csv(path, image)
        return
    if not image.screen:
        raise DomainError("only screen-images can be written as 8-bit pictures; normalize or clip first")
    samples = to_bytes(_file_array(image))
    if suffix in (".pgm", ".ppm", ".pnm"):
        write_pnm(path, samples)
    elif suffix == ".png":
        Image.fromarray(samples).save(path)
    else:
        raise DomainError(f"unsupported output format {suffix!r}")
