"""Orthonormal 2-D Haar transform and multi-level pyramid decomposition.

One 1-D step maps a sample pair (a, b) to approximation (a+b)/sqrt(2) and
detail (a-b)/sqrt(2); the 2-D transform applies it along rows (x) first,
then columns (y).  Band naming and axis mapping:

* LL: row low-pass,  column low-pass   (approximation)
* LH: row low-pass,  column high-pass  (vertical detail, variation along y)
* HL: row high-pass, column low-pass   (horizontal detail, variation along x)
* HH: row high-pass, column high-pass  (diagonal detail)

The diagonal band of the first level (HH_1) is the one the noise estimator
reads, so this mapping must not be reshuffled.

Odd-sized inputs are padded to even size by edge replication before each
level; reconstruction crops back, so round trips are exact for any shape.
The orthonormal scaling preserves energy (Parseval) on even-sized inputs
and keeps the noise standard deviation unchanged across bands, which the
adaptive threshold relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SQRT2 = np.sqrt(2.0)


@dataclass
class SubbandSet:
    """The four half-size coefficient matrices of one decomposition level."""

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def __post_init__(self):
        shapes = {self.ll.shape, self.lh.shape, self.hl.shape, self.hh.shape}
        if len(shapes) != 1:
            raise ValueError(f"subband shapes differ: {sorted(shapes)}")


@dataclass
class Pyramid:
    """N-level decomposition: coarsest LL plus per-level detail triples.

    ``details[k]`` holds (lh, hl, hh) for level k+1, shallow to deep, so the
    band count is 3N + 1.  ``original_size`` records the pre-padding input
    shape; the size of every intermediate level follows from it by repeated
    ceil-halving.
    """

    levels: int
    ll_top: np.ndarray
    details: list[tuple[np.ndarray, np.ndarray, np.ndarray]]
    original_size: tuple[int, int]

    def level_sizes(self) -> list[tuple[int, int]]:
        """Input shape of each level: index 0 is the original image."""
        sizes = [self.original_size]
        for _ in range(self.levels):
            h, w = sizes[-1]
            sizes.append(((h + 1) // 2, (w + 1) // 2))
        return sizes

    def iter_detail_bands(self):
        """Yield (level, name, matrix) in the canonical order: L1 LH, HL, HH, L2 ..."""
        for k, (lh, hl, hh) in enumerate(self.details, start=1):
            yield k, "LH", lh
            yield k, "HL", hl
            yield k, "HH", hh


def _pad_even(mat: np.ndarray) -> np.ndarray:
    h, w = mat.shape
    if h % 2 == 0 and w % 2 == 0:
        return mat
    return np.pad(mat, ((0, h % 2), (0, w % 2)), mode="edge")


def dwt2_haar(mat: np.ndarray) -> SubbandSet:
    """One level of the separable orthonormal Haar transform."""
    mat = np.asarray(mat, dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError("dwt2_haar expects a 2-D matrix")
    if mat.shape[0] < 2 or mat.shape[1] < 2:
        raise ValueError(f"matrix too small for Haar step: {mat.shape}")
    m = _pad_even(mat)
    lo = (m[:, 0::2] + m[:, 1::2]) / _SQRT2
    hi = (m[:, 0::2] - m[:, 1::2]) / _SQRT2
    ll = (lo[0::2, :] + lo[1::2, :]) / _SQRT2
    lh = (lo[0::2, :] - lo[1::2, :]) / _SQRT2
    hl = (hi[0::2, :] + hi[1::2, :]) / _SQRT2
    hh = (hi[0::2, :] - hi[1::2, :]) / _SQRT2
    return SubbandSet(ll=ll, lh=lh, hl=hl, hh=hh)


def idwt2_haar(bands: SubbandSet, target_size: tuple[int, int]) -> np.ndarray:
    """Invert one Haar level and crop to ``target_size``."""
    bh, bw = bands.ll.shape
    th, tw = target_size
    if not (bh * 2 - 1 <= th <= bh * 2 and bw * 2 - 1 <= tw <= bw * 2):
        raise ValueError(f"target size {target_size} inconsistent with "
                         f"band size {bands.ll.shape}")
    lo = np.empty((bh * 2, bw), dtype=np.float64)
    hi = np.empty((bh * 2, bw), dtype=np.float64)
    lo[0::2, :] = (bands.ll + bands.lh) / _SQRT2
    lo[1::2, :] = (bands.ll - bands.lh) / _SQRT2
    hi[0::2, :] = (bands.hl + bands.hh) / _SQRT2
    hi[1::2, :] = (bands.hl - bands.hh) / _SQRT2
    out = np.empty((bh * 2, bw * 2), dtype=np.float64)
    out[:, 0::2] = (lo + hi) / _SQRT2
    out[:, 1::2] = (lo - hi) / _SQRT2
    return out[:th, :tw]


def decompose(mat: np.ndarray, levels: int) -> Pyramid:
    """Recursive N-level decomposition of the approximation band."""
    mat = np.asarray(mat, dtype=np.float64)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    h, w = mat.shape
    details = []
    ll = mat
    for _ in range(levels):
        if ll.shape[0] < 2 or ll.shape[1] < 2:
            raise ValueError(f"image {h}x{w} too small for {levels} levels")
        bands = dwt2_haar(ll)
        details.append((bands.lh, bands.hl, bands.hh))
        ll = bands.ll
    return Pyramid(levels=levels, ll_top=ll, details=details,
                   original_size=(h, w))


def reconstruct(pyr: Pyramid) -> np.ndarray:
    """Invert a pyramid level by level, deepest first; exact to rounding."""
    sizes = pyr.level_sizes()
    ll = pyr.ll_top
    for k in range(pyr.levels, 0, -1):
        lh, hl, hh = pyr.details[k - 1]
        expected = sizes[k]
        for band in (lh, hl, hh):
            if band.shape != expected:
                raise ValueError(f"level {k} band shape {band.shape} != "
                                 f"expected {expected}")
        if ll.shape != expected:
            raise ValueError(f"level {k} LL shape {ll.shape} != {expected}")
        ll = idwt2_haar(SubbandSet(ll=ll, lh=lh, hl=hl, hh=hh), sizes[k - 1])
    return ll
