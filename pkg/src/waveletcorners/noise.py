"""Seeded injection of gaussian, salt & pepper, and speckle noise.

All noise parameters follow the unit-intensity convention: images must be
unit-scale ([0, 1]) and outputs are clamped back to [0, 1].  Default
parameters are gaussian mean 0 / variance 0.01, salt & pepper density 0.05,
speckle variance 0.04.

Speckle is multiplicative, ``out = in + n * in``, with ``n`` zero-mean
uniform noise scaled to the requested variance (support
``[-sqrt(3 v), +sqrt(3 v)]``).  The salt/pepper split inside the corrupted
set is 50/50.  Streams come from :mod:`waveletcorners.rng`, so identical
(image, parameters, seed) gives identical output on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .image import UNIT_SCALE, Image

GAUSSIAN = "gaussian"
SALT_PEPPER = "salt_pepper"
SPECKLE = "speckle"

DEFAULT_GAUSSIAN_MEAN = 0.0
DEFAULT_GAUSSIAN_VAR = 0.01
DEFAULT_SP_DENSITY = 0.05
DEFAULT_SPECKLE_VAR = 0.04


@dataclass
class NoiseSpec:
    """One noise configuration: kind, parameters, and RNG seed."""

    kind: str
    mean: float = 0.0
    variance: float = 0.0
    density: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (GAUSSIAN, SALT_PEPPER, SPECKLE):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.variance < 0:
            raise ValueError("variance must be >= 0")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")

    def describe(self) -> str:
        """Canonical CLI-string form of this spec (seed excluded)."""
        if self.kind == GAUSSIAN:
            return f"gaussian:mean={_fmt(self.mean)},var={_fmt(self.variance)}"
        if self.kind == SALT_PEPPER:
            return f"saltpepper:density={_fmt(self.density)}"
        return f"speckle:var={_fmt(self.variance)}"


def _fmt(v: float) -> str:
    return f"{v:g}"


def parse_noise_spec(text: str, seed: int = 0) -> NoiseSpec:
    """Parse a CLI noise string such as ``gaussian:mean=0,var=0.01``.

    Recognized kinds: ``gaussian`` (mean, var), ``saltpepper`` (density),
    ``speckle`` (var).  Omitted parameters take the defaults above.
    """
    kind, _, argtext = text.partition(":")
    kind = kind.strip().lower()
    args = {}
    if argtext:
        for part in argtext.split(","):
            key, eq, val = part.partition("=")
            if not eq:
                raise ValueError(f"bad noise parameter {part!r} in {text!r}")
            try:
                args[key.strip()] = float(val)
            except ValueError as exc:
                raise ValueError(f"bad noise value {val!r} in {text!r}") from exc

    def take(key, default):
        return args.pop(key, default)

    if kind == "gaussian":
        spec = NoiseSpec(GAUSSIAN, mean=take("mean", DEFAULT_GAUSSIAN_MEAN),
                         variance=take("var", DEFAULT_GAUSSIAN_VAR), seed=seed)
    elif kind in ("saltpepper", "salt_pepper", "sp"):
        spec = NoiseSpec(SALT_PEPPER, density=take("density", DEFAULT_SP_DENSITY),
                         seed=seed)
    elif kind == "speckle":
        spec = NoiseSpec(SPECKLE, variance=take("var", DEFAULT_SPECKLE_VAR),
                         seed=seed)
    else:
        raise ValueError(f"unknown noise kind {kind!r}")
    if args:
        raise ValueError(f"unexpected noise parameters {sorted(args)} in {text!r}")
    return spec


def _require_unit(img: Image, op: str) -> None:
    if img.range_tag != UNIT_SCALE:
        raise ValueError(f"{op} expects a unit-scale image")


def add_gaussian(img: Image, mean: float, variance: float, seed: int) -> Image:
    """Additive i.i.d. gaussian noise, clamped to [0, 1]."""
    _require_unit(img, "add_gaussian")
    if variance < 0:
        raise ValueError("variance must be >= 0")
    field = rng.normal_field(img.pixels.shape, mean, np.sqrt(variance), seed)
    return Image(np.clip(img.pixels + field, 0.0, 1.0), UNIT_SCALE)


def add_salt_pepper(img: Image, density: float, seed: int) -> Image:
    """Each pixel independently corrupted to 0 or 1 with probability density."""
    _require_unit(img, "add_salt_pepper")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    n = img.pixels.size
    idx = np.arange(n, dtype=np.uint64)
    corrupt = rng.uniforms(seed, np.uint64(2) * idx) < density
    salt = rng.uniforms(seed, np.uint64(2) * idx + np.uint64(1)) >= 0.5
    out = img.pixels.copy().reshape(-1)
    out[corrupt] = salt[corrupt].astype(np.float64)
    return Image(out.reshape(img.pixels.shape), UNIT_SCALE)


def add_speckle(img: Image, variance: float, seed: int) -> Image:
    """Multiplicative noise out = in + n*in, n uniform zero-mean var v."""
    _require_unit(img, "add_speckle")
    if variance < 0:
        raise ValueError("variance must be >= 0")
    u = rng.uniform_field(img.pixels.shape, seed)
    n = (2.0 * u - 1.0) * np.sqrt(3.0 * variance)
    return Image(np.clip(img.pixels + n * img.pixels, 0.0, 1.0), UNIT_SCALE)


def apply_noise(img: Image, spec: NoiseSpec) -> Image:
    """Dispatch on spec.kind."""
    if spec.kind == GAUSSIAN:
        return add_gaussian(img, spec.mean, spec.variance, spec.seed)
    if spec.kind == SALT_PEPPER:
        return add_salt_pepper(img, spec.density, spec.seed)
    return add_speckle(img, spec.variance, spec.seed)
