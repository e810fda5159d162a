"""Grayscale image container, PGM/PNG I/O, intensity-scale conversion, overlays.

Pixels are kept as float64 throughout the pipeline; quantization to 8-bit
integers happens only when a file is written.  Arrays are indexed
``[row, col]`` (i.e. ``[y, x]``); corner coordinates are ``(x, y)`` pairs
with ``x`` the column index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BYTE_SCALE = "byte"  # intensities in [0, 255]
UNIT_SCALE = "unit"  # intensities in [0, 1]

# ITU-R BT.601 luminance weights for RGB input
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


class FormatError(ValueError):
    """Raised when an image file is structurally invalid or unsupported."""


@dataclass
class Image:
    """A rectangular grayscale raster.

    Attributes
    ----------
    pixels : np.ndarray
        2-D float64 array, shape (height, width), row-major.
    range_tag : str
        Either ``BYTE_SCALE`` ([0, 255]) or ``UNIT_SCALE`` ([0, 1]).
        Intermediate math may leave the nominal range; clamping is applied
        only by explicit operations (noise injection, denoising, saving).
    """

    pixels: np.ndarray
    range_tag: str = BYTE_SCALE

    def __post_init__(self):
        self.pixels = np.ascontiguousarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2:
            raise ValueError(f"pixels must be 2-D, got shape {self.pixels.shape}")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if self.range_tag not in (BYTE_SCALE, UNIT_SCALE):
            raise ValueError(f"unknown range_tag {self.range_tag!r}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def copy(self) -> "Image":
        return Image(self.pixels.copy(), self.range_tag)

    def quantize(self) -> "Image":
        """Round to the 8-bit grid (what :func:`save_image` will write)."""
        if self.range_tag != BYTE_SCALE:
            raise ValueError("quantize expects a byte-scale image")
        return Image(np.clip(np.rint(self.pixels), 0.0, 255.0), BYTE_SCALE)


@dataclass
class CornerSet:
    """Detected corner coordinates, ``(x, y)`` with x = column, y = row."""

    points: list[tuple[int, int]] = field(default_factory=list)
    source: str = ""

    def __len__(self) -> int:
        return len(self.points)

    def to_csv(self) -> str:
        """Header-less ``x,y`` lines, one per corner."""
        return "".join(f"{x},{y}\n" for x, y in self.points)


def to_unit_scale(img: Image) -> Image:
    """Map [0, 255] intensities to [0, 1] by dividing by 255."""
    if img.range_tag != BYTE_SCALE:
        raise ValueError("to_unit_scale expects a byte-scale image")
    return Image(img.pixels / 255.0, UNIT_SCALE)


def from_unit_scale(img: Image) -> Image:
    """Map [0, 1] intensities back to [0, 255], clamping to the byte range."""
    if img.range_tag != UNIT_SCALE:
        raise ValueError("from_unit_scale expects a unit-scale image")
    return Image(np.clip(img.pixels * 255.0, 0.0, 255.0), BYTE_SCALE)


def _read_pgm(data: bytes, path: str) -> Image:
    # Binary PGM: "P5" <ws> width <ws> height <ws> maxval <single ws> raster.
    # '#' starts a comment running to end of line anywhere in the header.
    pos = 0

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            c = data[pos : pos + 1]
            if c == b"#":
                nl = data.find(b"\n", pos)
                if nl < 0:
                    raise FormatError(f"{path}: unterminated comment in PGM header")
                pos = nl + 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PGM header")
        return data[start:pos]

    if next_token() != b"P5":
        raise FormatError(f"{path}: not a binary (P5) PGM file")
    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError as exc:
        raise FormatError(f"{path}: malformed PGM header") from exc
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise FormatError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos : pos + width * height]
    if len(raster) < width * height:
        raise FormatError(f"{path}: PGM raster truncated")
    pixels = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    return Image(pixels.reshape(height, width), BYTE_SCALE)


def _read_png(path: str) -> Image:
    from PIL import Image as PILImage
    from PIL import UnidentifiedImageError

    try:
        with PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGB")
                mode = "RGB"
            if mode == "L":
                pixels = np.asarray(im, dtype=np.float64)
            elif mode == "RGB":
                rgb = np.asarray(im, dtype=np.float64)
                pixels = np.rint(rgb @ _LUMA_WEIGHTS)
            else:
                raise FormatError(f"{path}: unsupported PNG mode {mode!r} "
                                  "(expected 8-bit grayscale or RGB)")
    except UnidentifiedImageError as exc:
        raise FormatError(f"{path}: unreadable PNG") from exc
    return Image(pixels, BYTE_SCALE)


def load_image(path: str) -> Image:
    """Load a binary PGM (P5, 8-bit) or 8-bit grayscale/RGB PNG.

    RGB is reduced to luminance with BT.601 weights
    (0.299 R + 0.587 G + 0.114 B) and rounded to the nearest integer.
    """
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"P5":
        with open(path, "rb") as fh:
            return _read_pgm(fh.read(), path)
    if magic == b"\x89P":
        return _read_png(path)
    raise FormatError(f"{path}: unrecognized image format (want P5 PGM or PNG)")


def save_image(img: Image, path: str) -> None:
    """Write a byte-scale image as PGM or PNG (chosen by file extension).

    Pixels are rounded to integers and clipped to [0, 255] at this point;
    ``load_image(save_image(img))`` recovers ``img.quantize()`` exactly.
    """
    if img.range_tag != BYTE_SCALE:
        raise ValueError("save_image expects a byte-scale image "
                         "(convert with from_unit_scale first)")
    raster = np.clip(np.rint(img.pixels), 0, 255).astype(np.uint8)
    if path.lower().endswith((".pgm", ".pnm")):
        header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(raster.tobytes())
    elif path.lower().endswith(".png"):
        from PIL import Image as PILImage

        PILImage.fromarray(raster, mode="L").save(path, format="PNG")
    else:
        raise ValueError(f"{path}: unsupported output extension (want .pgm or .png)")


def overlay_corners(img: Image, corners: CornerSet) -> Image:
    """Stamp a 3x3 max-intensity marker at each corner, cropped at borders."""
    out = img.copy()
    peak = 255.0 if img.range_tag == BYTE_SCALE else 1.0
    h, w = out.pixels.shape
    for x, y in corners.points:
        if not (0 <= x < w and 0 <= y < h):
            raise ValueError(f"corner ({x}, {y}) outside {w}x{h} image")
        y0, y1 = max(0, y - 1), min(h, y + 2)
        x0, x1 = max(0, x - 1), min(w, x + 2)
        out.pixels[y0:y1, x0:x1] = peak
    return out
