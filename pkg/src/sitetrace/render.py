"""Rasterize session subgraphs into deterministic grayscale trace images.

Spot radius grows with access frequency through a sigmoid-shaped curve

    f(x) = c / (1 + e^(b - a*x))

whose three parameters are solved from four constraints: f(1) = r_min,
f(+inf) = r_max (hence c = r_max), and f(x_gate) = r_gate to keep the
slope gentle at small frequencies.

Rasterization is exact: unit coordinates are scaled to a fixed-point pixel
grid and every pixel decision is an integer squared-distance comparison
(pixel centers sampled at (ix + 0.5, iy + 0.5)). No anti-aliasing, no
floating-point pixel tests — identical inputs give byte-identical images
on every platform. Lines are drawn first, spots on top, black on white.

Fixed-point mapping, shared with the oracle tests:

    px(u)  = (p + u * (1 - 2p)) * S          for image size S, padding p
    cx     = floor(px * SCALE + 0.5)         SCALE: largest power of two
                                             with S * SCALE <= 32768
    radius r_px likewise; line half-width = line_width * SCALE // 2
    disc:    (X - cx)^2 + (Y - cy)^2 <= r^2
    segment: distance-to-segment form on the same scaled integers
"""

import math
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .errors import (
    DuplicateSessionError,
    InfeasibleConstraintsError,
    LayoutRequiredError,
    SitetraceError,
)
from .sitemap import Sitemap
from .subgraph import SessionSubgraph

MAX_SCALED_COORD = 32768  # keeps every integer predicate inside int64


@dataclass(frozen=True)
class RadiusParams:
    a: float
    b: float
    c: float
    r_min: float
    r_max: float
    x_gate: float
    r_gate: float


def solve_radius_params(r_min: float, r_max: float, x_gate: float,
                        r_gate: float) -> RadiusParams:
    """Solve (a, b, c) from the four radius constraints.

    c = r_max directly; the two remaining constraints are linear in (a, b)
    after taking logs:

        b - a         = ln(c / r_min  - 1)
        b - a * x_gate = ln(c / r_gate - 1)
    """
    if not (0 < r_min < r_gate < r_max):
        raise InfeasibleConstraintsError(
            f"need 0 < r_min < r_gate < r_max, got {(r_min, r_gate, r_max)}"
        )
    if not x_gate > 1:
        raise InfeasibleConstraintsError(f"need x_gate > 1, got {x_gate}")
    c = r_max
    log_min = math.log(c / r_min - 1.0)
    log_gate = math.log(c / r_gate - 1.0)
    a = (log_min - log_gate) / (x_gate - 1.0)
    b = a + log_min
    return RadiusParams(a=a, b=b, c=c, r_min=r_min, r_max=r_max,
                        x_gate=x_gate, r_gate=r_gate)


def radius(params: RadiusParams, x: float) -> float:
    """Spot radius in pixels for access frequency x >= 1."""
    return params.c / (1.0 + math.exp(params.b - params.a * x))


DEFAULT_RADIUS = solve_radius_params(r_min=4, r_max=80, x_gate=50, r_gate=50)


@dataclass(frozen=True)
class RenderConfig:
    image_size: int = 256
    padding_fraction: float = 0.05
    line_width: int = 2  # 0 disables edge drawing (diagnostic mode)
    radius: RadiusParams = DEFAULT_RADIUS

    def __post_init__(self):
        if self.image_size < 2 * self.radius.r_max:
            raise ValueError("image_size must be at least 2 * r_max")
        if self.image_size > MAX_SCALED_COORD // 2:
            raise ValueError(f"image_size above {MAX_SCALED_COORD // 2} unsupported")
        if not 0.0 <= self.padding_fraction < 0.4:
            raise ValueError("padding_fraction must lie in [0, 0.4)")
        if self.line_width < 0:
            raise ValueError("line_width must be non-negative")

    @property
    def scale(self) -> int:
        """Fixed-point factor: largest power of two with size*scale <= 32768."""
        s = 1
        while self.image_size * (s * 2) <= MAX_SCALED_COORD:
            s *= 2
        return s


@dataclass
class TraceImage:
    pixels: np.ndarray  # (size, size) uint8, 0 black / 255 white
    session_id: str
    label: Optional[str] = None


def _scaled(value: float, scale: int) -> int:
    return int(math.floor(value * scale + 0.5))


def render(sitemap: Sitemap, subgraph: SessionSubgraph,
           config: RenderConfig) -> TraceImage:
    """Draw one subgraph over the sitemap's fixed coordinates."""
    if sitemap.coordinates is None:
        raise LayoutRequiredError("sitemap has no coordinates; run the layout")

    size = config.image_size
    scale = config.scale
    pad = config.padding_fraction
    span = (1.0 - 2.0 * pad) * size

    def to_pixel(node: int) -> tuple[int, int]:
        u, v = sitemap.coordinates[node]
        return (
            _scaled(pad * size + u * span, scale),
            _scaled(pad * size + v * span, scale),
        )

    img = np.full((size, size), 255, dtype=np.uint8)

    if config.line_width > 0:
        half_width = config.line_width * scale // 2
        drawn = set()
        for a, b in subgraph.edges:
            key = (a, b) if a < b else (b, a)
            if key in drawn:
                continue
            drawn.add(key)
            ax, ay = to_pixel(key[0])
            bx, by = to_pixel(key[1])
            _kernels.fill_segment(img, ax, ay, bx, by, half_width, scale)

    for node in sorted(subgraph.frequencies):
        cx, cy = to_pixel(node)
        r = _scaled(radius(config.radius, subgraph.frequencies[node]), scale)
        _kernels.fill_disc(img, cx, cy, r, scale)

    return TraceImage(pixels=img, session_id=subgraph.session_id,
                      label=subgraph.label)


def encode_png(pixels: np.ndarray) -> bytes:
    """Minimal lossless grayscale PNG (8-bit, filter 0 rows).

    Hand-rolled on zlib so the emitted bytes depend on nothing but the
    pixel buffer — the determinism contract covers the files, not just
    the arrays.
    """
    if pixels.dtype != np.uint8 or pixels.ndim != 2:
        raise ValueError("expected a 2-D uint8 array")
    height, width = pixels.shape

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (
            struct.pack(">I", len(payload))
            + tag
            + payload
            + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
        )

    header = struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0)
    raw = b"".join(b"\x00" + pixels[row].tobytes() for row in range(height))
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", header)
        + chunk(b"IDAT", zlib.compress(raw, 9))
        + chunk(b"IEND", b"")
    )


_SAFE_ID = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-"
)


def emit_dataset(images: Iterable[TraceImage], out_dir) -> Path:
    """Write <session_id>.png files plus manifest.csv; returns manifest path.

    Manifest columns: file,session_id,label (label empty when absent),
    rows sorted by session_id. Re-running on identical input produces
    byte-identical files.
    """
    out_dir = Path(out_dir)
    images_dir = out_dir / "images"
    images_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    seen = set()
    for image in images:
        sid = image.session_id
        if sid in seen:
            raise DuplicateSessionError(sid)
        seen.add(sid)
        if not sid or not set(sid) <= _SAFE_ID:
            raise SitetraceError(f"session id {sid!r} is not filesystem-safe")
        filename = f"images/{sid}.png"
        (out_dir / filename).write_bytes(encode_png(image.pixels))
        rows.append((filename, sid, image.label or ""))

    rows.sort(key=lambda row: row[1])
    manifest = out_dir / "manifest.csv"
    with open(manifest, "w", encoding="utf-8", newline="") as fh:
        fh.write("file,session_id,label\n")
        for filename, sid, label in rows:
            fh.write(f"{filename},{sid},{label}\n")
    return manifest
