import struct
import zlib
from pathlib import Path

import numpy as np
import pytest


def write_png(path: Path, pixels: np.ndarray) -> None:
    """Minimal grayscale PNG writer for fixtures (no pipeline dependency)."""
    height, width = pixels.shape

    def chunk(tag, payload):
        return (struct.pack(">I", len(payload)) + tag + payload
                + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF))

    header = struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0)
    raw = b"".join(b"\x00" + pixels[r].tobytes() for r in range(height))
    path.write_bytes(b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", header)
                     + chunk(b"IDAT", zlib.compress(raw, 9))
                     + chunk(b"IEND", b""))


def disc_image(size, cx, cy, r) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size]
    img = np.full((size, size), 255, dtype=np.uint8)
    img[(xx - cx) ** 2 + (yy - cy) ** 2 <= r * r] = 0
    return img


@pytest.fixture
def toy_dataset(tmp_path):
    """Separable two-class set: big centered blob = bot, small corner = human."""
    rng = np.random.default_rng(42)
    images_dir = tmp_path / "images"
    images_dir.mkdir()
    rows = ["file,session_id,label"]
    for i in range(40):
        if i % 2:
            sid = f"bot-{i:03d}"
            img = disc_image(256, 128 + rng.integers(-20, 20),
                             128 + rng.integers(-20, 20), 70 + rng.integers(0, 20))
            label = "bot"
        else:
            sid = f"human-{i:03d}"
            img = disc_image(256, 40 + rng.integers(-10, 10),
                             40 + rng.integers(-10, 10), 6 + rng.integers(0, 4))
            label = "human"
        write_png(images_dir / f"{sid}.png", img)
        rows.append(f"images/{sid}.png,{sid},{label}")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("\n".join(rows) + "\n")
    return manifest
