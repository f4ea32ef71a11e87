"""Load trace-image datasets from manifest.csv + PNG files.

The manifest (columns file,session_id,label) is the only contract with
the image pipeline. Images arrive as square grayscale rasters (typically
256x256) and are downscaled to 32x32 by area averaging at load time —
the network keeps its canonical small input.
"""

import csv
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .errors import DataError

NET_INPUT = 32


def read_manifest(path) -> list[dict]:
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        if not row.get("file") or not row.get("session_id"):
            raise DataError(f"manifest row missing file/session_id: {row}")
    return rows


def load_image(path) -> np.ndarray:
    """PNG -> float32 array in [0, 1], area-averaged down to 32x32."""
    try:
        with Image.open(path) as img:
            arr = np.asarray(img.convert("L"), dtype=np.float32)
    except FileNotFoundError:
        raise DataError(f"image file missing: {path}")
    h, w = arr.shape
    if h != w:
        raise DataError(f"image {path} is not square ({w}x{h})")
    if h % NET_INPUT != 0:
        raise DataError(
            f"image {path} size {h} is not a multiple of {NET_INPUT}"
        )
    factor = h // NET_INPUT
    arr = arr.reshape(NET_INPUT, factor, NET_INPUT, factor).mean(axis=(1, 3))
    return arr / 255.0


class TraceImageDataset:
    """In-memory dataset: (image tensor, label tensor, session_id)."""

    def __init__(self, manifest_path, require_labels: bool):
        manifest_path = Path(manifest_path)
        base = manifest_path.parent
        rows = read_manifest(manifest_path)
        images = []
        labels = []
        self.session_ids = []
        for row in rows:
            label_text = (row.get("label") or "").strip()
            if require_labels and label_text not in ("bot", "human"):
                raise DataError(
                    f"session {row['session_id']!r} has no usable label "
                    f"({label_text!r})"
                )
            images.append(load_image(base / row["file"]))
            labels.append(1.0 if label_text == "bot" else 0.0)
            self.session_ids.append(row["session_id"])
        if images:
            stacked = np.stack(images)[:, None, :, :]  # N x 1 x 32 x 32
        else:
            stacked = np.zeros((0, 1, NET_INPUT, NET_INPUT), dtype=np.float32)
        self.images = torch.from_numpy(stacked.astype(np.float32))
        self.labels = torch.tensor(labels, dtype=torch.float32)

    def __len__(self):
        return len(self.session_ids)
