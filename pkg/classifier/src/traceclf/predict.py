"""Write predictions.csv (session_id,label,score) for a manifest."""

from pathlib import Path

import torch

from .data import TraceImageDataset
from .train import load_model

THRESHOLD = 0.5


def predict(model_path, manifest_path, out_path) -> Path:
    """Score every manifest row; label is "bot" iff score >= 0.5."""
    model = load_model(model_path)
    dataset = TraceImageDataset(manifest_path, require_labels=False)

    out_path = Path(out_path)
    with torch.no_grad():
        scores = (
            torch.sigmoid(model(dataset.images)).tolist() if len(dataset) else []
        )
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("session_id,label,score\n")
        for sid, score in zip(dataset.session_ids, scores):
            label = "bot" if score >= THRESHOLD else "human"
            fh.write(f"{sid},{label},{score:.6f}\n")
    return out_path
