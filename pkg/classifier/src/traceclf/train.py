"""Training loop: SGD with momentum on binary cross-entropy.

Hyperparameter defaults are fixed (batch 64, 100 epochs, lr 0.01,
momentum 0.5); the loss log lands next to the model artifact as a
two-column csv (epoch,loss).
"""

import warnings
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch import nn

from .data import TraceImageDataset
from .model import TraceNet


@dataclass(frozen=True)
class TrainConfig:
    train_manifest: str
    batch_size: int = 64
    epochs: int = 100
    learning_rate: float = 0.01
    momentum: float = 0.5
    seed: int = 0
    out_dir: str = "model"

    def __post_init__(self):
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must lie in [0, 1)")


def train(config: TrainConfig) -> Path:
    """Fit the network; returns the model artifact path.

    Writes <out_dir>/model.pt and <out_dir>/loss_log.csv. Deterministic
    for a fixed seed on one machine.
    """
    torch.manual_seed(config.seed)
    dataset = TraceImageDataset(config.train_manifest, require_labels=True)
    if len(dataset) == 0:
        raise ValueError("training manifest is empty")

    model = TraceNet()
    optimizer = torch.optim.SGD(model.parameters(), lr=config.learning_rate,
                                momentum=config.momentum)
    loss_fn = nn.BCEWithLogitsLoss()
    generator = torch.Generator().manual_seed(config.seed)

    n = len(dataset)
    epoch_losses = []
    for epoch in range(config.epochs):
        order = torch.randperm(n, generator=generator)
        total = 0.0
        batches = 0
        model.train()
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            logits = model(dataset.images[idx])
            loss = loss_fn(logits, dataset.labels[idx])
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss.detach())
            batches += 1
        epoch_losses.append(total / batches)

    if len(epoch_losses) >= 5 and epoch_losses[4] >= epoch_losses[0]:
        warnings.warn(
            "training loss did not decrease over the first 5 epochs",
            RuntimeWarning,
        )

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_path = out_dir / "model.pt"
    torch.save(
        {"state_dict": model.state_dict(), "config": asdict(config)},
        model_path,
    )
    with open(out_dir / "loss_log.csv", "w", encoding="utf-8") as fh:
        fh.write("epoch,loss\n")
        for epoch, loss in enumerate(epoch_losses, start=1):
            fh.write(f"{epoch},{loss:.6f}\n")
    return model_path


def load_model(path) -> TraceNet:
    payload = torch.load(path, map_location="cpu", weights_only=True)
    model = TraceNet()
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model
