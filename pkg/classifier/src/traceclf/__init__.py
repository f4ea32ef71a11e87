"""traceclf: small CNN classifying trace images as bot or human."""

from .data import TraceImageDataset, load_image, read_manifest
from .errors import DataError
from .model import TraceNet
from .predict import predict
from .train import TrainConfig, load_model, train

__version__ = "0.1.0"

__all__ = [
    "TraceImageDataset",
    "load_image",
    "read_manifest",
    "DataError",
    "TraceNet",
    "predict",
    "TrainConfig",
    "load_model",
    "train",
    "__version__",
]
