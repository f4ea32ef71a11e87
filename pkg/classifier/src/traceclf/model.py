"""Seven-level convolutional network with a scalar bot-score output.

The classic small-image stack: two conv+pool pairs feeding three fully
connected layers (C1, S2, C3, S4, C5, F6, output). Input is 1x32x32; the
final layer emits one logit, sigmoid(logit) is the bot score.
"""

import torch
from torch import nn


class TraceNet(nn.Module):
    def __init__(self):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(1, 6, kernel_size=5),   # C1: 6 x 28 x 28
            nn.ReLU(),
            nn.MaxPool2d(2),                  # S2: 6 x 14 x 14
            nn.Conv2d(6, 16, kernel_size=5),  # C3: 16 x 10 x 10
            nn.ReLU(),
            nn.MaxPool2d(2),                  # S4: 16 x 5 x 5
        )
        self.classifier = nn.Sequential(
            nn.Flatten(),
            nn.Linear(16 * 5 * 5, 120),       # C5
            nn.ReLU(),
            nn.Linear(120, 84),               # F6
            nn.ReLU(),
            nn.Linear(84, 1),                 # output logit
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.classifier(self.features(x)).squeeze(-1)
