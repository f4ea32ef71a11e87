"""Precision/recall/accuracy plus traffic-share metrics.

"bot" is the positive class. Two share metrics accompany the confusion
counts: bos (bot share of sessions) and bor (bot share of requests); when
bot sessions run longer than human ones on average, bor exceeds bos.
Zero-denominator metrics are reported as None (undefined), never as 0.0.
"""

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import CoverageError, UndefinedMetricsError
from .ingest import Session


@dataclass(frozen=True)
class EvalReport:
    precision: Optional[float]
    recall: Optional[float]
    accuracy: Optional[float]
    bor: Optional[float]
    bos: Optional[float]
    counts: tuple[int, int, int, int]  # (tp, fp, tn, fn)

    def to_dict(self) -> dict:
        tp, fp, tn, fn = self.counts
        return {
            "precision": self.precision,
            "recall": self.recall,
            "accuracy": self.accuracy,
            "bor": self.bor,
            "bos": self.bos,
            "counts": {"tp": tp, "fp": fp, "tn": tn, "fn": fn},
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    def summary(self) -> str:
        def fmt(v):
            return "n/a" if v is None else f"{v:.4f}"

        tp, fp, tn, fn = self.counts
        return (
            f"tp={tp} fp={fp} tn={tn} fn={fn} | "
            f"precision={fmt(self.precision)} recall={fmt(self.recall)} "
            f"accuracy={fmt(self.accuracy)} bor={fmt(self.bor)} bos={fmt(self.bos)}"
        )


def bot_shares(sessions: Iterable[Session]) -> tuple[float, float]:
    """(bor, bos): bot share of total requests and of total sessions."""
    total_sessions = 0
    bot_sessions = 0
    total_requests = 0
    bot_requests = 0
    for session in sessions:
        if session.label is None:
            raise UndefinedMetricsError(
                f"session {session.session_id!r} is unlabeled"
            )
        total_sessions += 1
        total_requests += len(session.requests)
        if session.label == "bot":
            bot_sessions += 1
            bot_requests += len(session.requests)
    if total_sessions == 0 or total_requests == 0:
        raise UndefinedMetricsError("no sessions (or no requests) to measure")
    return bot_requests / total_requests, bot_sessions / total_sessions


def evaluate(truth: Mapping[str, str], predictions: Mapping[str, str],
             shares: Optional[tuple[float, float]] = None) -> EvalReport:
    """Confusion counts and derived metrics over per-session labels.

    Predictions must cover exactly the truth ids. bor/bos cannot be
    derived from label maps alone (bor needs request counts), so callers
    pass them via `shares` when available; bos falls back to the truth
    label mix.
    """
    missing = sorted(set(truth) - set(predictions))
    extra = sorted(set(predictions) - set(truth))
    if missing or extra:
        raise CoverageError(missing=missing, extra=extra)

    tp = fp = tn = fn = 0
    for sid, actual in truth.items():
        predicted = predictions[sid]
        if actual == "bot":
            if predicted == "bot":
                tp += 1
            else:
                fn += 1
        else:
            if predicted == "bot":
                fp += 1
            else:
                tn += 1

    total = tp + fp + tn + fn
    precision = tp / (tp + fp) if tp + fp > 0 else None
    recall = tp / (tp + fn) if tp + fn > 0 else None
    accuracy = (tp + tn) / total if total > 0 else None
    if shares is not None:
        bor, bos = shares
    else:
        bor = None
        bos = (tp + fn) / total if total > 0 else None
    return EvalReport(precision=precision, recall=recall, accuracy=accuracy,
                      bor=bor, bos=bos, counts=(tp, fp, tn, fn))
