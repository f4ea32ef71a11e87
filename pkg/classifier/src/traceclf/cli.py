"""Standalone command line: train a model, then predict a manifest."""

import argparse
import sys

from .errors import DataError
from .predict import predict
from .train import TrainConfig, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="traceclf",
        description="Train/apply the trace-image bot classifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="fit a model on a labeled manifest")
    t.add_argument("--train-manifest", required=True)
    t.add_argument("--batch-size", type=int, default=64)
    t.add_argument("--epochs", type=int, default=100)
    t.add_argument("--lr", type=float, default=0.01)
    t.add_argument("--momentum", type=float, default=0.5)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out-dir", default="model")

    p = sub.add_parser("predict", help="score a manifest with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default="predictions.csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = TrainConfig(
                train_manifest=args.train_manifest,
                batch_size=args.batch_size,
                epochs=args.epochs,
                learning_rate=args.lr,
                momentum=args.momentum,
                seed=args.seed,
                out_dir=args.out_dir,
            )
            model_path = train(config)
            print(f"model -> {model_path}")
        else:
            out = predict(args.model, args.manifest, args.out)
            print(f"predictions -> {out}")
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
