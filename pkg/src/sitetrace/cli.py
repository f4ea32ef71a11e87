"""Command-line pipeline: sitemap build, layout, render, synth, evaluate.

Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error. Flags win
over the optional --config file (INI-style key=value sections named after
the subcommands), which wins over built-in defaults. All randomness flows
from --seed.
"""

import configparser
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import ingest, metrics, subgraph
from . import layout as layout_mod
from . import sitemap as sitemap_mod
from . import synth as synth_mod
from .errors import SitetraceError
from .render import RenderConfig, emit_dataset, render as render_image


def _read_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_string(fh.read())
    except configparser.Error as exc:
        raise click.UsageError(f"bad config file {path}: {exc}")
    return {
        section: dict(parser.items(section)) for section in parser.sections()
    }


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="INI-style defaults, sections per subcommand.")
@click.pass_context
def cli(ctx, config_path):
    """Session trace-image pipeline over a sitemap graph."""
    if config_path:
        ctx.default_map = _read_config(config_path)


@cli.group()
def sitemap():
    """Build or inspect sitemaps."""


@sitemap.command("build")
@click.option("--mode", type=click.Choice(["sniff", "file", "crawl"]),
              required=True)
@click.option("--logs", type=click.Path(exists=True),
              help="Access log (sniff mode).")
@click.option("--format", "log_format", type=click.Choice(["jsonl", "csv"]),
              default="jsonl", show_default=True)
@click.option("--in", "in_path", type=click.Path(exists=True),
              help="Sitemap JSON to normalize (file mode).")
@click.option("--start", help="Start URL (crawl mode).")
@click.option("--max-patterns", type=int, default=500, show_default=True)
@click.option("--timeout", type=float, default=10.0, show_default=True)
@click.option("--user-agent", default="sitetrace-crawler/0.1", show_default=True)
@click.option("--out", type=click.Path(), required=True)
def sitemap_build(mode, logs, log_format, in_path, start, max_patterns,
                  timeout, user_agent, out):
    """Write a sitemap JSON file (without coordinates)."""
    if mode == "sniff":
        if not logs:
            raise click.UsageError("--mode sniff needs --logs")
        parsed = ingest.parse_log_file(logs, format=log_format)
        sessions = ingest.sessionize(parsed.requests)
        sm = sitemap_mod.build_from_sessions(sessions)
    elif mode == "file":
        if not in_path:
            raise click.UsageError("--mode file needs --in")
        sm = sitemap_mod.load_from_file(in_path)
    else:
        if not start:
            raise click.UsageError("--mode crawl needs --start")
        fetcher = sitemap_mod.http_fetcher(timeout=timeout, user_agent=user_agent)
        sm = sitemap_mod.crawl(fetcher, start, max_patterns)
    sm.coordinates = None
    sm.save(out)
    click.echo(f"sitemap: {len(sm.nodes)} nodes, {len(sm.edges)} edges -> {out}")


@cli.command()
@click.option("--sitemap", "sitemap_path", type=click.Path(exists=True),
              required=True)
@click.option("--out", type=click.Path(), default=None,
              help="Output file (default: overwrite input).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--attraction", type=float, default=0.08, show_default=True)
@click.option("--rest-length", type=float, default=0.1, show_default=True)
@click.option("--repulsion", type=float, default=0.0005, show_default=True)
@click.option("--damping", type=float, default=0.6, show_default=True)
@click.option("--max-iterations", type=int, default=1000, show_default=True)
@click.option("--epsilon", type=float, default=1e-4, show_default=True)
def layout(sitemap_path, out, seed, attraction, rest_length, repulsion,
           damping, max_iterations, epsilon):
    """Compute per-node coordinates and write them into the sitemap file."""
    sm = sitemap_mod.load_from_file(sitemap_path)
    config = layout_mod.LayoutConfig(
        attraction_stiffness=attraction, rest_length=rest_length,
        repulsion_strength=repulsion, damping=damping,
        max_iterations=max_iterations, convergence_epsilon=epsilon, seed=seed,
    )
    laid = layout_mod.run_layout(sm, config)
    laid.save(out or sitemap_path)
    click.echo(f"layout: {len(laid.nodes)} nodes -> {out or sitemap_path}")


def _render_worker(args):
    sm, config, sg = args
    return render_image(sm, sg, config)


@cli.command("render")
@click.option("--sitemap", "sitemap_path", type=click.Path(exists=True),
              required=True)
@click.option("--logs", type=click.Path(exists=True), required=True)
@click.option("--format", "log_format", type=click.Choice(["jsonl", "csv"]),
              default="jsonl", show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--min-spots", type=int, default=3, show_default=True,
              help="Keep sessions with MORE than this many distinct spots.")
@click.option("--image-size", type=int, default=256, show_default=True)
@click.option("--padding", type=float, default=0.05, show_default=True)
@click.option("--line-width", type=int, default=2, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
def render(sitemap_path, logs, log_format, out, min_spots, image_size,
           padding, line_width, jobs):
    """Sessionize, map, filter, rasterize and emit the image dataset."""
    sm = sitemap_mod.load_from_file(sitemap_path)
    parsed = ingest.parse_log_file(logs, format=log_format)
    sessions = ingest.sessionize(parsed.requests)
    config = RenderConfig(
        image_size=image_size, padding_fraction=padding, line_width=line_width
    )
    subgraphs = [subgraph.map_session(sm, s) for s in sessions]
    kept = subgraph.filter_min_spots(subgraphs, min_spots_exclusive=min_spots)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            images = list(pool.map(
                _render_worker, [(sm, config, sg) for sg in kept],
                chunksize=max(1, len(kept) // (jobs * 4) or 1),
            ))
    else:
        images = [render_image(sm, sg, config) for sg in kept]
    manifest = emit_dataset(images, out)

    stats = f"sessions: {len(sessions)} in, {len(kept)} kept"
    if sessions and all(s.label is not None for s in sessions):
        bor, bos = metrics.bot_shares(sessions)
        stats += f"; BoR={bor:.4f} BoS={bos:.4f}"
    click.echo(stats)
    click.echo(f"dataset -> {manifest}")


@cli.command()
@click.option("--sitemap", "sitemap_path", type=click.Path(exists=True),
              required=True)
@click.option("--profiles", type=click.Path(exists=True), required=True,
              help="INI file: one section per profile (kind, count, ...).")
@click.option("--out", type=click.Path(), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
def synth(sitemap_path, profiles, out, seed):
    """Generate labeled synthetic traffic as a jsonl log."""
    sm = sitemap_mod.load_from_file(sitemap_path)
    profile_list = _load_profiles(profiles, seed)
    sessions = synth_mod.generate(sm, profile_list)
    with open(out, "w", encoding="utf-8") as fh:
        n = ingest.write_jsonl(ingest.flatten(sessions), fh)
    click.echo(f"synth: {len(sessions)} sessions, {n} requests -> {out}")


def _load_profiles(path: str, seed: int) -> list:
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_string(fh.read())
    out = []
    for section in parser.sections():
        get = parser[section].get
        kind = get("kind")
        if kind is None:
            raise click.UsageError(f"profile [{section}] is missing 'kind'")
        profile = synth_mod.TrafficProfile(
            kind=kind,
            session_length_range=(
                int(get("length_min", 10)), int(get("length_max", 30))
            ),
            seed=seed + int(get("seed_offset", 0)),
            rate=float(get("rate", 1.0)),
            target_pattern=get("target") or None,
            repeat_fraction=float(get("repeat_fraction", 0.8)),
            edge_follow_probability=float(get("edge_follow_probability", 0.9)),
            invalid_fraction=float(get("invalid_fraction", 0.5)),
        )
        out.append((profile, int(get("count", 1))))
    return out


@cli.command()
@click.option("--truth", type=click.Path(exists=True), required=True,
              help="manifest.csv with ground-truth labels.")
@click.option("--pred", type=click.Path(exists=True), required=True,
              help="predictions.csv (session_id,label,score).")
@click.option("--logs", type=click.Path(exists=True), default=None,
              help="Optional source log for request-weighted shares.")
@click.option("--out", type=click.Path(), default="report.json",
              show_default=True)
def evaluate(truth, pred, logs, out):
    """Score predictions against a labeled manifest; write report.json."""
    truth_map = {}
    with open(truth, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            if not row.get("label"):
                raise SitetraceError(
                    f"truth manifest row {row.get('session_id')!r} is unlabeled"
                )
            truth_map[row["session_id"]] = row["label"]
    pred_map = {}
    with open(pred, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            pred_map[row["session_id"]] = row["label"]

    shares = None
    if logs:
        parsed = ingest.parse_log_file(logs)
        sessions = ingest.sessionize(parsed.requests)
        shares = metrics.bot_shares(
            [s for s in sessions if s.session_id in truth_map]
        )
    report = metrics.evaluate(truth_map, pred_map, shares=shares)
    report.save(out)
    click.echo(report.summary())
    click.echo(f"report -> {out}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except (SitetraceError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
