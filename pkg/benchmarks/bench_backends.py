#!/usr/bin/env python3
"""Compare the compiled kernel against the numpy fallback.

Measures the two hot paths — trace-image rasterization and the layout
force step — and prints sessions/s and steps/s for each backend. Run from
the repo root:

    python3 benchmarks/bench_backends.py [--sessions 200] [--nodes 600]
"""

import argparse
import random
import time

import numpy as np

from sitetrace._kernels import _fallback
from sitetrace.layout import LayoutConfig, undirected_csr
from sitetrace.render import RenderConfig, render
from sitetrace.sitemap import Sitemap
from sitetrace.subgraph import map_session
from sitetrace.synth import TrafficProfile, generate

try:
    from sitetrace._kernels import _native
except ImportError:
    _native = None


def build_fixture(n_nodes, n_sessions):
    rng = random.Random(99)
    nodes = [f"/p{i}" for i in range(n_nodes)] + ["INVALID"]
    coords = [(rng.random(), rng.random()) for _ in range(n_nodes)]
    coords.append((0.5, 0.5))
    edges = {(i, (i * 7 + 3) % n_nodes) for i in range(n_nodes)
             if i != (i * 7 + 3) % n_nodes}
    sm = Sitemap(nodes=nodes, edges=edges, invalid_node_id=n_nodes,
                 coordinates=coords)
    profile = TrafficProfile(kind="human_walk", session_length_range=(50, 50),
                             seed=1, edge_follow_probability=0.7)
    sessions = generate(sm, [(profile, n_sessions)])
    return sm, [map_session(sm, s) for s in sessions]


def bench_render(kernels, sm, subgraphs):
    import sitetrace.render as render_module
    from sitetrace import _kernels as pkg

    saved = (pkg.fill_disc, pkg.fill_segment)
    pkg.fill_disc, pkg.fill_segment = kernels.fill_disc, kernels.fill_segment
    try:
        config = RenderConfig()
        start = time.perf_counter()
        for sg in subgraphs:
            render(sm, sg, config)
        elapsed = time.perf_counter() - start
    finally:
        pkg.fill_disc, pkg.fill_segment = saved
    return len(subgraphs) / elapsed


def bench_layout_step(kernels, n, steps=50):
    rng = np.random.default_rng(7)
    config = LayoutConfig()
    edges = {(i, (i * 5 + 2) % n) for i in range(n) if i != (i * 5 + 2) % n}
    indptr, indices = undirected_csr(n, edges)
    pos = rng.uniform(size=(n, 2))
    prev = pos.copy()
    force = np.empty_like(pos)
    args = (config.attraction_stiffness, config.rest_length,
            config.repulsion_strength, config.damping,
            config.time_step**2, 1e-12)
    start = time.perf_counter()
    for _ in range(steps):
        kernels.layout_step(pos, prev, force, indptr, indices, *args)
    return steps / (time.perf_counter() - start)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sessions", type=int, default=200)
    parser.add_argument("--nodes", type=int, default=600)
    args = parser.parse_args()

    sm, subgraphs = build_fixture(args.nodes, args.sessions)
    backends = [("python", _fallback)]
    if _native is not None:
        backends.insert(0, ("native", _native))
    else:
        print("compiled kernel not built; benchmarking fallback only")

    print(f"{'backend':<8} {'render (sessions/s)':>20} {'layout (steps/s)':>18}")
    results = {}
    for name, kernels in backends:
        rate = bench_render(kernels, sm, subgraphs)
        steps = bench_layout_step(kernels, args.nodes)
        results[name] = (rate, steps)
        print(f"{name:<8} {rate:>20.1f} {steps:>18.1f}")

    if len(results) == 2:
        r = results["native"][0] / results["python"][0]
        s = results["native"][1] / results["python"][1]
        print(f"\nnative speedup: render {r:.1f}x, layout step {s:.1f}x")


if __name__ == "__main__":
    main()
