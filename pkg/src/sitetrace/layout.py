"""Force-directed 2-D layout of the sitemap, Verlet-integrated.

Linked patterns attract (spring toward a rest length), all pairs repel
(inverse-square), and position-Verlet integration with velocity damping
carries the nodes to a balanced state. Coordinates are computed once per
sitemap and shared by every session rendered from it.

Determinism contract: identical (sitemap, config) gives identical
coordinates across runs and platforms — initial positions are hashed from
(seed, pattern text), forces are summed in ascending node-id order, and
everything is 64-bit floating point.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericalInstabilityError
from .sitemap import Sitemap

MIN_DISTANCE = 1e-6  # pairwise clamp so coincident points cannot blow up


@dataclass(frozen=True)
class LayoutConfig:
    attraction_stiffness: float = 0.08
    rest_length: float = 0.1
    repulsion_strength: float = 0.0005
    damping: float = 0.6
    time_step: float = 1.0
    max_iterations: int = 1000
    convergence_epsilon: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        for name in ("attraction_stiffness", "rest_length",
                     "repulsion_strength", "time_step", "convergence_epsilon"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.convergence_epsilon >= self.rest_length:
            raise ValueError("convergence_epsilon must be below rest_length")


def _hash_unit_point(seed: int, pattern: str) -> tuple[float, float]:
    digest = hashlib.blake2b(
        f"{seed}\x1f{pattern}".encode("utf-8"), digest_size=16
    ).digest()
    x = int.from_bytes(digest[:8], "big") / 2**64
    y = int.from_bytes(digest[8:], "big") / 2**64
    return x, y


def initial_positions(sitemap: Sitemap, seed: int) -> np.ndarray:
    """(n, 2) start positions, one per node id.

    Each point is derived from (seed, pattern text), so the placement does
    not depend on node insertion order.
    """
    pos = np.empty((len(sitemap.nodes), 2), dtype=np.float64)
    for i, pattern in enumerate(sitemap.nodes):
        pos[i, 0], pos[i, 1] = _hash_unit_point(seed, pattern)
    return pos


def undirected_csr(n: int, edges) -> tuple[np.ndarray, np.ndarray]:
    """Adjacency of the undirected edge set in CSR form, neighbors ascending."""
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for a, b in edges:
        if a == b:
            continue
        neighbors[a].add(b)
        neighbors[b].add(a)
    indptr = np.zeros(n + 1, dtype=np.int64)
    chunks = []
    for i, ns in enumerate(neighbors):
        ordered = sorted(ns)
        indptr[i + 1] = indptr[i] + len(ordered)
        chunks.extend(ordered)
    return indptr, np.asarray(chunks, dtype=np.int64)


def simulate(positions: np.ndarray, indptr: np.ndarray, indices: np.ndarray,
             config: LayoutConfig) -> tuple[np.ndarray, int]:
    """Run the integration until convergence or max_iterations.

    Returns raw (unscaled) positions and the number of iterations taken.
    Raises NumericalInstabilityError if any coordinate leaves the finite
    range.
    """
    pos = np.ascontiguousarray(positions, dtype=np.float64).copy()
    prev = pos.copy()  # equal prev == zero initial velocity
    force = np.empty_like(pos)
    dt2 = config.time_step * config.time_step
    eps2 = config.convergence_epsilon * config.convergence_epsilon
    min_d2 = MIN_DISTANCE * MIN_DISTANCE

    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        max_disp2 = _kernels.layout_step(
            pos, prev, force, indptr, indices,
            config.attraction_stiffness, config.rest_length,
            config.repulsion_strength, config.damping, dt2, min_d2,
        )
        if not np.isfinite(pos).all():
            raise NumericalInstabilityError(iterations)
        if max_disp2 < eps2:
            break
    return pos, iterations


def rescale_unit(positions: np.ndarray) -> np.ndarray:
    """Affine map into [0, 1]^2 preserving aspect ratio.

    The larger extent fills [0, 1]; the smaller one is centered. Degenerate
    extents (single node, collinear collapse) land centered as well.
    """
    lo = positions.min(axis=0)
    hi = positions.max(axis=0)
    span = hi - lo
    largest = float(span.max())
    scale = 1.0 / largest if largest > 0.0 else 1.0
    out = (positions - lo) * scale + (1.0 - span * scale) * 0.5
    return np.clip(out, 0.0, 1.0)


def run_layout(sitemap: Sitemap, config: LayoutConfig) -> Sitemap:
    """Return a copy of the sitemap with per-node coordinates filled in."""
    sitemap.validate()
    indptr, indices = undirected_csr(len(sitemap.nodes), sitemap.edges)
    pos0 = initial_positions(sitemap, config.seed)
    raw, _ = simulate(pos0, indptr, indices, config)
    unit = rescale_unit(raw)
    return Sitemap(
        nodes=list(sitemap.nodes),
        edges=set(sitemap.edges),
        invalid_node_id=sitemap.invalid_node_id,
        coordinates=[(float(x), float(y)) for x, y in unit],
    )
