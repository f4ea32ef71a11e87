"""sitetrace: web sessions -> sitemap trace images -> bot/human datasets.

Pipeline: parse access logs into sessions, normalize URLs onto a sitemap
graph, lay the graph out once with a force-directed Verlet simulation, map
each session to a subgraph, and rasterize it into a deterministic
grayscale trace image ready for a small image classifier.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .ingest import ParseResult, Request, Session, parse_log, sessionize
from .layout import LayoutConfig, initial_positions, run_layout
from .metrics import EvalReport, bot_shares, evaluate
from .render import (
    RadiusParams,
    RenderConfig,
    TraceImage,
    emit_dataset,
    radius,
    render,
    solve_radius_params,
)
from .sitemap import INVALID_PATTERN, Sitemap, build_from_sessions, crawl, load_from_file
from .subgraph import SessionSubgraph, filter_min_spots, map_request, map_session
from .synth import TrafficProfile, generate
from .urlpattern import UrlPattern, normalize

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ParseResult",
    "Request",
    "Session",
    "parse_log",
    "sessionize",
    "LayoutConfig",
    "initial_positions",
    "run_layout",
    "EvalReport",
    "bot_shares",
    "evaluate",
    "RadiusParams",
    "RenderConfig",
    "TraceImage",
    "emit_dataset",
    "radius",
    "render",
    "solve_radius_params",
    "INVALID_PATTERN",
    "Sitemap",
    "build_from_sessions",
    "crawl",
    "load_from_file",
    "SessionSubgraph",
    "filter_min_spots",
    "map_request",
    "map_session",
    "TrafficProfile",
    "generate",
    "UrlPattern",
    "normalize",
    "__version__",
]
