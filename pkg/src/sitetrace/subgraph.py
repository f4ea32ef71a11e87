"""Project sessions onto the sitemap.

Every request maps to exactly one node: failed responses (status >= 400)
and URLs matching no pattern land on the reserved INVALID node, so no
request is ever dropped. Adjacent requests that land on different nodes
contribute a directed edge; same-node repeats only raise the frequency.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import EmptySessionError
from .ingest import Request, Session
from .sitemap import Sitemap
from .urlpattern import normalize


@dataclass
class SessionSubgraph:
    session_id: str
    frequencies: dict[int, int] = field(default_factory=dict)
    edges: set[tuple[int, int]] = field(default_factory=set)
    label: Optional[str] = None

    @property
    def spot_count(self) -> int:
        return len(self.frequencies)

    @property
    def request_count(self) -> int:
        return sum(self.frequencies.values())

    def to_dict(self, sitemap: Sitemap) -> dict:
        """Pattern-keyed form for debugging dumps."""
        return {
            "session_id": self.session_id,
            "frequencies": {
                sitemap.nodes[i]: n for i, n in sorted(self.frequencies.items())
            },
            "edges": [
                [sitemap.nodes[a], sitemap.nodes[b]] for a, b in sorted(self.edges)
            ],
            "label": self.label,
        }


def map_request(sitemap: Sitemap, request: Request) -> int:
    """Node id for one request; INVALID on error status or unknown pattern."""
    if request.status >= 400:
        return sitemap.invalid_node_id
    pattern = normalize(request.request_uri).value
    node = sitemap.node_id(pattern)
    return node if node is not None else sitemap.invalid_node_id


def map_session(sitemap: Sitemap, session: Session) -> SessionSubgraph:
    """Access frequencies and traversed edges of one session."""
    if len(session.requests) == 0:
        raise EmptySessionError(f"session {session.session_id!r} has no requests")
    frequencies: dict[int, int] = {}
    edges: set[tuple[int, int]] = set()
    prev: Optional[int] = None
    for request in session.requests:
        node = map_request(sitemap, request)
        frequencies[node] = frequencies.get(node, 0) + 1
        if prev is not None and prev != node:
            edges.add((prev, node))
        prev = node
    return SessionSubgraph(
        session_id=session.session_id,
        frequencies=frequencies,
        edges=edges,
        label=session.label,
    )


def filter_min_spots(subgraphs: Iterable[SessionSubgraph],
                     min_spots_exclusive: int = 3) -> list[SessionSubgraph]:
    """Keep subgraphs whose distinct-node count exceeds the threshold."""
    return [sg for sg in subgraphs if sg.spot_count > min_spots_exclusive]
