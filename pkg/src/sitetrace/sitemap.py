"""Directed URL-pattern graph with three builders.

A sitemap can be sniffed from session traffic, loaded from a JSON file, or
crawled from a live (or fixture) site. Every sitemap contains the reserved
INVALID node that later absorbs failed or unknown requests. Node ids are
assigned by first-seen order and persist through the JSON file, so layout
coordinates stay attached to the right patterns.

File format::

    {"nodes": [pattern, ...],
     "edges": [[from_pattern, to_pattern], ...],
     "coordinates": {pattern: [x, y], ...}}   # optional, written by layout
"""

import json
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Callable, Iterable, Optional
from urllib.parse import urljoin, urlsplit

from .errors import CrawlError, SitemapFormatError
from .ingest import Session
from .urlpattern import normalize

INVALID_PATTERN = "INVALID"

# fetcher: url -> (status, html body)
Fetcher = Callable[[str], tuple[int, str]]


@dataclass
class Sitemap:
    nodes: list[str] = field(default_factory=list)
    edges: set[tuple[int, int]] = field(default_factory=set)
    invalid_node_id: int = 0
    coordinates: Optional[list[tuple[float, float]]] = None

    def __post_init__(self):
        self._ids = {p: i for i, p in enumerate(self.nodes)}

    @property
    def pattern_ids(self) -> dict[str, int]:
        return self._ids

    def node_id(self, pattern: str) -> Optional[int]:
        return self._ids.get(pattern)

    def __len__(self) -> int:
        return len(self.nodes)

    def validate(self) -> None:
        """Check every structural invariant; raises SitemapFormatError."""
        if len(set(self.nodes)) != len(self.nodes):
            raise SitemapFormatError("duplicate node patterns")
        if self.nodes.count(INVALID_PATTERN) != 1:
            raise SitemapFormatError("INVALID node must exist exactly once")
        if self.nodes[self.invalid_node_id] != INVALID_PATTERN:
            raise SitemapFormatError("invalid_node_id does not point at INVALID")
        n = len(self.nodes)
        for a, b in self.edges:
            if not (0 <= a < n and 0 <= b < n):
                raise SitemapFormatError(f"edge ({a}, {b}) leaves the node range")
        if self.coordinates is not None:
            if len(self.coordinates) != n:
                raise SitemapFormatError("coordinates must cover every node")
            for x, y in self.coordinates:
                if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                    raise SitemapFormatError("coordinates must lie in the unit square")

    def to_dict(self) -> dict:
        doc = {
            "nodes": list(self.nodes),
            "edges": [
                [self.nodes[a], self.nodes[b]] for a, b in sorted(self.edges)
            ],
        }
        if self.coordinates is not None:
            doc["coordinates"] = {
                p: [self.coordinates[i][0], self.coordinates[i][1]]
                for i, p in enumerate(self.nodes)
            }
        return doc

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def _finish(nodes: list[str], edges: set[tuple[int, int]],
            coordinates=None) -> Sitemap:
    if INVALID_PATTERN not in nodes:
        nodes = nodes + [INVALID_PATTERN]
    sm = Sitemap(
        nodes=nodes,
        edges=edges,
        invalid_node_id=nodes.index(INVALID_PATTERN),
        coordinates=coordinates,
    )
    sm.validate()
    return sm


def build_from_sessions(sessions: Iterable[Session]) -> Sitemap:
    """Passive sniffing: nodes are the normalized patterns of successful
    requests (status < 400); edges come from adjacency inside each session.

    Self-edges are skipped — they carry no layout force and no drawable
    line. The INVALID node never gets sniffed edges.
    """
    nodes: list[str] = []
    ids: dict[str, int] = {}
    pair_edges: set[tuple[int, int]] = set()

    def intern(pattern: str) -> int:
        if pattern not in ids:
            ids[pattern] = len(nodes)
            nodes.append(pattern)
        return ids[pattern]

    for session in sessions:
        prev_id: Optional[int] = None
        for req in session.requests:
            if req.status >= 400:
                prev_id = None
                continue
            node = intern(normalize(req.request_uri).value)
            if prev_id is not None and prev_id != node:
                pair_edges.add((prev_id, node))
            prev_id = node
    return _finish(nodes, pair_edges)


def load_from_file(path) -> Sitemap:
    """Self-provided sitemap from the JSON file format above."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except ValueError as exc:
            raise SitemapFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise SitemapFormatError("sitemap file must be an object with 'nodes'")

    nodes = [str(p) for p in doc["nodes"]]
    seen = set()
    for p in nodes:
        if p in seen:
            raise SitemapFormatError(f"duplicate node pattern {p!r}")
        seen.add(p)
    had_invalid = INVALID_PATTERN in seen
    if not had_invalid:
        nodes.append(INVALID_PATTERN)
    ids = {p: i for i, p in enumerate(nodes)}

    edges: set[tuple[int, int]] = set()
    for pair in doc.get("edges", []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise SitemapFormatError(f"edge entry must be a pair: {pair!r}")
        a, b = str(pair[0]), str(pair[1])
        for p in (a, b):
            if p not in ids:
                raise SitemapFormatError(f"edge names unknown pattern {p!r}")
        edges.add((ids[a], ids[b]))

    coordinates = None
    if "coordinates" in doc:
        coords = doc["coordinates"]
        if not isinstance(coords, dict):
            raise SitemapFormatError("'coordinates' must map pattern -> [x, y]")
        for p in coords:
            if p not in ids:
                raise SitemapFormatError(f"coordinates name unknown pattern {p!r}")
        missing = [p for p in nodes if p not in coords]
        if missing:
            raise SitemapFormatError(
                f"coordinates missing for {missing[:3]!r}; run the layout"
            )
        coordinates = [(float(coords[p][0]), float(coords[p][1])) for p in nodes]

    sm = Sitemap(
        nodes=nodes,
        edges=edges,
        invalid_node_id=ids[INVALID_PATTERN],
        coordinates=coordinates,
    )
    sm.validate()
    return sm


class _HrefCollector(HTMLParser):
    def __init__(self):
        super().__init__()
        self.hrefs: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag.lower() != "a":
            return
        for name, value in attrs:
            if name.lower() == "href" and value:
                self.hrefs.append(value)


def extract_links(base_url: str, html: str) -> list[str]:
    """Absolute same-host link targets from anchor tags, crawl-order."""
    parser = _HrefCollector()
    parser.feed(html)
    base_host = urlsplit(base_url).netloc
    out = []
    for href in parser.hrefs:
        href = href.strip()
        if not href or href.startswith("#"):
            continue
        scheme = urlsplit(href).scheme
        if scheme and scheme not in ("http", "https"):
            continue  # mailto:, javascript:, etc.
        absolute = urljoin(base_url, href)
        parts = urlsplit(absolute)
        if parts.netloc != base_host:
            continue
        out.append(absolute)
    return out


def http_fetcher(timeout: float = 10.0,
                 user_agent: str = "sitetrace-crawler/0.1") -> Fetcher:
    """Real fetcher: HTTP GET returning (status, decoded body)."""

    def fetch(url: str) -> tuple[int, str]:
        req = urllib.request.Request(url, headers={"User-Agent": user_agent})
        try:
            with urllib.request.urlopen(req, timeout=timeout) as resp:
                return resp.status, resp.read().decode("utf-8", errors="replace")
        except urllib.error.HTTPError as exc:
            return exc.code, ""

    return fetch


def crawl(fetcher: Fetcher, start: str, max_patterns: int) -> Sitemap:
    """Active crawling: breadth-first from the start URL.

    Each URL pattern is fetched at most once (the first concrete URL seen
    for it); the walk stops after max_patterns patterns. Fetch failures on
    non-start pages are recorded on the result as `fetch_failures` and
    skipped.
    """
    if max_patterns < 1:
        raise ValueError("max_patterns must be >= 1")

    def to_pattern(url: str) -> str:
        parts = urlsplit(url)
        path = parts.path or "/"
        if parts.query:
            path += "?" + parts.query
        return normalize(path).value

    nodes: list[str] = []
    ids: dict[str, int] = {}
    pattern_edges: set[tuple[str, str]] = set()
    failures: list[tuple[str, str]] = []

    start_pattern = to_pattern(start)
    queue: list[tuple[str, str]] = [(start, start_pattern)]
    queued = {start_pattern}

    while queue and len(nodes) < max_patterns:
        url, pattern = queue.pop(0)
        try:
            status, body = fetcher(url)
        except Exception as exc:
            if pattern == start_pattern and not nodes:
                raise CrawlError(f"cannot fetch start URL {start}: {exc}") from exc
            failures.append((url, str(exc)))
            continue
        if status >= 400:
            if pattern == start_pattern and not nodes:
                raise CrawlError(f"start URL {start} answered {status}")
            failures.append((url, f"status {status}"))
            continue
        ids[pattern] = len(nodes)
        nodes.append(pattern)
        for link in extract_links(url, body):
            target = to_pattern(link)
            if target != pattern:
                pattern_edges.add((pattern, target))
            if target not in queued:
                queued.add(target)
                queue.append((link, target))

    edges = {
        (ids[a], ids[b]) for a, b in pattern_edges if a in ids and b in ids
    }
    sm = _finish(nodes, edges)
    sm.fetch_failures = failures
    return sm
