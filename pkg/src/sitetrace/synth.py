"""Deterministic labeled traffic generator for desk-scale pipeline tests.

Four behavior caricatures over a given sitemap:

  human_walk   short sessions that mostly follow sitemap edges    -> human
  scraper      hammers one target pattern over and over           -> bot
  crawler      visits patterns breadth-first                      -> bot
  bruteforcer  mixes non-existent URLs that answer 404            -> bot

Concrete URLs are instantiated from patterns by substituting fresh digit
values for every "*", so they normalize back to the pattern they came
from. All randomness is derived from the profile seed, so identical seeds
reproduce identical sessions byte for byte.
"""

import hashlib
import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Optional

from .errors import ProfileConfigError
from .ingest import Request, Session
from .sitemap import Sitemap

KINDS = ("human_walk", "scraper", "crawler", "bruteforcer")

EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)
SESSION_SPACING = timedelta(seconds=60)


@dataclass(frozen=True)
class TrafficProfile:
    kind: str
    session_length_range: tuple[int, int] = (10, 30)
    seed: int = 0
    rate: float = 1.0  # mean requests per second
    # per-kind knobs
    target_pattern: Optional[str] = None  # scraper
    repeat_fraction: float = 0.8          # scraper
    edge_follow_probability: float = 0.9  # human_walk
    invalid_fraction: float = 0.5         # bruteforcer

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ProfileConfigError(f"unknown profile kind {self.kind!r}")
        lo, hi = self.session_length_range
        if not (1 <= lo <= hi):
            raise ProfileConfigError("session_length_range must satisfy 1 <= min <= max")
        for name in ("repeat_fraction", "edge_follow_probability", "invalid_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ProfileConfigError(f"{name} must lie in [0, 1]")
        if self.rate <= 0:
            raise ProfileConfigError("rate must be positive")


def _derived_rng(seed: int, *parts) -> random.Random:
    text = ":".join(str(p) for p in (seed,) + parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _instantiate(pattern: str, rng: random.Random) -> str:
    """Concrete URI from a pattern: every "*" becomes a fresh digit run."""
    if "?" in pattern:
        path, query = pattern.split("?", 1)
    else:
        path, query = pattern, ""
    segments = [
        str(rng.randrange(1, 1_000_000)) if s == "*" else s
        for s in path.split("/")
    ]
    uri = "/".join(segments)
    if query:
        parts = []
        for kv in query.split("&"):
            key = kv.split("=", 1)[0]
            parts.append(f"{key}={rng.randrange(1, 1_000_000)}")
        uri += "?" + "&".join(parts)
    return uri


def _bogus_uri(rng: random.Random) -> str:
    # letters outside [0-9a-f] so the path never collapses to a wildcard
    name = "".join(rng.choice("ghjkmnpqrstuvwxyz") for _ in range(10))
    return f"/{name}.{rng.choice(['zip', 'rar', 'bak', 'sql'])}"


def _walk_nodes(sitemap: Sitemap, profile: TrafficProfile, length: int,
                rng: random.Random) -> list[tuple[str, int]]:
    """(uri, status) pairs for one session of the given profile."""
    valid = [
        i for i in range(len(sitemap.nodes)) if i != sitemap.invalid_node_id
    ]
    out_edges: dict[int, list[int]] = {}
    for a, b in sorted(sitemap.edges):
        if sitemap.invalid_node_id in (a, b):
            continue  # never walk through INVALID
        out_edges.setdefault(a, []).append(b)

    emits: list[tuple[str, int]] = []

    def emit(node: int) -> None:
        emits.append((_instantiate(sitemap.nodes[node], rng), 200))

    if profile.kind == "human_walk":
        current = rng.choice(valid)
        emit(current)
        for _ in range(length - 1):
            neighbors = out_edges.get(current, [])
            if neighbors and rng.random() < profile.edge_follow_probability:
                current = rng.choice(neighbors)
            else:
                current = rng.choice(valid)
            emit(current)
    elif profile.kind == "scraper":
        target = sitemap.node_id(profile.target_pattern or "")
        for _ in range(length):
            if rng.random() < profile.repeat_fraction:
                emit(target)
            else:
                emit(rng.choice(valid))
    elif profile.kind == "crawler":
        order = _bfs_order(sitemap, out_edges, valid, rng)
        for i in range(length):
            emit(order[i % len(order)])
    else:  # bruteforcer
        for _ in range(length):
            if rng.random() < profile.invalid_fraction:
                emits.append((_bogus_uri(rng), 404))
            else:
                emit(rng.choice(valid))
    return emits


def _bfs_order(sitemap: Sitemap, out_edges: dict[int, list[int]],
               valid: list[int], rng: random.Random) -> list[int]:
    start = rng.choice(valid)
    seen = {start}
    order = [start]
    queue = [start]
    while queue:
        node = queue.pop(0)
        for nxt in out_edges.get(node, []):
            if nxt not in seen and nxt != sitemap.invalid_node_id:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
        if not queue:
            rest = [i for i in valid if i not in seen]
            if rest:
                seen.add(rest[0])
                order.append(rest[0])
                queue.append(rest[0])
    return order


def generate(sitemap: Sitemap,
             profiles: list[tuple[TrafficProfile, int]],
             host: str = "site.example") -> list[Session]:
    """Labeled sessions for each (profile, count) pair, deterministic."""
    sitemap.validate()
    if len(sitemap.nodes) < 3:
        raise ProfileConfigError("sitemap needs at least 2 non-INVALID nodes")
    for profile, _ in profiles:
        if profile.kind == "scraper":
            if profile.target_pattern is None:
                raise ProfileConfigError("scraper profile needs target_pattern")
            if sitemap.node_id(profile.target_pattern) in (None, sitemap.invalid_node_id):
                raise ProfileConfigError(
                    f"target pattern {profile.target_pattern!r} not in sitemap"
                )

    sessions = []
    counter = 0
    for p_idx, (profile, count) in enumerate(profiles):
        label = "human" if profile.kind == "human_walk" else "bot"
        lo, hi = profile.session_length_range
        for s_idx in range(count):
            rng = _derived_rng(profile.seed, profile.kind, p_idx, s_idx)
            length = rng.randint(lo, hi)
            emits = _walk_nodes(sitemap, profile, length, rng)
            session_id = f"{profile.kind}-{p_idx}-{s_idx:05d}"
            start = EPOCH + SESSION_SPACING * counter
            counter += 1
            ts = start
            requests = []
            for uri, status in emits:
                requests.append(
                    Request(
                        timestamp=ts,
                        http_method="GET",
                        request_uri=uri,
                        status=status,
                        host=host,
                        user_agent=f"synthetic/{profile.kind}",
                        client_ip="203.0.113.1",
                        session_id=session_id,
                        label=label,
                    )
                )
                gap_ms = max(1, int(rng.expovariate(profile.rate) * 1000))
                ts = ts + timedelta(milliseconds=gap_ms)
            sessions.append(
                Session(session_id=session_id, requests=tuple(requests), label=label)
            )
    return sessions
