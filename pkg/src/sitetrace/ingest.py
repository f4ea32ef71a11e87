"""Parse access logs into typed requests and group them into sessions.

Input is either jsonl (one object per line) or csv with a header row; both
carry the same fields: timestamp, http_method, request_uri, status, host,
user_agent, client_ip, session_id and an optional label ("bot"/"human").
Session boundaries come solely from session_id — the logs are assumed to be
sessionized upstream, so there is no idle-timeout splitting here.
"""

import csv
import io
import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import IO, Iterable, Iterator, Optional

from .errors import LabelConflictError, LogFormatError, LogInputError

KNOWN_METHODS = frozenset(
    {"GET", "POST", "PUT", "DELETE", "HEAD", "OPTIONS", "PATCH"}
)
LABELS = ("bot", "human")

CSV_COLUMNS = (
    "timestamp",
    "http_method",
    "request_uri",
    "status",
    "host",
    "user_agent",
    "client_ip",
    "session_id",
    "label",
)


def parse_timestamp(text: str) -> datetime:
    """ISO-8601 to a UTC datetime, truncated to millisecond precision.

    Naive timestamps are treated as UTC so results do not depend on the
    machine's zone.
    """
    text = text.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=ts.microsecond // 1000 * 1000)


def format_timestamp(ts: datetime) -> str:
    """Inverse of parse_timestamp; millisecond part only when non-zero."""
    ts = ts.astimezone(timezone.utc)
    base = ts.strftime("%Y-%m-%dT%H:%M:%S")
    if ts.microsecond:
        base += f".{ts.microsecond // 1000:03d}"
    return base + "Z"


@dataclass(frozen=True)
class Request:
    """One HTTP request record.

    user_agent and client_ip are carried for reporting only and never used
    as behavior features downstream.
    """

    timestamp: datetime
    http_method: str
    request_uri: str
    status: int
    host: str
    user_agent: str
    client_ip: str
    session_id: str
    label: Optional[str] = None

    def __post_init__(self):
        if not 100 <= self.status <= 599:
            raise ValueError(f"status out of range: {self.status}")
        if not self.request_uri.startswith("/"):
            raise ValueError(f"request_uri must start with '/': {self.request_uri!r}")
        if not self.session_id:
            raise ValueError("session_id must be non-empty")
        if self.label is not None and self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}: {self.label!r}")

    def to_dict(self) -> dict:
        d = {
            "timestamp": format_timestamp(self.timestamp),
            "http_method": self.http_method,
            "request_uri": self.request_uri,
            "status": self.status,
            "host": self.host,
            "user_agent": self.user_agent,
            "client_ip": self.client_ip,
            "session_id": self.session_id,
        }
        if self.label is not None:
            d["label"] = self.label
        return d

    def to_jsonl(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), sort_keys=True)


@dataclass(frozen=True)
class Session:
    """Timestamp-ordered requests sharing one session id."""

    session_id: str
    requests: tuple
    label: Optional[str] = None

    def __post_init__(self):
        if any(r.session_id != self.session_id for r in self.requests):
            raise ValueError("all requests must share the session id")

    def __len__(self) -> int:
        return len(self.requests)


@dataclass
class ParseResult:
    """Requests plus bookkeeping about skipped lines."""

    requests: list = field(default_factory=list)
    malformed: list = field(default_factory=list)  # (line_no, reason)

    @property
    def malformed_count(self) -> int:
        return len(self.malformed)


def _request_from_fields(fields: dict) -> Request:
    method = str(fields["http_method"])
    if method.upper() in KNOWN_METHODS:
        method = method.upper()
    label = fields.get("label")
    if label in ("", None):
        label = None
    status = fields["status"]
    if isinstance(status, bool) or not isinstance(status, int):
        status = int(str(status))
    return Request(
        timestamp=parse_timestamp(str(fields["timestamp"])),
        http_method=method,
        request_uri=str(fields["request_uri"]),
        status=status,
        host=str(fields.get("host", "")),
        user_agent=str(fields.get("user_agent", "")),
        client_ip=str(fields.get("client_ip", "")),
        session_id=str(fields["session_id"]),
        label=label,
    )


def _iter_lines(stream: Iterable[str] | IO[str]) -> Iterator[str]:
    try:
        yield from stream
    except (OSError, UnicodeDecodeError) as exc:
        raise LogInputError(f"cannot read log stream: {exc}") from exc


def _parse_jsonl(stream, result: ParseResult) -> int:
    total = 0
    for line_no, line in enumerate(_iter_lines(stream), start=1):
        if not line.strip():
            continue
        total += 1
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("line is not a JSON object")
            result.requests.append(_request_from_fields(obj))
        except (ValueError, KeyError, TypeError) as exc:
            result.malformed.append((line_no, str(exc)))
    return total


def _parse_csv(stream, result: ParseResult) -> int:
    reader = csv.DictReader(_iter_lines(stream))
    if reader.fieldnames is None:
        return 0
    required = set(CSV_COLUMNS) - {"label"}
    missing = required - set(reader.fieldnames)
    if missing:
        raise LogFormatError(first_bad_line=1, malformed=1, total=1)
    total = 0
    for row in reader:
        total += 1
        line_no = reader.line_num
        try:
            result.requests.append(_request_from_fields(row))
        except (ValueError, KeyError, TypeError) as exc:
            result.malformed.append((line_no, str(exc)))
    return total


def parse_log(stream: Iterable[str] | IO[str], format: str = "jsonl") -> ParseResult:
    """Parse a line-oriented log stream.

    Malformed lines are counted and skipped; if they exceed half of the
    non-blank lines the whole input is rejected with LogFormatError naming
    the first offending line.
    """
    if isinstance(stream, (str, bytes)):
        # Convenience for tests and small tools: treat a str as its content.
        stream = io.StringIO(stream if isinstance(stream, str) else stream.decode())
    result = ParseResult()
    if format == "jsonl":
        total = _parse_jsonl(stream, result)
    elif format == "csv":
        total = _parse_csv(stream, result)
    else:
        raise ValueError(f"unknown log format: {format!r}")
    if result.malformed and 2 * result.malformed_count > total:
        raise LogFormatError(
            first_bad_line=result.malformed[0][0],
            malformed=result.malformed_count,
            total=total,
        )
    return result


def parse_log_file(path, format: str = "jsonl") -> ParseResult:
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise LogInputError(f"cannot open {path}: {exc}") from exc
    with fh:
        return parse_log(fh, format=format)


def sessionize(requests: Iterable[Request]) -> list[Session]:
    """Group requests by session_id, sort each group by timestamp (stable),
    and order sessions by their first-request timestamp.

    Raises LabelConflictError when one session id mixes 'bot' and 'human'.
    """
    groups: dict[str, list[Request]] = {}
    first_seen: dict[str, int] = {}
    for idx, req in enumerate(requests):
        if req.session_id not in groups:
            groups[req.session_id] = []
            first_seen[req.session_id] = idx
        groups[req.session_id].append(req)

    sessions = []
    for sid, reqs in groups.items():
        labels = {r.label for r in reqs if r.label is not None}
        if len(labels) > 1:
            raise LabelConflictError(sid)
        ordered = sorted(reqs, key=lambda r: r.timestamp)
        sessions.append(
            Session(session_id=sid, requests=tuple(ordered),
                    label=next(iter(labels)) if labels else None)
        )
    sessions.sort(key=lambda s: (s.requests[0].timestamp, first_seen[s.session_id]))
    return sessions


def flatten(sessions: Iterable[Session]) -> list[Request]:
    """Concatenate session requests back into one request list."""
    out: list[Request] = []
    for session in sessions:
        out.extend(session.requests)
    return out


def write_jsonl(requests: Iterable[Request], fh: IO[str]) -> int:
    """Emit requests in the same jsonl format parse_log consumes."""
    n = 0
    for req in requests:
        fh.write(req.to_jsonl() + "\n")
        n += 1
    return n
