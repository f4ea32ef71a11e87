"""Normalize concrete URLs into URL patterns.

"/page?id=1" and "/page?id=2" both collapse to "/page?id=*" so they land on
one sitemap node.  Normalization is idempotent and deterministic:

  1. the fragment is stripped;
  2. a trailing slash is removed (except for the root "/");
  3. every query value becomes "*", keys are sorted, duplicates collapse;
  4. path segments that are all digits, hex of length >= 8, or UUIDs
     become "*";
  5. percent-encodings are lowercased so case variants compare equal.
"""

import re
from dataclasses import dataclass

from .errors import InvalidUriError

_HEX_SEGMENT = re.compile(r"[0-9a-fA-F]{8,}$")
_UUID_SEGMENT = re.compile(
    r"[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}$"
)
_PERCENT = re.compile(r"%[0-9a-fA-F]{2}")


@dataclass(frozen=True)
class UrlPattern:
    """Canonical URL pattern text, e.g. "/page?id=*"."""

    value: str

    def __str__(self) -> str:
        return self.value


def _lower_percent(text: str) -> str:
    return _PERCENT.sub(lambda m: m.group(0).lower(), text)


def _generalize_segment(segment: str) -> str:
    if segment.isdigit():
        return "*"
    if _HEX_SEGMENT.fullmatch(segment) or _UUID_SEGMENT.fullmatch(segment):
        return "*"
    return segment


def normalize(uri: str) -> UrlPattern:
    """Collapse a concrete request URI to its URL pattern.

    Raises InvalidUriError unless the URI starts with "/".
    """
    if not uri.startswith("/"):
        raise InvalidUriError(f"request URI must start with '/': {uri!r}")

    uri = uri.split("#", 1)[0]
    if "?" in uri:
        path, query = uri.split("?", 1)
    else:
        path, query = uri, ""

    path = _lower_percent(path)
    if len(path) > 1 and path.endswith("/"):
        path = path[:-1]
    segments = path.split("/")
    # segments[0] is the empty string before the leading slash
    path = "/".join([segments[0]] + [_generalize_segment(s) for s in segments[1:]])

    keys = set()
    for part in query.split("&"):
        if not part:
            continue
        key = part.split("=", 1)[0]
        keys.add(_lower_percent(key))
    if keys:
        path += "?" + "&".join(f"{k}=*" for k in sorted(keys))
    return UrlPattern(path)
