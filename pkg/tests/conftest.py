from datetime import datetime, timedelta, timezone

import pytest

from sitetrace.ingest import Request
from sitetrace.sitemap import Sitemap

BASE_TS = datetime(2024, 1, 1, tzinfo=timezone.utc)


def make_request(uri="/", status=200, sid="s1", offset_ms=0, label=None,
                 method="GET"):
    return Request(
        timestamp=BASE_TS + timedelta(milliseconds=offset_ms),
        http_method=method,
        request_uri=uri,
        status=status,
        host="shop.example",
        user_agent="UA",
        client_ip="203.0.113.7",
        session_id=sid,
        label=label,
    )


@pytest.fixture
def request_factory():
    return make_request


@pytest.fixture
def shop_sitemap():
    """Small laid-out sitemap: 6 pages in a ring plus INVALID, spread out."""
    nodes = ["/", "/login", "/products", "/product?id=*", "/cart", "/checkout",
             "INVALID"]
    edges = {(0, 1), (0, 2), (2, 3), (3, 4), (4, 5), (5, 0), (3, 2)}
    coords = [
        (0.10, 0.10), (0.90, 0.10), (0.50, 0.35), (0.10, 0.60),
        (0.90, 0.60), (0.50, 0.85), (0.95, 0.95),
    ]
    sm = Sitemap(nodes=nodes, edges=edges, invalid_node_id=6,
                 coordinates=coords)
    sm.validate()
    return sm
