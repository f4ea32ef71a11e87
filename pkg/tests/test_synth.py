import pytest

from sitetrace.errors import ProfileConfigError
from sitetrace.subgraph import map_session
from sitetrace.synth import TrafficProfile, generate
from sitetrace.urlpattern import normalize


@pytest.fixture
def sm(shop_sitemap):
    return shop_sitemap


def test_deterministic(sm):
    profiles = [(TrafficProfile(kind="human_walk", seed=1), 3),
                (TrafficProfile(kind="bruteforcer", seed=2), 2)]
    assert generate(sm, profiles) == generate(sm, profiles)


def test_label_counts(sm):
    sessions = generate(sm, [
        (TrafficProfile(kind="human_walk", seed=1), 4),
        (TrafficProfile(kind="scraper", seed=2, target_pattern="/product?id=*"), 3),
        (TrafficProfile(kind="crawler", seed=3), 2),
    ])
    labels = [s.label for s in sessions]
    assert labels.count("human") == 4
    assert labels.count("bot") == 5
    for s in sessions:
        assert all(r.label == s.label for r in s.requests)


def test_scraper_concentrates_on_target(sm):
    profile = TrafficProfile(
        kind="scraper", session_length_range=(100, 100), seed=9,
        target_pattern="/product?id=*", repeat_fraction=0.8,
    )
    (session,) = generate(sm, [(profile, 1)])
    sg = map_session(sm, session)
    target = sm.node_id("/product?id=*")
    assert sg.frequencies[target] >= 0.8 * 100 * 0.8  # slack for sampling


def test_bruteforcer_all_invalid(sm):
    profile = TrafficProfile(kind="bruteforcer", session_length_range=(20, 20),
                             seed=5, invalid_fraction=1.0)
    (session,) = generate(sm, [(profile, 1)])
    sg = map_session(sm, session)
    assert sg.frequencies == {sm.invalid_node_id: 20}
    assert all(r.status == 404 for r in session.requests)


def test_valid_uris_normalize_back_to_sitemap(sm):
    sessions = generate(sm, [
        (TrafficProfile(kind="human_walk", seed=4), 5),
        (TrafficProfile(kind="scraper", seed=6, target_pattern="/product?id=*"), 2),
        (TrafficProfile(kind="crawler", seed=7), 2),
    ])
    for session in sessions:
        for req in session.requests:
            assert normalize(req.request_uri).value in sm.pattern_ids


def test_timestamps_sorted_and_sessions_ordered(sm):
    sessions = generate(sm, [(TrafficProfile(kind="human_walk", seed=8), 5)])
    starts = [s.requests[0].timestamp for s in sessions]
    assert starts == sorted(starts)
    for s in sessions:
        stamps = [r.timestamp for r in s.requests]
        assert stamps == sorted(stamps)


def test_session_lengths_within_range(sm):
    profile = TrafficProfile(kind="human_walk", session_length_range=(5, 9),
                             seed=3)
    for s in generate(sm, [(profile, 10)]):
        assert 5 <= len(s) <= 9


def test_scraper_needs_known_target(sm):
    with pytest.raises(ProfileConfigError):
        generate(sm, [(TrafficProfile(kind="scraper", target_pattern="/ghost"), 1)])
    with pytest.raises(ProfileConfigError):
        generate(sm, [(TrafficProfile(kind="scraper"), 1)])


def test_unknown_kind_rejected():
    with pytest.raises(ProfileConfigError):
        TrafficProfile(kind="ddos")


def test_tiny_sitemap_rejected():
    from sitetrace.sitemap import Sitemap

    tiny = Sitemap(nodes=["/", "INVALID"], edges=set(), invalid_node_id=1)
    with pytest.raises(ProfileConfigError):
        generate(tiny, [(TrafficProfile(kind="human_walk"), 1)])
