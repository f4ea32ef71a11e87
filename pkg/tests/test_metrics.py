import pytest

from sitetrace.errors import CoverageError, UndefinedMetricsError
from sitetrace.ingest import sessionize
from sitetrace.metrics import bot_shares, evaluate

from conftest import make_request


def labeled_sessions(spec):
    """spec: list of (sid, label, n_requests)."""
    reqs = []
    t = 0
    for sid, label, n in spec:
        for _ in range(n):
            reqs.append(make_request(sid=sid, label=label, offset_ms=t))
            t += 1
    return sessionize(reqs)


class TestBotShares:
    def test_direct_ratios(self):
        spec = [(f"b{i}", "bot", 90 // 7 + (1 if i < 90 % 7 else 0))
                for i in range(7)]
        spec += [(f"h{i}", "human", 10 // 3 + (1 if i < 10 % 3 else 0))
                 for i in range(3)]
        sessions = labeled_sessions(spec)
        assert sum(len(s) for s in sessions) == 100
        bor, bos = bot_shares(sessions)
        assert (bor, bos) == (0.90, 0.70)

    def test_all_human(self):
        bor, bos = bot_shares(labeled_sessions([("h1", "human", 5),
                                                ("h2", "human", 3)]))
        assert (bor, bos) == (0.0, 0.0)

    def test_longer_bot_sessions_push_bor_above_bos(self):
        sessions = labeled_sessions(
            [(f"b{i}", "bot", 40) for i in range(5)]
            + [(f"h{i}", "human", 6) for i in range(5)]
        )
        bor, bos = bot_shares(sessions)
        assert bos == 0.5
        assert bor > bos

    def test_empty_rejected(self):
        with pytest.raises(UndefinedMetricsError):
            bot_shares([])

    def test_unlabeled_rejected(self):
        with pytest.raises(UndefinedMetricsError):
            bot_shares(labeled_sessions([("s", None, 3)]))


class TestEvaluate:
    def test_perfect(self):
        truth = {"a": "bot", "b": "human", "c": "bot"}
        report = evaluate(truth, dict(truth))
        assert report.precision == report.recall == report.accuracy == 1.0

    def test_all_predicted_bot(self):
        truth = {"a": "bot", "b": "human", "c": "bot", "d": "human"}
        report = evaluate(truth, {k: "bot" for k in truth})
        assert report.precision == 0.5
        assert report.recall == 1.0
        assert report.accuracy == 0.5

    def test_hand_counts(self):
        truth, pred = {}, {}
        cases = [("bot", "bot", 3), ("human", "bot", 1),
                 ("bot", "human", 2), ("human", "human", 4)]
        i = 0
        for actual, predicted, n in cases:
            for _ in range(n):
                truth[f"s{i}"] = actual
                pred[f"s{i}"] = predicted
                i += 1
        report = evaluate(truth, pred)
        assert report.counts == (3, 1, 4, 2)
        assert report.precision == 0.75
        assert report.recall == pytest.approx(0.6)
        assert report.accuracy == pytest.approx(0.7)
        assert report.bos == 0.5  # derived from truth labels

    def test_missing_prediction(self):
        with pytest.raises(CoverageError) as err:
            evaluate({"a": "bot", "b": "bot"}, {"a": "bot"})
        assert err.value.missing == ["b"]

    def test_extra_prediction(self):
        with pytest.raises(CoverageError):
            evaluate({"a": "bot"}, {"a": "bot", "zz": "human"})

    def test_permutation_invariant(self):
        truth = {f"s{i}": ("bot" if i % 3 else "human") for i in range(30)}
        pred = {f"s{i}": ("bot" if i % 2 else "human") for i in range(30)}
        shuffled = dict(reversed(list(truth.items())))
        assert evaluate(truth, pred) == evaluate(shuffled, pred)

    def test_undefined_metrics_are_none(self):
        report = evaluate({"a": "human"}, {"a": "human"})
        assert report.precision is None  # no predicted positives
        assert report.recall is None     # no actual positives
        assert report.accuracy == 1.0
        assert report.to_dict()["precision"] is None

    def test_bounds_and_count_sum(self):
        truth = {f"s{i}": ("bot" if i % 4 else "human") for i in range(40)}
        pred = {f"s{i}": ("bot" if i % 5 else "human") for i in range(40)}
        report = evaluate(truth, pred)
        assert sum(report.counts) == 40
        for value in (report.precision, report.recall, report.accuracy,
                      report.bos):
            assert value is None or 0.0 <= value <= 1.0

    def test_shares_passthrough(self):
        report = evaluate({"a": "bot"}, {"a": "bot"}, shares=(0.9, 0.7))
        assert (report.bor, report.bos) == (0.9, 0.7)

    def test_report_save(self, tmp_path):
        report = evaluate({"a": "bot"}, {"a": "bot"})
        path = tmp_path / "report.json"
        report.save(path)
        import json

        doc = json.loads(path.read_text())
        assert doc["counts"] == {"tp": 1, "fp": 0, "tn": 0, "fn": 0}
        assert doc["recall"] == 1.0
