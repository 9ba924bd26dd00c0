import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from sklearn.metrics import average_precision_score

from relboost.metrics import DegenerateError, EvalReport, auc_pr, auc_roc, evaluate, mean_cll


def pairwise_auc(labels, scores):
    pos = [s for s, y in zip(scores, labels) if y]
    neg = [s for s, y in zip(scores, labels) if not y]
    total = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return total / (len(pos) * len(neg))


# Coarse grid so ties are common.
scores = st.sampled_from([0.0, 0.1, 0.25, 0.5, 0.5, 0.75, 0.9, 1.0])


@st.composite
def labelled(draw, max_size=28):
    n = draw(st.integers(2, max_size))
    labels = draw(st.lists(st.sampled_from([0, 1]), min_size=n, max_size=n))
    assume(0 < sum(labels) < n)
    return labels, draw(st.lists(scores, min_size=n, max_size=n))


def test_examples():
    sep = [(1, 0.9), (1, 0.8), (0, 0.2), (0, 0.1)]
    r = evaluate(sep)
    assert r.auc_roc == 1.0 and r.auc_pr == 1.0
    assert evaluate([(1, 0.4), (0, 0.4), (1, 0.4)]).auc_roc == 0.5
    assert abs(evaluate([(1, 0.5), (0, 0.5)]).mean_cll + math.log(2)) < 1e-12


def test_clamping():
    assert mean_cll([1], [0.0]) == pytest.approx(math.log(1e-9))
    assert mean_cll([0], [1.0]) == pytest.approx(math.log(1e-9), rel=1e-6)


def test_degenerate():
    with pytest.raises(DegenerateError) as info:
        evaluate([(1, 0.7), (1, 0.9)])
    report = info.value.report
    assert report.auc_roc is None and report.n_pos == 2
    assert report.mean_cll == pytest.approx((math.log(0.7) + math.log(0.9)) / 2)
    assert "absent" in report.format_text()
    with pytest.raises(ValueError):
        evaluate([])


@given(labelled(max_size=28))
def test_auc_matches_pairwise_exactly(data):
    labels, s = data
    assert auc_roc(labels, s) == pairwise_auc(labels, s)


@given(labelled())
def test_auc_pr_matches_sklearn(data):
    labels, s = data
    assert auc_pr(labels, s) == pytest.approx(average_precision_score(labels, s), abs=1e-12)


@given(labelled())
def test_monotone_invariance(data):
    labels, s = data
    t = [math.exp(3 * x) - 7 for x in s]
    assert auc_roc(labels, t) == auc_roc(labels, s)
    assert auc_pr(labels, t) == auc_pr(labels, s)


@given(labelled())
def test_ranges(data):
    labels, s = data
    r = evaluate(zip(labels, s))
    assert 0 <= r.auc_roc <= 1 and 0 <= r.auc_pr <= 1 and r.mean_cll <= 0
    assert r.n_pos + r.n_neg == len(labels)


def test_report_formats():
    r = EvalReport(1.0, 0.5, -0.25, 2, 3)
    assert r.format_text().splitlines()[2] == "auc_roc   1.000000"
    assert r.format_kv().splitlines() == ["n_pos=2", "n_neg=3", "auc_roc=1.0", "auc_pr=0.5", "mean_cll=-0.25"]
