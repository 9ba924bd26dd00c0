"""Ranking and likelihood metrics for probabilistic predictions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

CLL_CLAMP = 1e-9


class DegenerateError(ValueError):
    """Only one class is present; ``report`` still carries the likelihood."""

    def __init__(self, report: "EvalReport"):
        self.report = report
        super().__init__(f"AUC undefined with {report.n_pos} positives and {report.n_neg} negatives")


@dataclass(frozen=True)
class EvalReport:
    auc_roc: Optional[float]
    auc_pr: Optional[float]
    mean_cll: float
    n_pos: int
    n_neg: int

    def _items(self, exact: bool = False):
        def fmt(v):
            if v is None:
                return "absent"
            return repr(v) if exact else f"{v:.6f}"

        return [
            ("n_pos", str(self.n_pos)),
            ("n_neg", str(self.n_neg)),
            ("auc_roc", fmt(self.auc_roc)),
            ("auc_pr", fmt(self.auc_pr)),
            ("mean_cll", fmt(self.mean_cll)),
        ]

    def format_text(self) -> str:
        items = self._items()
        width = max(len(k) for k, _ in items)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in items) + "\n"

    def format_kv(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self._items(exact=True)) + "\n"


def _midranks(scores: Sequence[float]) -> List[float]:
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def auc_roc(labels: Sequence[int], scores: Sequence[float]) -> float:
    """Mann-Whitney statistic with midranks; ties count one half."""
    n_pos = sum(1 for y in labels if y)
    n_neg = len(labels) - n_pos
    ranks = _midranks(scores)
    # Twice the U statistic is an integer, so the result is exact for small inputs.
    twice_rank_sum = int(round(2 * math.fsum(r for r, y in zip(ranks, labels) if y)))
    twice_u = twice_rank_sum - n_pos * (n_pos + 1)
    return twice_u / (2 * n_pos * n_neg)


def auc_pr(labels: Sequence[int], scores: Sequence[float]) -> float:
    """Area under the precision-recall step curve (average precision).

    Examples with tied scores enter the curve together.
    """
    n_pos = sum(1 for y in labels if y)
    pairs = sorted(zip(scores, labels), key=lambda t: -t[0])
    area = 0.0
    tp = fp = 0
    prev_recall = 0.0
    i = 0
    while i < len(pairs):
        j = i
        while j < len(pairs) and pairs[j][0] == pairs[i][0]:
            if pairs[j][1]:
                tp += 1
            else:
                fp += 1
            j += 1
        recall = tp / n_pos
        precision = tp / (tp + fp)
        area += (recall - prev_recall) * precision
        prev_recall = recall
        i = j
    return area


def mean_cll(labels: Sequence[int], probabilities: Sequence[float]) -> float:
    terms = []
    for y, p in zip(labels, probabilities):
        p = min(max(p, CLL_CLAMP), 1.0 - CLL_CLAMP)
        terms.append(math.log(p) if y else math.log1p(-p))
    return math.fsum(terms) / len(terms)


def evaluate(scored: Iterable[Tuple[int, float]]) -> EvalReport:
    """Report for (label, probability) pairs, label 1 for positive.

    Raises :class:`DegenerateError` (carrying a report without AUCs) when one
    class is missing.
    """
    scored = list(scored)
    if not scored:
        raise ValueError("nothing to evaluate")
    labels = [1 if y else 0 for y, _ in scored]
    probs = [float(p) for _, p in scored]
    n_pos = sum(labels)
    n_neg = len(labels) - n_pos
    cll = mean_cll(labels, probs)
    if n_pos == 0 or n_neg == 0:
        raise DegenerateError(EvalReport(None, None, cll, n_pos, n_neg))
    return EvalReport(auc_roc(labels, probs), auc_pr(labels, probs), cll, n_pos, n_neg)
