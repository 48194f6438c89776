"""Structure-recovery metrics: FP/FN counts, Hamming distances and recall."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .data_model import UndirectedGraph
from .errors import DegenerateTruth, EmptyInput, ShapeError

__all__ = ["MetricsReport", "AggregateReport", "compare_graphs", "aggregate"]

_FIELDS = ("fp", "fn", "hd", "hd_std", "recall")


@dataclass(frozen=True)
class MetricsReport:
    fp: int
    fn: int
    hd: int
    hd_std: float
    recall: float

    def to_json_dict(self) -> dict:
        return {f: getattr(self, f) for f in _FIELDS}


def compare_graphs(truth: UndirectedGraph, estimate: UndirectedGraph) -> MetricsReport:
    if truth.n_vertices != estimate.n_vertices:
        raise ShapeError(
            f"vertex count mismatch: {truth.n_vertices} vs {estimate.n_vertices}"
        )
    true_edges = truth.edge_set
    est_edges = estimate.edge_set
    fp = len(est_edges - true_edges)
    fn = len(true_edges - est_edges)
    hd = fp + fn
    if not true_edges:
        raise DegenerateTruth("standardized Hamming distance needs a non-empty truth")
    return MetricsReport(
        fp=fp,
        fn=fn,
        hd=hd,
        hd_std=100.0 * hd / len(true_edges),
        recall=len(true_edges & est_edges) / len(true_edges),
    )


@dataclass(frozen=True)
class AggregateReport:
    n_replicates: int
    fp: float
    fn: float
    hd: float
    hd_std: float
    recall: float
    stddev_fp: float
    stddev_fn: float
    stddev_hd: float
    stddev_hd_std: float
    stddev_recall: float

    def to_json_dict(self) -> dict:
        out = {"n_replicates": self.n_replicates}
        for f in _FIELDS:
            out[f] = getattr(self, f)
            out[f"stddev_{f}"] = getattr(self, f"stddev_{f}")
        return out


def _mean(xs):
    return sum(xs) / len(xs)


def _stddev(xs):
    if len(xs) < 2:
        return 0.0
    m = _mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def aggregate(reports) -> AggregateReport:
    reports = list(reports)
    if not reports:
        raise EmptyInput("cannot aggregate an empty report list")
    values = {f: [getattr(r, f) for r in reports] for f in _FIELDS}
    kwargs = {"n_replicates": len(reports)}
    for f in _FIELDS:
        kwargs[f] = _mean(values[f])
        kwargs[f"stddev_{f}"] = _stddev(values[f])
    return AggregateReport(**kwargs)
