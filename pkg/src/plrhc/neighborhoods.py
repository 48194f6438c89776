"""Pairwise penalized likelihood-ratio screening and distance-3 search spaces.

The screen compares, for every ordered pair, the single-predictor logistic
fit against the intercept-only fit under the extended-BIC penalty. All
pair statistics come from one pass of packed-column AND/popcount work, so
each variable's data is touched once per partner.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .data_model import BinaryDataset, UndirectedGraph, bfs_within, single_source_distances, distance_class
from .errors import ShapeError
from .scoring import ScoreConfig, bic_penalty

__all__ = [
    "PlrResult",
    "SearchSpaces",
    "InclusionReport",
    "plr_screen",
    "build_search_spaces",
    "plr_inclusion_report",
]

DISTANCE_CLASSES = (1, 2, 3, 4, 5)  # 5 stands for ">= 5"


@dataclass(frozen=True)
class PlrResult:
    n_vertices: int
    ordered_pairs: frozenset
    symmetric_graph: UndirectedGraph
    delta_matrix: np.ndarray  # delta[j, jp]; diagonal is NaN

    def delta(self, j: int, jp: int) -> float:
        return float(self.delta_matrix[j, jp])


@dataclass(frozen=True)
class SearchSpaces:
    spaces: tuple  # per-variable sorted candidate tuples

    def space(self, j: int):
        return self.spaces[j]


def _pair_counts(data: BinaryDataset):
    """n11[j, jp] = #rows with both columns 1, via packed AND + popcount."""
    packed = data.packed_columns
    d = data.n_cols
    n11 = np.empty((d, d), dtype=np.int64)
    for j in range(d):
        n11[j] = np.bitwise_count(packed & packed[j]).sum(axis=1)
    return n11


def plr_screen(data: BinaryDataset, cfg: ScoreConfig = ScoreConfig()) -> PlrResult:
    n, d = data.n_rows, data.n_cols
    penalty = bic_penalty(n, d, cfg)
    n11 = _pair_counts(data)
    ones = np.diag(n11).astype(np.float64)
    n11 = n11.astype(np.float64)
    # cell counts for target j (rows) against partner jp (columns)
    n10 = ones[:, None] - n11  # x_j=1, x_jp=0
    n01 = ones[None, :] - n11  # x_j=0, x_jp=1
    n00 = n - ones[:, None] - ones[None, :] + n11

    def t(x):
        return xlogy(x, x)

    # saturated-conditional log-lik of j given jp, minus intercept-only
    cond = t(n00) + t(n01) + t(n10) + t(n11) - t(n - ones)[None, :] - t(ones)[None, :]
    marg = (t(n - ones) + t(ones) - t(np.full(d, float(n))))[:, None]
    delta = cond - marg - penalty
    np.fill_diagonal(delta, np.nan)

    included = delta > 0
    np.fill_diagonal(included, False)
    pairs = frozenset((int(a), int(b)) for a, b in zip(*np.nonzero(included)))
    edges = {(min(a, b), max(a, b)) for a, b in pairs}
    return PlrResult(
        n_vertices=d,
        ordered_pairs=pairs,
        symmetric_graph=UndirectedGraph(d, edges),
        delta_matrix=delta,
    )


def build_search_spaces(plr: PlrResult, radius: int = 3) -> SearchSpaces:
    g = plr.symmetric_graph
    return SearchSpaces(
        spaces=tuple(tuple(bfs_within(g, j, radius)) for j in range(g.n_vertices))
    )


def full_search_spaces(d: int) -> SearchSpaces:
    """Unconstrained spaces: every other variable is a candidate."""
    return SearchSpaces(
        spaces=tuple(tuple(v for v in range(d) if v != j) for j in range(d))
    )


@dataclass(frozen=True)
class InclusionReport:
    """Ordered-pair inclusion counts stratified by true graph distance."""

    included: dict  # class -> ordered pairs in the screen
    totals: dict  # class -> ordered pairs at that distance

    def rate(self, cls) -> float:
        total = self.totals.get(cls, 0)
        return self.included.get(cls, 0) / total if total else float("nan")

    @property
    def rates(self) -> dict:
        return {cls: self.rate(cls) for cls in DISTANCE_CLASSES}


def plr_inclusion_report(plr: PlrResult, truth: UndirectedGraph) -> InclusionReport:
    if truth.n_vertices != plr.n_vertices:
        raise ShapeError(
            f"vertex count mismatch: {truth.n_vertices} vs {plr.n_vertices}"
        )
    d = truth.n_vertices
    totals = {}
    included = {}
    for a in range(d):
        dist = single_source_distances(truth, a)
        for b in range(d):
            if a == b:
                continue
            cls = distance_class(int(dist[b]) if dist[b] >= 0 else -1)
            totals[cls] = totals.get(cls, 0) + 1
            if (a, b) in plr.ordered_pairs:
                included[cls] = included.get(cls, 0) + 1
    return InclusionReport(included=included, totals=totals)


def write_plr_tsv(plr: PlrResult, path) -> None:
    with open(path, "w") as fh:
        for j, jp in sorted(plr.ordered_pairs):
            fh.write(f"{j}\t{jp}\t{plr.delta_matrix[j, jp]:.12g}\n")
