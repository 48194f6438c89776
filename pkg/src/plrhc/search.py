"""Two-phase greedy structure search.

Phase 1 learns a Markov blanket per variable by alternating best-addition
and best-deletion sweeps over a candidate space. Phase 2 hill-climbs over
whole graphs, toggling one eligible edge at a time; only the two incident
per-variable scores change, so edge deltas are cached and refreshed
locally after each applied toggle.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .data_model import BinaryDataset, UndirectedGraph, HARD_BLANKET_CAP
from .errors import SearchBudgetExceeded
from .neighborhoods import SearchSpaces, build_search_spaces, full_search_spaces, plr_screen, PlrResult
from .scoring import BlanketScore, ScoreCache, ScoreConfig, score_blanket

__all__ = [
    "BlanketEstimate",
    "EdgeDeltaCache",
    "LearnStats",
    "LearnResult",
    "iamb_blanket",
    "phase1",
    "combine",
    "phase2",
    "learn_structure",
]

MODES = ("plrhc", "hc", "hc-or", "hc-and")


@dataclass
class LearnStats:
    phase1_evals: int = 0
    phase2_evals: int = 0
    phase2_toggles: int = 0
    pairwise_evals: int = 0
    pairwise_fraction: float = 0.0
    mean_blanket_size: float = 0.0
    wall_ms: float = 0.0
    score_trace: list = field(default_factory=list)

    @property
    def total_evals(self) -> int:
        return self.phase1_evals + self.phase2_evals

    def to_json_dict(self) -> dict:
        return {
            "phase1_evals": self.phase1_evals,
            "phase2_evals": self.phase2_evals,
            "pairwise_fraction": self.pairwise_fraction,
            "mean_blanket_size": self.mean_blanket_size,
            "wall_ms": self.wall_ms,
        }


@dataclass(frozen=True)
class BlanketEstimate:
    blankets: tuple  # per-variable sorted tuples
    scores: tuple  # per-variable BlanketScore

    def blanket(self, j: int):
        return self.blankets[j]


def iamb_blanket(
    data: BinaryDataset,
    j: int,
    space,
    cache: ScoreCache,
    cfg: ScoreConfig = ScoreConfig(),
):
    """Greedy blanket search for one variable; returns (blanket, score)."""
    space = tuple(v for v in space if v != j)
    current = score_blanket(cache, data, j, (), cfg)
    blanket = set()
    budget = 10 * data.n_cols
    moves = 0
    while True:
        changed = False
        # best single addition
        if len(blanket) >= HARD_BLANKET_CAP:
            warnings.warn(
                f"blanket of variable {j} hit the size cap {HARD_BLANKET_CAP}; "
                "skipping additions",
                RuntimeWarning,
            )
            candidates = ()
        else:
            candidates = tuple(v for v in space if v not in blanket)
        best = None
        for v in candidates:
            trial = score_blanket(cache, data, j, sorted(blanket | {v}), cfg)
            if trial.bic > current.bic and (best is None or trial.bic > best[1].bic):
                best = (v, trial)
        if best is not None:
            blanket.add(best[0])
            current = best[1]
            changed = True
            moves += 1
        # best single deletion
        best = None
        for v in sorted(blanket):
            trial = score_blanket(cache, data, j, sorted(blanket - {v}), cfg)
            if trial.bic > current.bic and (best is None or trial.bic > best[1].bic):
                best = (v, trial)
        if best is not None:
            blanket.discard(best[0])
            current = best[1]
            changed = True
            moves += 1
        if not changed:
            return tuple(sorted(blanket)), current
        if moves > budget:
            raise SearchBudgetExceeded(
                f"variable {j} exceeded {budget} blanket moves"
            )


def phase1(
    data: BinaryDataset,
    spaces: SearchSpaces,
    cfg: ScoreConfig = ScoreConfig(),
    cache: ScoreCache = None,
    threads: int = 1,
) -> BlanketEstimate:
    if cache is None:
        cache = ScoreCache()

    def solve(j):
        return iamb_blanket(data, j, spaces.space(j), cache, cfg)

    indices = range(data.n_cols)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(solve, indices))
    else:
        results = [solve(j) for j in indices]
    return BlanketEstimate(
        blankets=tuple(r[0] for r in results),
        scores=tuple(r[1] for r in results),
    )


def combine(est: BlanketEstimate, rule: str) -> UndirectedGraph:
    """OR keeps an edge claimed by either endpoint, AND requires both."""
    d = len(est.blankets)
    edges = set()
    for j, blanket in enumerate(est.blankets):
        for v in blanket:
            if rule == "or" or j in est.blankets[v]:
                edges.add((min(j, v), max(j, v)))
    if rule not in ("or", "and"):
        raise ValueError(f"unknown combination rule {rule!r}")
    return UndirectedGraph(d, edges)


class EdgeDeltaCache:
    """Score deltas for toggling each eligible edge in the current graph."""

    def __init__(
        self,
        data: BinaryDataset,
        eligible: UndirectedGraph,
        cfg: ScoreConfig = ScoreConfig(),
        cache: ScoreCache = None,
    ):
        self.data = data
        self.cfg = cfg
        self.cache = cache if cache is not None else ScoreCache()
        self.eligible = tuple(eligible.edges)
        self.adjacency = [set() for _ in range(eligible.n_vertices)]
        self.scores = [
            score_blanket(self.cache, data, j, (), cfg)
            for j in range(eligible.n_vertices)
        ]
        self.deltas = {e: self._fresh_delta(e) for e in self.eligible}

    def _toggled(self, edge):
        a, b = edge
        mb_a = set(self.adjacency[a])
        mb_b = set(self.adjacency[b])
        if b in mb_a:
            mb_a.discard(b)
            mb_b.discard(a)
        else:
            mb_a.add(b)
            mb_b.add(a)
        sa = score_blanket(self.cache, self.data, a, sorted(mb_a), self.cfg)
        sb = score_blanket(self.cache, self.data, b, sorted(mb_b), self.cfg)
        return sa, sb

    def _fresh_delta(self, edge) -> float:
        a, b = edge
        sa, sb = self._toggled(edge)
        return (sa.bic + sb.bic) - (self.scores[a].bic + self.scores[b].bic)

    def best(self):
        best_edge, best_delta = None, 0.0
        for e in self.eligible:
            d = self.deltas[e]
            if d > best_delta or (d == best_delta and d > 0.0 and e < best_edge):
                best_edge, best_delta = e, d
        return best_edge, best_delta

    def apply(self, edge) -> None:
        a, b = edge
        sa, sb = self._toggled(edge)
        if b in self.adjacency[a]:
            self.adjacency[a].discard(b)
            self.adjacency[b].discard(a)
        else:
            self.adjacency[a].add(b)
            self.adjacency[b].add(a)
        self.scores[a] = sa
        self.scores[b] = sb
        for e in self.eligible:
            if a in e or b in e:
                self.deltas[e] = self._fresh_delta(e)

    def global_score(self) -> float:
        return sum(s.bic for s in self.scores)

    def current_graph(self) -> UndirectedGraph:
        d = len(self.adjacency)
        edges = {(a, b) for a in range(d) for b in self.adjacency[a] if a < b}
        return UndirectedGraph(d, edges)


def phase2(
    data: BinaryDataset,
    eligible: UndirectedGraph,
    cfg: ScoreConfig = ScoreConfig(),
    cache: ScoreCache = None,
    stats: LearnStats = None,
):
    """Global hill climbing from the empty graph over the eligible edges."""
    delta_cache = EdgeDeltaCache(data, eligible, cfg, cache)
    trace = [delta_cache.global_score()]
    budget = 10 * max(1, len(delta_cache.eligible))
    toggles = 0
    while True:
        edge, delta = delta_cache.best()
        if edge is None or delta <= 0.0:
            break
        delta_cache.apply(edge)
        trace.append(delta_cache.global_score())
        toggles += 1
        if toggles > budget:
            raise SearchBudgetExceeded(f"phase 2 exceeded {budget} toggles")
    if stats is not None:
        stats.phase2_toggles = toggles
        stats.score_trace = trace
    return delta_cache.current_graph()


@dataclass
class LearnResult:
    graph: UndirectedGraph
    stats: LearnStats
    blankets: BlanketEstimate = None
    plr: PlrResult = None


def learn_structure(
    data: BinaryDataset,
    cfg: ScoreConfig = ScoreConfig(),
    mode: str = "plrhc",
    threads: int = 1,
) -> LearnResult:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    t0 = time.perf_counter()
    cache = ScoreCache()
    stats = LearnStats()
    plr = None
    # the screen fits one empty and d-1 single-variable blankets per target;
    # those are score evaluations too, booked under phase 1
    screen_evals = 0
    screen_size_sum = 0
    if mode == "plrhc":
        plr = plr_screen(data, cfg)
        spaces = build_search_spaces(plr)
        screen_evals = data.n_cols * data.n_cols
        screen_size_sum = data.n_cols * (data.n_cols - 1)
    else:
        spaces = full_search_spaces(data.n_cols)
    est = phase1(data, spaces, cfg, cache, threads)
    stats.phase1_evals = cache.misses + screen_evals
    if mode == "hc-or":
        graph = combine(est, "or")
    elif mode == "hc-and":
        graph = combine(est, "and")
    else:
        eligible = combine(est, "or")
        graph = phase2(data, eligible, cfg, cache, stats)
    misses, pairwise, size_sum = cache.snapshot()
    total = misses + screen_evals
    stats.phase2_evals = total - stats.phase1_evals
    stats.pairwise_evals = pairwise + screen_evals
    stats.pairwise_fraction = stats.pairwise_evals / total if total else 0.0
    stats.mean_blanket_size = (size_sum + screen_size_sum) / total if total else 0.0
    stats.wall_ms = (time.perf_counter() - t0) * 1000.0
    return LearnResult(graph=graph, stats=stats, blankets=est, plr=plr)
