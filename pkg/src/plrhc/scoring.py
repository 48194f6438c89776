"""Per-variable logistic likelihoods and the extended BIC score.

Blankets of size 0 and 1 use closed forms (the saturated model's fitted
probabilities are the empirical conditionals); larger blankets run damped
Newton-Raphson over configuration-weighted sufficient statistics, one term
per occupied contingency cell instead of one per row.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import xlogy

from .data_model import BinaryDataset, ContingencyTable, count_configurations
from .errors import InvalidDimension

__all__ = [
    "ScoreConfig",
    "BlanketScore",
    "ScoreCache",
    "loglik_empty",
    "fit_logistic",
    "bic_score",
    "score_blanket",
    "logistic_loglik",
    "logistic_gradient",
]


@dataclass(frozen=True)
class ScoreConfig:
    gamma: float = 0.5
    newton_tol: float = 1e-8
    newton_max_iter: int = 50
    beta_cap: float = 15.0

    def __post_init__(self):
        if self.gamma < 0 or self.newton_tol <= 0:
            raise ValueError("gamma must be >= 0 and newton_tol > 0")
        if self.newton_max_iter < 1 or self.beta_cap <= 0:
            raise ValueError("newton_max_iter >= 1 and beta_cap > 0 required")


@dataclass(frozen=True)
class BlanketScore:
    target: int
    blanket: tuple
    beta: np.ndarray
    log_lik: float
    bic: float
    converged: bool


def _clamp(x: float, cap: float) -> float:
    return max(-cap, min(cap, x))


def _logit(p: float, cap: float) -> float:
    if p <= 0.0:
        return -cap
    if p >= 1.0:
        return cap
    return _clamp(math.log(p / (1.0 - p)), cap)


def loglik_empty(data: BinaryDataset, j: int, cfg: ScoreConfig = ScoreConfig()):
    """Intercept-only fit: (beta0, maximized log-likelihood)."""
    n = data.n_rows
    n1 = data.ones_count(j)
    p = n1 / n
    log_lik = float(xlogy(n1, p) + xlogy(n - n1, 1.0 - p))
    return _logit(p, cfg.beta_cap), log_lik


def _design_from_table(table: ContingencyTable):
    """Collapse to per-conditioner-configuration sufficient statistics."""
    k = len(table.conditioners)
    m = 1 << k
    counts = table.counts
    n0 = counts[0::2].astype(np.float64)
    n1 = counts[1::2].astype(np.float64)
    configs = np.arange(m)
    Z = np.empty((m, k + 1))
    Z[:, 0] = 1.0
    for b in range(k):
        Z[:, b + 1] = (configs >> b) & 1
    occupied = (n0 + n1) > 0
    return Z[occupied], n0[occupied], n1[occupied]


def _cell_loglik(eta, n0, n1) -> float:
    # log(mu) = -log(1 + e^-eta), log(1 - mu) = -log(1 + e^eta)
    return float(-(n1 * np.logaddexp(0.0, -eta) + n0 * np.logaddexp(0.0, eta)).sum())


def logistic_loglik(table: ContingencyTable, beta) -> float:
    Z, n0, n1 = _design_from_table(table)
    return _cell_loglik(Z @ np.asarray(beta, dtype=np.float64), n0, n1)


def logistic_gradient(table: ContingencyTable, beta) -> np.ndarray:
    Z, n0, n1 = _design_from_table(table)
    mu = 1.0 / (1.0 + np.exp(-(Z @ np.asarray(beta, dtype=np.float64))))
    return Z.T @ (n1 - (n0 + n1) * mu)


def _fit_closed_size0(table: ContingencyTable, cfg: ScoreConfig):
    n0, n1 = int(table.counts[0]), int(table.counts[1])
    n = n0 + n1
    p = n1 / n
    log_lik = float(xlogy(n1, p) + xlogy(n0, 1.0 - p))
    return np.array([_logit(p, cfg.beta_cap)]), log_lik


def _fit_closed_size1(table: ContingencyTable, cfg: ScoreConfig):
    # cells indexed (x_j, x_partner): bit 0 is x_j, bit 1 the partner
    c = table.counts
    n_b = np.array([c[0] + c[1], c[2] + c[3]], dtype=np.float64)  # per partner value
    n_1b = np.array([c[1], c[3]], dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = np.where(n_b > 0, n_1b / np.where(n_b > 0, n_b, 1.0), 0.5)
    log_lik = float(
        sum(
            xlogy(cnt, cnt / tot)
            for cnt, tot in ((c[0], n_b[0]), (c[1], n_b[0]), (c[2], n_b[1]), (c[3], n_b[1]))
            if tot > 0
        )
    )
    l0 = _logit(float(p[0]), cfg.beta_cap) if n_b[0] > 0 else 0.0
    l1 = _logit(float(p[1]), cfg.beta_cap) if n_b[1] > 0 else 0.0
    beta = np.array([l0, _clamp(l1 - l0, cfg.beta_cap)])
    return beta, log_lik


def _fit_newton(table: ContingencyTable, cfg: ScoreConfig):
    Z, n0, n1 = _design_from_table(table)
    n_tot = n0 + n1
    p = Z.shape[1]
    beta = np.zeros(p)
    log_lik = _cell_loglik(Z @ beta, n0, n1)
    converged = False
    for _ in range(cfg.newton_max_iter):
        eta = Z @ beta
        mu = 1.0 / (1.0 + np.exp(-eta))
        grad = Z.T @ (n1 - n_tot * mu)
        w = n_tot * mu * (1.0 - mu)
        hess = (Z * w[:, None]).T @ Z
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(hess, grad, rcond=None)
        new_beta = np.clip(beta + step, -cfg.beta_cap, cfg.beta_cap)
        new_ll = _cell_loglik(Z @ new_beta, n0, n1)
        halvings = 0
        while new_ll < log_lik and halvings < 20:
            step *= 0.5
            new_beta = np.clip(beta + step, -cfg.beta_cap, cfg.beta_cap)
            new_ll = _cell_loglik(Z @ new_beta, n0, n1)
            halvings += 1
        if new_ll < log_lik:
            break
        delta = new_ll - log_lik
        beta, log_lik = new_beta, new_ll
        if delta < cfg.newton_tol:
            converged = True
            break
    return beta, log_lik, converged


def fit_logistic(
    data: BinaryDataset,
    j: int,
    blanket,
    cfg: ScoreConfig = ScoreConfig(),
    force_newton: bool = False,
) -> BlanketScore:
    """Maximize the conditional logistic log-likelihood of x_j given x_blanket."""
    blanket = tuple(sorted(blanket))
    table = count_configurations(data, j, blanket)
    if force_newton or len(blanket) > 1:
        beta, log_lik, converged = _fit_newton(table, cfg)
    elif len(blanket) == 0:
        beta, log_lik = _fit_closed_size0(table, cfg)
        converged = True
    else:
        beta, log_lik = _fit_closed_size1(table, cfg)
        converged = True
    beta.setflags(write=False)
    return BlanketScore(
        target=j,
        blanket=blanket,
        beta=beta,
        log_lik=log_lik,
        bic=math.nan,
        converged=converged,
    )


def bic_penalty(n_rows: int, n_cols: int, cfg: ScoreConfig) -> float:
    """Penalty charged per free parameter."""
    if n_cols < 2:
        raise InvalidDimension(f"need d >= 2, got {n_cols}")
    return math.log(n_rows) / 2.0 + cfg.gamma * math.log(n_cols - 1)


def bic_score(
    score: BlanketScore, n_rows: int, n_cols: int, cfg: ScoreConfig = ScoreConfig()
) -> BlanketScore:
    dim = len(score.blanket) + 1
    return replace(score, bic=score.log_lik - dim * bic_penalty(n_rows, n_cols, cfg))


@dataclass
class ScoreCache:
    """Memoizes (target, blanket) -> BlanketScore; misses count as iterations."""

    entries: dict = field(default_factory=dict)
    hits: int = 0
    misses: int = 0
    pairwise_misses: int = 0
    blanket_size_sum: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def iterations(self) -> int:
        return self.misses

    def clear(self):
        with self._lock:
            self.entries.clear()

    def snapshot(self):
        with self._lock:
            return self.misses, self.pairwise_misses, self.blanket_size_sum


def score_blanket(
    cache: ScoreCache,
    data: BinaryDataset,
    j: int,
    blanket,
    cfg: ScoreConfig = ScoreConfig(),
) -> BlanketScore:
    key = (j, tuple(sorted(blanket)))
    with cache._lock:
        found = cache.entries.get(key)
        if found is not None:
            cache.hits += 1
            return found
    score = bic_score(fit_logistic(data, j, key[1], cfg), data.n_rows, data.n_cols, cfg)
    with cache._lock:
        # Keys are disjoint across targets, so a concurrent duplicate can
        # only come from the same target and is bit-identical anyway.
        cache.entries[key] = score
        cache.misses += 1
        cache.blanket_size_sum += len(key[1])
        if len(key[1]) == 1:
            cache.pairwise_misses += 1
    return score
