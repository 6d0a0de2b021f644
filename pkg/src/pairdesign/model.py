"""Pairwise-comparison generative model, MAP fitting, AUC, and baselines.

Labels follow a logistic model on linear scores: an absolute label for
sample i is positive with probability sigmoid(beta . x_i), and a comparison
(i, j) favors i with probability sigmoid(beta . (x_i - x_j)). MAP estimation
of beta is L2-regularized logistic regression over the stacked absolute and
difference covariates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, xlogy
from scipy.stats import rankdata

from .design import Pair, comparison_feature
from .errors import DegenerateLabelSet, InstanceTooLarge

_FISHER_POOL_LIMIT = 10_000


@dataclass
class ModelParams:
    beta: np.ndarray
    lam: float


@dataclass
class LabeledData:
    """Observed labels: (index, label) for absolute, (pair, label) for comparisons."""

    absolute: list[tuple[int, int]] = field(default_factory=list)
    comparisons: list[tuple[Pair, int]] = field(default_factory=list)


@dataclass
class FitResult:
    params: ModelParams
    final_loss: float
    grad_norm: float
    iterations: int
    converged: bool


class LabelSampler:
    """Draws labels from the generative model for a fixed feature matrix.

    Absolute labels use beta_true / c_a (noisier); comparison labels use
    beta_true directly. Draws consume the sampler's own rng stream, so a
    fixed seed and call order reproduce the dataset exactly.
    """

    def __init__(self, x: np.ndarray, beta_true: np.ndarray, c_a: float, rng: np.random.Generator):
        self.x = x
        self.beta_true = beta_true
        self.c_a = c_a
        self._rng = rng

    def absolute_probabilities(self, indices) -> np.ndarray:
        idx = np.asarray(list(indices), dtype=np.intp)
        return expit(self.x[idx] @ (self.beta_true / self.c_a))

    def comparison_probabilities(self, pairs) -> np.ndarray:
        diffs = np.array([comparison_feature(self.x, e) for e in pairs])
        return expit(diffs @ self.beta_true)

    def absolute_labels(self, indices) -> list[tuple[int, int]]:
        indices = list(indices)
        p = self.absolute_probabilities(indices)
        draws = self._rng.random(len(indices)) < p
        return [(i, 1 if hit else -1) for i, hit in zip(indices, draws)]

    def comparison_labels(self, pairs) -> list[tuple[Pair, int]]:
        pairs = list(pairs)
        if not pairs:
            return []
        p = self.comparison_probabilities(pairs)
        draws = self._rng.random(len(pairs)) < p
        return [(e, 1 if hit else -1) for e, hit in zip(pairs, draws)]


def sample_synthetic(
    n: int,
    d: int,
    sigma_x: float = 1.0,
    sigma_beta: float = 1.0,
    c_a: float = 1.2,
    seed: int | tuple = 0,
) -> tuple[np.ndarray, np.ndarray, LabelSampler]:
    """Gaussian features and parameter vector, plus a label sampler."""
    if min(sigma_x, sigma_beta, c_a) <= 0:
        raise ValueError("scale parameters must be positive")
    rng = np.random.default_rng(seed)
    x = rng.normal(0.0, sigma_x, size=(n, d))
    beta_true = rng.normal(0.0, sigma_beta, size=d)
    return x, beta_true, LabelSampler(x, beta_true, c_a, rng)


def _signed_covariates(x: np.ndarray, data: LabeledData) -> np.ndarray:
    """Rows y * x_i and y * (x_i - x_j); the loss only sees these."""
    rows = [y * x[i] for i, y in data.absolute]
    rows += [y * comparison_feature(x, e) for e, y in data.comparisons]
    if not rows:
        return np.empty((0, x.shape[1]))
    return np.array(rows)


def _loss_and_grad(beta: np.ndarray, signed: np.ndarray, lam: float):
    margins = signed @ beta
    loss = lam * float(beta @ beta) + float(np.sum(np.logaddexp(0.0, -margins)))
    grad = 2.0 * lam * beta - signed.T @ expit(-margins)
    return loss, grad


def nll_loss(params: ModelParams, x: np.ndarray, data: LabeledData) -> float:
    """Regularized negative log-likelihood of the observed labels."""
    signed = _signed_covariates(x, data)
    loss, _ = _loss_and_grad(params.beta, signed, params.lam)
    return loss


def nll_gradient(params: ModelParams, x: np.ndarray, data: LabeledData) -> np.ndarray:
    """Analytic gradient of nll_loss with respect to beta."""
    signed = _signed_covariates(x, data)
    _, grad = _loss_and_grad(params.beta, signed, params.lam)
    return grad


def map_fit(
    x: np.ndarray,
    data: LabeledData,
    lam: float,
    tol: float = 1e-8,
    max_iter: int = 5000,
) -> FitResult:
    """Deterministic gradient descent with backtracking line search.

    The loss is strictly convex for lam > 0, so the minimizer is unique;
    convergence is declared on the gradient norm.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    signed = _signed_covariates(x, data)
    beta = np.zeros(x.shape[1])
    loss, grad = _loss_and_grad(beta, signed, lam)
    step = 1.0
    iterations = 0
    grad_norm = float(np.linalg.norm(grad))
    while iterations < max_iter and grad_norm > tol:
        # Armijo backtracking; the step carries over and is allowed to grow.
        while True:
            cand = beta - step * grad
            cand_loss, cand_grad = _loss_and_grad(cand, signed, lam)
            if cand_loss <= loss - 1e-4 * step * grad_norm**2 or step < 1e-20:
                break
            step *= 0.5
        beta, loss, grad = cand, cand_loss, cand_grad
        grad_norm = float(np.linalg.norm(grad))
        step *= 2.0
        iterations += 1
    return FitResult(
        params=ModelParams(beta=beta, lam=lam),
        final_loss=loss,
        grad_norm=grad_norm,
        iterations=iterations,
        converged=grad_norm <= tol,
    )


def auc(scores, labels) -> float:
    """Mann-Whitney AUC with half credit for tied scores."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = labels == 1
    neg = labels == -1
    n_pos = int(pos.sum())
    n_neg = int(neg.sum())
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabelSet("need at least one positive and one negative label")
    ranks = rankdata(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def entropy_select(x: np.ndarray, beta_hat: np.ndarray, k: int, pool: list[Pair]) -> list[Pair]:
    """Top-k pairs by Bernoulli label entropy under the fitted model.

    The entropy objective is modular, so the greedy optimum is an exact
    top-k sort; ties resolve to lexicographically smaller pairs.
    """
    pool = sorted(pool)
    arr = np.asarray(pool, dtype=np.intp)
    p = expit((x[arr[:, 0]] - x[arr[:, 1]]) @ beta_hat)
    entropy = -(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p))
    order = np.lexsort((arr[:, 1], arr[:, 0], -entropy))
    return [pool[i] for i in order[:k]]


def fisher_information_objective(
    x: np.ndarray,
    beta_hat: np.ndarray,
    selected: list[Pair],
    pool: list[Pair],
    ridge: float = 1e-6,
) -> float:
    """-trace(I_q(S)^-1 I_p) for the pool-wide and selected Fisher matrices."""
    d = x.shape[1]
    i_p = _fisher_matrix(x, beta_hat, pool, ridge)
    if selected:
        i_q = _fisher_matrix(x, beta_hat, selected, ridge)
    else:
        i_q = ridge * np.eye(d)
    return -float(np.trace(np.linalg.solve(i_q, i_p)))


def _fisher_matrix(x, beta_hat, pairs, ridge):
    arr = np.asarray(list(pairs), dtype=np.intp)
    diffs = x[arr[:, 0]] - x[arr[:, 1]]
    p = expit(diffs @ beta_hat)
    w = p * (1.0 - p)
    return (diffs * w[:, None]).T @ diffs / len(pairs) + ridge * np.eye(x.shape[1])


def fisher_select(
    x: np.ndarray,
    beta_hat: np.ndarray,
    k: int,
    pool: list[Pair],
    ridge: float = 1e-6,
) -> list[Pair]:
    """Greedy maximization of the Fisher information trace objective."""
    pool = sorted(pool)
    if len(pool) > _FISHER_POOL_LIMIT:
        raise InstanceTooLarge(f"fisher pool {len(pool)} exceeds {_FISHER_POOL_LIMIT}")
    d = x.shape[1]
    arr = np.asarray(pool, dtype=np.intp)
    diffs = x[arr[:, 0]] - x[arr[:, 1]]
    p = expit(diffs @ beta_hat)
    w = p * (1.0 - p)
    i_p = _fisher_matrix(x, beta_hat, pool, ridge)
    eye = ridge * np.eye(d)
    accum = np.zeros((d, d))
    chosen: list[int] = []
    for _ in range(k):
        best_idx = -1
        best_val = -np.inf
        for idx in range(len(pool)):
            if idx in chosen:
                continue
            m = (accum + w[idx] * np.outer(diffs[idx], diffs[idx])) / (len(chosen) + 1) + eye
            val = -float(np.trace(np.linalg.solve(m, i_p)))
            if val > best_val:
                best_val = val
                best_idx = idx
        chosen.append(best_idx)
        accum += w[best_idx] * np.outer(diffs[best_idx], diffs[best_idx])
    return [pool[i] for i in chosen]


def random_select(pool: list[Pair], k: int, seed: int | tuple) -> list[Pair]:
    """Uniform sample without replacement, deterministic per seed."""
    pool = sorted(pool)
    if k > len(pool):
        raise ValueError(f"k={k} exceeds pool of {len(pool)}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(pool), size=k, replace=False)
    return [pool[i] for i in sorted(idx)]
