"""Distance inversion and an exact (non-approximated) t-SNE embedder.

The embedder takes a precomputed distance matrix: per-row Gaussian
bandwidths are found by binary search against the perplexity target, the
joint probabilities are symmetrized, and gradient descent with early
exaggeration, momentum and adaptive gains minimizes the KL divergence to
the Student-t low-dimensional kernel. Everything is plain numpy, so a fixed
seed gives a bitwise-reproducible embedding on one platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diffusion import PairwiseMatrix


@dataclass
class Embedding:
    """2-D point per sampled paper, plus the configuration that made it."""

    ids: list
    points: np.ndarray
    config: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.ids)


def similarity_to_distance(s: PairwiseMatrix, eps: float = 1e-5) -> PairwiseMatrix:
    """Invert similarities into unbounded distances: D = 1/(eps+S) - 1/(eps+1).

    Strictly decreasing in S, maps S=1 to D=0, and the small eps keeps S=0
    finite. The diagonal is forced to exactly 0.
    """
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    vals = s.values
    if vals.min() < 0.0 or vals.max() > 1.0:
        raise ValueError("similarity values outside [0, 1]")
    d = 1.0 / (eps + vals) - 1.0 / (eps + 1.0)
    np.fill_diagonal(d, 0.0)
    np.clip(d, 0.0, None, out=d)
    return PairwiseMatrix(ids=list(s.ids), values=d, kind="distance")


def _entropy_row(d2_row, beta):
    p = np.exp(-d2_row * beta)
    total = p.sum()
    if total <= 0.0 or not np.isfinite(total):
        return np.zeros_like(p), -np.inf
    p /= total
    # H = -sum p log p, rewritten to reuse the exponent
    h = math.log(total) + beta * float((d2_row * p).sum())
    return p, h


def conditional_probabilities(d, perplexity, tol=1e-7, max_iter=200):
    """Per-row conditional P and bandwidths matching the perplexity target.

    ``d`` is a (non-squared) distance matrix; rows are searched over the
    Gaussian precision so that exp(entropy) equals the perplexity. Returns
    (P, beta) where P rows sum to 1 and the diagonal is zero.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    if not np.all(np.isfinite(d)):
        raise ValueError("distance matrix contains non-finite values")
    if not 1.0 < perplexity < n:
        raise ValueError(f"perplexity must be in (1, n={n}), got {perplexity}")
    target = math.log(perplexity)
    d2 = d * d
    p_cond = np.zeros((n, n))
    betas = np.ones(n)
    others = np.arange(n)
    for i in range(n):
        row = d2[i, others != i]
        beta, beta_lo, beta_hi = 1.0, 0.0, np.inf
        p, h = _entropy_row(row, beta)
        for _ in range(max_iter):
            if abs(h - target) < tol:
                break
            if h > target:  # too flat: raise precision
                beta_lo = beta
                beta = beta * 2.0 if beta_hi == np.inf else (beta + beta_hi) / 2.0
            else:
                beta_hi = beta
                beta = beta / 2.0 if beta_lo == 0.0 else (beta + beta_lo) / 2.0
            p, h = _entropy_row(row, beta)
        p_cond[i, others != i] = p
        betas[i] = beta
    return p_cond, betas


def joint_probabilities(d, perplexity):
    """Symmetrized joint P matrix, floored at 1e-12 and renormalized.

    Renormalizing after the floor keeps the total mass at exactly 1, which
    in turn keeps the analytic KL gradient exact.
    """
    p_cond, _ = conditional_probabilities(d, perplexity)
    p = (p_cond + p_cond.T) / (2.0 * d.shape[0])
    p = np.maximum(p, 1e-12)
    np.fill_diagonal(p, 0.0)
    return p / p.sum()


def _student_t(y):
    sq = (y * y).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (y @ y.T)
    num = 1.0 / (1.0 + np.maximum(d2, 0.0))
    np.fill_diagonal(num, 0.0)
    return num


def kl_grad(p, y):
    """KL divergence of the embedding and its analytic gradient.

    The gradient is 4 * sum_j (p_ij - q_ij) (y_i - y_j) / (1 + |y_i - y_j|^2),
    exact for the returned objective, which makes it checkable against
    finite differences.
    """
    num = _student_t(y)
    denom = num.sum()
    q = num / denom
    mask = num > 0
    kl = float(np.sum(np.where(mask & (p > 0), p * np.log(np.where(mask, p / np.maximum(q, 1e-300), 1.0)), 0.0)))
    pq = (p - q) * num
    grad = 4.0 * ((np.diag(pq.sum(axis=1)) - pq) @ y)
    return kl, grad


def tsne_embed(
    d: PairwiseMatrix,
    perplexity: float = 30.0,
    iterations: int = 1000,
    seed: int = 0,
    learning_rate: float | None = None,
    early_exaggeration: float = 12.0,
    exaggeration_iters: int = 250,
    momentum_early: float = 0.5,
    momentum_late: float = 0.8,
    init_scale: float = 1e-4,
    min_gain: float = 0.01,
    verbose: bool = False,
) -> Embedding:
    """Embed a precomputed distance matrix into 2-D with exact t-SNE.

    Defaults follow common practice for the reference implementation of the
    algorithm: 12x early exaggeration for the first 250 iterations, momentum
    0.5 then 0.8, learning rate n/12 with a floor of 50, and a seeded
    Gaussian init of scale 1e-4. Reports the final KL divergence in
    ``config["kl"]``.
    """
    vals = np.asarray(d.values, dtype=np.float64)
    n = vals.shape[0]
    p = joint_probabilities(vals, perplexity)
    if learning_rate is None:
        learning_rate = max(n / 12.0, 50.0)
    rng = np.random.default_rng(seed)
    y = rng.normal(0.0, init_scale, size=(n, 2))
    update = np.zeros_like(y)
    gains = np.ones_like(y)
    p_eff = p * early_exaggeration
    for it in range(iterations):
        if it == exaggeration_iters:
            p_eff = p
        _, grad = kl_grad(p_eff, y)
        mom = momentum_early if it < exaggeration_iters else momentum_late
        flip = (grad > 0.0) != (update > 0.0)
        gains = np.where(flip, gains + 0.2, gains * 0.8)
        np.maximum(gains, min_gain, out=gains)
        update = mom * update - learning_rate * gains * grad
        y = y + update
        y = y - y.mean(axis=0)
        if verbose and (it + 1) % 100 == 0:
            kl, _ = kl_grad(p, y)
            print(f"t-SNE iteration {it + 1}: KL = {kl:.6f}")
    kl, _ = kl_grad(p, y)
    return Embedding(
        ids=list(d.ids),
        points=y,
        config={
            "perplexity": perplexity,
            "iterations": iterations,
            "seed": seed,
            "learning_rate": learning_rate,
            "kl": kl,
        },
    )
