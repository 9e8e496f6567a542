"""Multivariate sum-of-trees data model: scaling, priors, precision update.

The responses are mapped column-wise onto [-0.5, 0.5] using observed
minima/maxima (imputed values may leave that range and are not clipped).
The leaf-vector precision tau_mu and the Wishart prior on the residual
precision are calibrated from the scaled data; the residual precision has
a conjugate Wishart update.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .kernels import sample_wishart, solve_lambda
from .trees import Forest, NodePriorParams

__all__ = [
    "ResponseScaler",
    "OmegaPrior",
    "DataModelState",
    "calibrate_tau_mu",
    "calibrate_priors",
    "update_omega",
    "predict",
]


class ResponseScaler:
    """Column-wise affine map of observed response ranges onto [-0.5, 0.5]."""

    def __init__(self, y: np.ndarray):
        y = np.asarray(y, dtype=float)
        self.lo = np.nanmin(y, axis=0)
        self.hi = np.nanmax(y, axis=0)
        if np.any(~np.isfinite(self.lo)) or np.any(self.hi <= self.lo):
            raise ValueError("each response column needs >= 2 distinct observed values")

    def scale(self, y: np.ndarray) -> np.ndarray:
        return (np.asarray(y, dtype=float) - self.lo) / (self.hi - self.lo) - 0.5

    def unscale(self, y_scaled: np.ndarray) -> np.ndarray:
        return (np.asarray(y_scaled, dtype=float) + 0.5) * (self.hi - self.lo) + self.lo

    def scale_width(self) -> np.ndarray:
        return self.hi - self.lo


@dataclass
class OmegaPrior:
    """Wishart prior W_p(nu, V) on the residual precision, tail-calibrated."""

    nu: float
    v: np.ndarray
    rho_tau: np.ndarray
    tau_hat: np.ndarray
    lam: np.ndarray

    def __post_init__(self) -> None:
        p = self.v.shape[0]
        if self.nu <= p - 1:
            raise ValueError("Wishart dof must exceed p - 1")
        self.v_inv = np.diag(self.nu * self.lam)


@dataclass
class DataModelState:
    """Forest + residual precision + cached training fit of one chain."""

    forest: Forest
    omega: np.ndarray
    fitted: np.ndarray  # n x p, sum of routed leaf vectors on the scaled scale


def calibrate_tau_mu(n_trees: int, rho_mu: float = 0.95, signal_range: float = 1.0) -> float:
    """Leaf precision putting prior mass rho_mu of the K-tree sum inside
    a centred interval of width ``signal_range``."""
    k = special.ndtri((1.0 + rho_mu) / 2.0)
    return 4.0 * n_trees * k * k / (signal_range**2)


def _column_precision_estimate(y_col: np.ndarray, x: np.ndarray) -> float:
    """Rough residual-precision underestimate for one scaled response column.

    Least squares of the observed values on the (mean-imputed) covariates;
    falls back to the sample precision when the regression is degenerate.
    """
    obs = ~np.isnan(y_col)
    yo = y_col[obs]
    if yo.size < 2:
        raise ValueError("response column has fewer than 2 observed values")
    fallback = 1.0 / max(np.var(yo, ddof=1), 1e-12)
    xo = np.asarray(x, dtype=float)[obs]
    col_means = np.nanmean(xo, axis=0)
    col_means = np.where(np.isfinite(col_means), col_means, 0.0)
    xo = np.where(np.isnan(xo), col_means, xo)
    design = np.column_stack([np.ones(xo.shape[0]), xo])
    if yo.size <= design.shape[1]:
        return fallback
    coef, _, rank, _ = np.linalg.lstsq(design, yo, rcond=None)
    if rank < design.shape[1]:
        return fallback
    resid = yo - design @ coef
    dof = yo.size - design.shape[1]
    var = float(resid @ resid) / dof
    if var <= 1e-12:
        return fallback
    return 1.0 / var


def calibrate_priors(
    y_scaled: np.ndarray,
    x: np.ndarray,
    n_trees: int,
    nu: float = 3.0,
    rho_tau: float | np.ndarray = 0.9,
    rho_mu: float = 0.95,
) -> tuple[NodePriorParams, OmegaPrior]:
    """Node prior and residual-precision prior from scaled training data."""
    p = y_scaled.shape[1]
    rho_tau = np.broadcast_to(np.asarray(rho_tau, dtype=float), (p,)).copy()
    tau_mu = calibrate_tau_mu(n_trees, rho_mu)
    node_prior = NodePriorParams(tau_mu=tau_mu, mu0=np.zeros(p))
    tau_hat = np.array([_column_precision_estimate(y_scaled[:, j], x) for j in range(p)])
    lam = np.array([solve_lambda(nu, rho_tau[j], tau_hat[j]) for j in range(p)])
    v = np.diag(1.0 / (nu * lam))
    return node_prior, OmegaPrior(nu=nu, v=v, rho_tau=rho_tau, tau_hat=tau_hat, lam=lam)


def update_omega(
    y_scaled_full: np.ndarray,
    fitted: np.ndarray,
    prior: OmegaPrior,
    rng: np.random.Generator,
) -> np.ndarray:
    """Conjugate Wishart draw of the residual precision.

    ``y_scaled_full`` must have every cell filled in (observed or imputed).
    """
    resid = y_scaled_full - fitted
    n = resid.shape[0]
    scale_inv = resid.T @ resid + prior.v_inv
    scale = np.linalg.inv(scale_inv)
    scale = 0.5 * (scale + scale.T)
    return sample_wishart(n + prior.nu, scale, rng)


def predict(
    state: DataModelState,
    x_new: np.ndarray,
    scaler: ResponseScaler | None = None,
) -> np.ndarray:
    """Per-row forest prediction; inverse-scaled when a scaler is given."""
    out = state.forest.predict(np.asarray(x_new, dtype=float))
    if scaler is not None:
        out = scaler.unscale(out)
    return out
