"""Distribution primitives shared by all samplers.

Multivariate normal / Wishart / gamma draws, one-sided truncated normals
(vectorised, inverse-CDF with log-space tail inversion so there are no
rejection loops), a Gibbs sampler for orthant-truncated multivariate
normals, and the gamma-tail calibration solver used for residual-precision
priors. All matrix factorisations go through ``chol_spd``, which retries
once with a small diagonal jitter before giving up.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize, special, stats

__all__ = [
    "NumericError",
    "chol_spd",
    "sample_mvn",
    "sample_wishart",
    "sample_invwishart",
    "sample_gamma",
    "trunc_norm_one_sided",
    "sample_trunc_mvn",
    "solve_lambda",
    "gamma_tail_prob",
]


class NumericError(RuntimeError):
    """A linear-algebra or root-finding step failed beyond recovery."""


def chol_spd(a: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Retries once with ``1e-10 * trace/dim`` added to the diagonal to absorb
    roundoff-degenerate posteriors; raises ``NumericError`` otherwise.
    """
    a = np.asarray(a, dtype=float)
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        jitter = 1e-10 * np.trace(a) / a.shape[0]
        if jitter <= 0:
            raise NumericError("matrix is not positive definite") from None
        try:
            return np.linalg.cholesky(a + jitter * np.eye(a.shape[0]))
        except np.linalg.LinAlgError:
            raise NumericError("matrix is not positive definite") from None


def sample_mvn(mean: np.ndarray, cov: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One draw from N_p(mean, cov)."""
    mean = np.asarray(mean, dtype=float)
    if mean.shape[0] != cov.shape[0]:
        raise ValueError("mean/cov dimension mismatch")
    chol = chol_spd(cov)
    return mean + chol @ rng.standard_normal(mean.shape[0])


def sample_wishart(dof: float, scale: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Wishart draw W_p(dof, scale) via the Bartlett decomposition.

    Requires dof > p - 1; E[W] = dof * scale.
    """
    scale = np.asarray(scale, dtype=float)
    p = scale.shape[0]
    if dof <= p - 1:
        raise ValueError(f"Wishart dof must exceed dim - 1 = {p - 1}, got {dof}")
    a = np.zeros((p, p))
    idx = np.tril_indices(p, -1)
    a[idx] = rng.standard_normal(len(idx[0]))
    a[np.diag_indices(p)] = np.sqrt(rng.chisquare(dof - np.arange(p)))
    m = chol_spd(scale) @ a
    return m @ m.T


def sample_invwishart(dof: float, scale: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Inverse-Wishart draw IW_p(dof, scale): the inverse is W_p(dof, scale^-1)."""
    scale = np.asarray(scale, dtype=float)
    p = scale.shape[0]
    chol = chol_spd(scale)
    scale_inv = np.linalg.inv(chol)
    w = sample_wishart(dof, scale_inv.T @ scale_inv, rng)
    w_chol = chol_spd(w)
    w_inv = np.linalg.inv(w_chol)
    return w_inv.T @ w_inv


def sample_gamma(shape: float, rate: float, rng: np.random.Generator) -> float:
    """Gamma(shape, rate) draw; mean shape/rate."""
    if shape <= 0 or rate <= 0:
        raise ValueError("gamma shape and rate must be positive")
    return float(rng.gamma(shape, 1.0 / rate))


def trunc_norm_one_sided(
    mean: np.ndarray,
    sd: np.ndarray | float,
    sign: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Vectorised draws from N(mean, sd^2) truncated to one side of zero.

    ``sign`` is elementwise +1 for [0, inf) and -1 for (-inf, 0]. The draw
    inverts the normal CDF in log space (``ndtri_exp``), which stays exact
    far into the tails, and is clamped at the boundary so the sign
    constraint holds with zero tolerance.
    """
    mean = np.asarray(mean, dtype=float)
    sd = np.broadcast_to(np.asarray(sd, dtype=float), mean.shape)
    sign = np.asarray(sign)
    if mean.shape != sign.shape:
        raise ValueError("mean/sign shape mismatch")
    flip = sign < 0
    m_eff = np.where(flip, -mean, mean)
    # standardized lower bound for the positive-side problem
    alpha = -m_eff / sd
    u = rng.random(mean.shape)
    log_mass = np.log1p(-u) + special.log_ndtr(-alpha)
    draw = m_eff - sd * special.ndtri_exp(log_mass)
    draw = np.maximum(draw, 0.0)
    return np.where(flip, -draw, draw)


def sample_trunc_mvn(
    mean: np.ndarray,
    cov: np.ndarray,
    signs: np.ndarray,
    rng: np.random.Generator,
    sweeps: int = 10,
    start: np.ndarray | None = None,
) -> np.ndarray:
    """Orthant-truncated multivariate-normal draw by coordinate Gibbs.

    Each coordinate is confined to [0, inf) (sign +1) or (-inf, 0] (sign
    -1). ``sweeps`` full passes of univariate truncated-normal full
    conditionals are run from ``start`` (default: a sign-conforming draw
    from the marginals).
    """
    mean = np.asarray(mean, dtype=float)
    signs = np.asarray(signs)
    p = mean.shape[0]
    if cov.shape != (p, p) or signs.shape[0] != p:
        raise ValueError("dimension mismatch between mean, cov, and signs")
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    chol = chol_spd(cov)
    inv_chol = np.linalg.inv(chol)
    prec = inv_chol.T @ inv_chol
    cond_sd = 1.0 / np.sqrt(np.diag(prec))
    if start is None:
        x = trunc_norm_one_sided(mean, np.sqrt(np.diag(cov)), signs, rng)
    else:
        x = np.array(start, dtype=float)
    for _ in range(sweeps):
        for j in range(p):
            delta = x - mean
            delta[j] = 0.0
            cond_mean = mean[j] - cond_sd[j] ** 2 * (prec[j] @ delta)
            x[j] = trunc_norm_one_sided(
                np.array([cond_mean]), cond_sd[j], signs[j : j + 1], rng
            )[0]
    return x


def gamma_tail_prob(tau_hat: float, nu: float, lam: float) -> float:
    """P(tau > tau_hat) for tau ~ Gamma(nu/2, rate nu*lam/2)."""
    return float(stats.gamma.sf(tau_hat, a=nu / 2.0, scale=2.0 / (nu * lam)))


def solve_lambda(nu: float, rho: float, tau_hat: float) -> float:
    """Rate calibration for the residual-precision prior.

    Returns lam such that a Gamma(nu/2, rate nu*lam/2) variable exceeds
    ``tau_hat`` with probability ``rho``, by bracketed root-finding.
    """
    if nu <= 0 or tau_hat <= 0 or not 0 < rho < 1:
        raise ValueError("need nu > 0, tau_hat > 0, and rho in (0, 1)")

    def objective(lam: float) -> float:
        return gamma_tail_prob(tau_hat, nu, lam) - rho

    lo = hi = 1.0 / tau_hat
    for _ in range(200):
        if objective(lo) > 0:
            break
        lo /= 4.0
    else:
        raise NumericError("could not bracket lambda from below")
    for _ in range(200):
        if objective(hi) < 0:
            break
        hi *= 4.0
    else:
        raise NumericError("could not bracket lambda from above")
    return float(optimize.brentq(objective, lo, hi, rtol=1e-12, maxiter=200))
