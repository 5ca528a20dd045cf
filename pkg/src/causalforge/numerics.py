"""Shared numerical primitives.

Conventions used throughout the package: data columns are assumed zero-mean
(no intercepts anywhere), and covariances and residual variances use the 1/n
normalization.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as slin
import scipy.optimize as sopt

from .exceptions import (
    InsufficientSamples,
    NumericError,
    SingularCovariance,
    SingularDesign,
)


def matrix_exponential(A):
    """e^A by scaling-and-squaring with Pade approximation (scipy backend)."""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix_exponential requires finite entries")
    with np.errstate(over="ignore", invalid="ignore"):
        E = slin.expm(A)
    if not np.all(np.isfinite(E)):
        raise NumericError("matrix exponential overflowed")
    return E


@dataclass
class AcyclicityResult:
    value: float
    gradient: np.ndarray


def acyclicity_h(W) -> AcyclicityResult:
    """Smooth acyclicity measure h(W) = tr(e^{W o W}) - d and its gradient.

    h is zero exactly when the support of W is acyclic; the gradient is
    (e^{W o W})^T o 2W.
    """
    W = np.asarray(W, dtype=float)
    E = matrix_exponential(W * W)
    h = float(np.trace(E)) - W.shape[0]
    if not math.isfinite(h):
        raise NumericError("acyclicity value overflowed")
    return AcyclicityResult(value=h, gradient=E.T * W * 2.0)


def sample_covariance(X):
    """Covariance of centered data with 1/n normalization."""
    X = np.asarray(X, dtype=float)
    Xc = X - X.mean(axis=0, keepdims=True)
    return Xc.T @ Xc / X.shape[0]


def partial_correlation(cov, i, j, S=()):
    """Correlation of variables i and j given the index set S.

    Computed from the inverse of the covariance submatrix on {i, j} | S.
    """
    cov = np.asarray(cov, dtype=float)
    idx = [i, j] + [s for s in S]
    sub = cov[np.ix_(idx, idx)]
    try:
        prec = np.linalg.inv(sub)
    except np.linalg.LinAlgError as e:
        raise SingularCovariance(f"singular covariance submatrix on {idx}") from e
    denom = prec[0, 0] * prec[1, 1]
    if denom <= 0:
        raise SingularCovariance("covariance submatrix is not positive definite")
    r = -prec[0, 1] / math.sqrt(denom)
    return float(np.clip(r, -1.0, 1.0))


@dataclass
class CiTestResult:
    statistic: float
    p_value: float
    independent: bool


def fisher_z_test(r, n, cond_size, alpha=0.05) -> CiTestResult:
    """Fisher-z conditional independence test from a partial correlation.

    statistic = sqrt(n - |S| - 3) * |arctanh(r)|, p-value from the standard
    normal tail via erfc.
    """
    df = n - cond_size - 3
    if df < 1:
        raise InsufficientSamples(f"need n - |S| - 3 >= 1, got {df}")
    r = float(np.clip(r, -0.9999999, 0.9999999))
    stat = math.sqrt(df) * abs(math.atanh(r))
    p = math.erfc(stat / math.sqrt(2.0))
    return CiTestResult(statistic=stat, p_value=p, independent=p > alpha)


def least_squares(X, y):
    """Minimize ||y - X b||^2 with no intercept.

    Returns (coefficients, residual_variance) where residual_variance is
    RSS/n. An empty design (k = 0) yields mean(y^2).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if X.ndim == 1:
        X = X[:, None]
    k = X.shape[1]
    if k == 0:
        return np.zeros(0), float(y @ y / n)
    if n <= k:
        raise SingularDesign(f"need n > k, got n={n}, k={k}")
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < k:
        raise SingularDesign(f"design has rank {rank} < {k}")
    resid = y - X @ beta
    return beta, float(resid @ resid / n)


class _AbortSolve(Exception):
    pass


def minimize_bounded(func, x0, bounds=None, gtol=1e-6, maxiter=500):
    """Bounded quasi-Newton minimization (L-BFGS-B backend).

    func maps x to (value, gradient). Iterates until the projected-gradient
    norm drops below gtol or maxiter iterations. Guarantees f(x*) <= f(x0).
    Raises NumericError carrying the last finite iterate if func returns a
    non-finite value or gradient.
    """
    x0 = np.asarray(x0, dtype=float)
    last = {"x": x0.copy()}

    def wrapped(x):
        f, g = func(x)
        g = np.asarray(g, dtype=float)
        if not (math.isfinite(f) and np.all(np.isfinite(g))):
            raise _AbortSolve
        last["x"] = x.copy()
        return f, g

    try:
        f0, _ = wrapped(x0)
    except _AbortSolve:
        raise NumericError("objective non-finite at starting point", last_x=x0)
    try:
        sol = sopt.minimize(
            wrapped,
            x0,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"gtol": gtol, "maxiter": maxiter, "ftol": 1e-14},
        )
    except _AbortSolve:
        raise NumericError(
            "objective returned non-finite values during optimization",
            last_x=last["x"],
        )
    if sol.fun <= f0:
        return sol.x, float(sol.fun)
    return x0, float(f0)
