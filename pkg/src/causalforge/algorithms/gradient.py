"""Gradient-based structure learning: NOTEARS and GOLEM.

Both methods search over dense weighted adjacency matrices with the smooth
acyclicity measure h(W) = tr(e^{W o W}) - d; NOTEARS drives h to zero with an
augmented Lagrangian, GOLEM penalizes it softly inside a likelihood. A shared
threshold-and-repair step turns either output into a DAG.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..exceptions import InvalidConfig, NumericError, PriorConflict
from ..graphs import find_cycle, support
from ..numerics import acyclicity_h, minimize_bounded

_VAR_FLOOR = 1e-12
# inner quasi-Newton budget; hard benchmark instances need far more than
# the minimizer's 500-iteration default before the dual update
_INNER_MAXITER = 5000


@dataclass
class NotearsConfig:
    lambda1: float = 0.1
    h_tol: float = 1e-8
    rho_max: float = 1e16
    max_dual_iters: int = 100
    omega: float = 0.3

    def validate(self):
        vals = (self.lambda1, self.h_tol, self.rho_max, self.max_dual_iters, self.omega)
        if any(v <= 0 for v in vals):
            raise InvalidConfig("all NOTEARS settings must be positive")
        return self


@dataclass
class GolemConfig:
    lambda1: float = 2e-2
    lambda2: float = 5.0
    equal_variance: bool = True
    iterations: int = 10000
    learning_rate: float = 1e-3
    omega: float = 0.3

    def validate(self):
        vals = (self.lambda1, self.lambda2, self.iterations, self.learning_rate, self.omega)
        if any(v <= 0 for v in vals):
            raise InvalidConfig("all GOLEM settings must be positive")
        return self


@dataclass
class GradientFit:
    """Pre-threshold solver output with its convergence record."""

    W: np.ndarray
    converged: bool
    trace: list = field(default_factory=list)


def _center(X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InvalidConfig("data must be an n x d matrix with n >= 2")
    return X - X.mean(axis=0)


def notears_objective(X, W, lambda1=0.0, rho=0.0, alpha=0.0):
    """Augmented-Lagrangian objective and (sub)gradient at W.

    (1/2n)||X - XW||_F^2 + lambda1*||W||_1 + (rho/2)h^2 + alpha*h, with the
    L1 subgradient at zero taken as 0.
    """
    n = X.shape[0]
    R = X - X @ W
    loss = 0.5 / n * float((R * R).sum())
    g_loss = -(X.T @ R) / n
    ac = acyclicity_h(W)
    value = loss + 0.5 * rho * ac.value**2 + alpha * ac.value + lambda1 * float(np.abs(W).sum())
    grad = g_loss + (rho * ac.value + alpha) * ac.gradient + lambda1 * np.sign(W)
    return value, grad


def notears_linear(X, cfg: NotearsConfig = None, support_mask=None, trace=None) -> GradientFit:
    """NOTEARS with the doubled non-negative variable split W = W+ - W-.

    support_mask, when given, pins entries outside the mask to zero. A caller
    may pass its own trace list to watch progress while the solve runs.
    Returns the dense pre-threshold W; converged is False when the penalty
    cap was hit before h dropped below h_tol.
    """
    cfg = (cfg or NotearsConfig()).validate()
    X = _center(X)
    n, d = X.shape

    allowed = np.ones((d, d), dtype=bool)
    if support_mask is not None:
        allowed &= np.asarray(support_mask, dtype=bool)
    np.fill_diagonal(allowed, False)
    bounds = [
        (0.0, 0.0) if not allowed[i, j] else (0.0, None)
        for _ in range(2)
        for i in range(d)
        for j in range(d)
    ]

    def unpack(w):
        return (w[: d * d] - w[d * d :]).reshape(d, d)

    def make_func(rho, alpha):
        def func(w):
            W = unpack(w)
            R = X - X @ W
            loss = 0.5 / n * float((R * R).sum())
            g_loss = -(X.T @ R) / n
            ac = acyclicity_h(W)
            value = (
                loss
                + 0.5 * rho * ac.value**2
                + alpha * ac.value
                + cfg.lambda1 * float(w.sum())
            )
            g_smooth = g_loss + (rho * ac.value + alpha) * ac.gradient
            grad = np.concatenate(
                (g_smooth.ravel() + cfg.lambda1, -g_smooth.ravel() + cfg.lambda1)
            )
            return value, grad

        return func

    w_est = np.zeros(2 * d * d)
    rho, alpha, h = 1.0, 0.0, np.inf
    converged = False
    trace = [] if trace is None else trace
    for it in range(cfg.max_dual_iters):
        while True:
            w_new, obj = minimize_bounded(
                make_func(rho, alpha), w_est, bounds=bounds, maxiter=_INNER_MAXITER
            )
            h_new = acyclicity_h(unpack(w_new)).value
            trace.append({"iteration": it, "objective": obj, "h": h_new, "rho": rho})
            if h_new > 0.25 * h and rho < cfg.rho_max:
                rho *= 10.0
                continue
            break
        w_est, h = w_new, h_new
        alpha += rho * h
        if h <= cfg.h_tol:
            converged = True
            break
        if rho >= cfg.rho_max:
            break
    return GradientFit(W=unpack(w_est), converged=converged, trace=trace)


def golem_objective(X, W, cfg: GolemConfig = None):
    """GOLEM objective and (sub)gradient at W: L + lambda1*||W||_1 + lambda2*h."""
    cfg = (cfg or GolemConfig()).validate()
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    W = np.asarray(W, dtype=float)
    R = X - X @ W
    I = np.eye(d)
    sign, logabsdet = np.linalg.slogdet(I - W)
    if sign <= 0:
        raise NumericError("det(I - W) is not positive")
    if cfg.equal_variance:
        total = max(float((R * R).sum()), _VAR_FLOOR)
        likelihood = 0.5 * d * np.log(total) - logabsdet
        g_lik = -d * (X.T @ R) / total + np.linalg.inv(I - W).T
    else:
        per_col = np.maximum((R * R).sum(axis=0), _VAR_FLOOR)
        likelihood = 0.5 * float(np.log(per_col).sum()) - logabsdet
        g_lik = -(X.T @ R) / per_col + np.linalg.inv(I - W).T
    ac = acyclicity_h(W)
    value = likelihood + cfg.lambda1 * float(np.abs(W).sum()) + cfg.lambda2 * ac.value
    grad = g_lik + cfg.lambda1 * np.sign(W) + cfg.lambda2 * ac.gradient
    return float(value), grad


def golem(X, cfg: GolemConfig = None, support_mask=None, trace=None) -> GradientFit:
    """Likelihood-based search by plain gradient descent with a fixed step.

    A step that makes det(I - W) nonpositive is rejected and the learning
    rate halved, up to 20 times across the run, before NumericError. A caller
    may pass its own trace list to watch progress while the solve runs.
    """
    cfg = (cfg or GolemConfig()).validate()
    X = _center(X)
    n, d = X.shape

    allowed = np.ones((d, d), dtype=bool)
    if support_mask is not None:
        allowed &= np.asarray(support_mask, dtype=bool)
    np.fill_diagonal(allowed, False)

    W = np.zeros((d, d))
    lr = cfg.learning_rate
    halvings = 0
    trace = [] if trace is None else trace
    value, grad = golem_objective(X, W, cfg)
    for it in range(cfg.iterations):
        step = W - lr * grad
        step[~allowed] = 0.0
        if np.linalg.slogdet(np.eye(d) - step)[0] <= 0:
            halvings += 1
            if halvings > 20:
                raise NumericError("step rejected 20 times; det(I - W) stays nonpositive")
            lr *= 0.5
            continue
        W = step
        value, grad = golem_objective(X, W, cfg)
        if it % 500 == 0 or it == cfg.iterations - 1:
            trace.append(
                {
                    "iteration": it,
                    "objective": value,
                    "h": acyclicity_h(W).value,
                    "lr": lr,
                }
            )
    return GradientFit(W=W, converged=True, trace=trace)


def threshold_and_repair(W, omega, protected=frozenset()):
    """Zero |weights| below omega, then break remaining cycles.

    Cycle repair deletes the smallest-|weight| edge on some cycle, never one
    listed in protected; ties break on the lexicographically smallest (i, j).
    Returns the binary support of the repaired graph, always a DAG.
    """
    if omega < 0:
        raise InvalidConfig("omega must be >= 0")
    Wt = np.array(W, dtype=float, copy=True)
    Wt[np.abs(Wt) < omega] = 0.0
    while True:
        cyc = find_cycle(Wt)
        if cyc is None:
            break
        victims = [e for e in cyc if tuple(e) not in protected]
        if not victims:
            raise PriorConflict("cycle consists entirely of protected edges")
        i, j = min(victims, key=lambda e: (abs(Wt[e[0], e[1]]), e[0], e[1]))
        Wt[i, j] = 0.0
    return support(Wt)
