"""Classical minimizers for the variational loop.

The four methods are thin wrappers over :func:`scipy.optimize.minimize`
(COBYLA, Powell, BFGS, SLSQP). Every objective call goes through
:class:`Objective`, which counts evaluations, enforces the budget and keeps
the best point seen, so ``N_it`` and the trace do not depend on what scipy
reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

METHODS = ("cobyla_style", "powell", "bfgs", "slsqp_style")
DEFAULT_FD_STEP = 1e-6
SHOT_FD_STEP = 1e-2


class BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class Budget:
    max_evals: int = 100_000
    ftol: float = 1e-9
    xtol: float = 1e-9
    fd_step: float | None = None  # None: 1e-6, or 1e-2 when the harness samples shots
    gtol: float = 1e-6
    rhobeg: float = 0.5
    rhoend: float = 1e-6

    def __post_init__(self):
        for name in ("max_evals", "ftol", "xtol", "gtol", "rhobeg", "rhoend"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.fd_step is not None and not self.fd_step > 0:
            raise ValueError("fd_step must be positive")

    @property
    def step(self) -> float:
        return DEFAULT_FD_STEP if self.fd_step is None else self.fd_step


class Objective:
    """Counted wrapper around ``fun(theta) -> float``."""

    def __init__(self, fun: Callable[[np.ndarray], float], dim: int, max_evals: int | None = None):
        self.fun = fun
        self.dim = int(dim)
        self.max_evals = max_evals
        self.count = 0
        self.best_f = np.inf
        self.best_x: np.ndarray | None = None
        self.trace: list[tuple[int, float]] = []

    def __call__(self, theta) -> float:
        if self.max_evals is not None and self.count >= self.max_evals:
            raise BudgetExhausted
        x = np.array(theta, dtype=float).ravel()
        if x.size != self.dim:
            raise ValueError(f"expected dimension {self.dim}, got {x.size}")
        f = float(self.fun(x))
        self.count += 1
        if not np.isfinite(f):
            raise FloatingPointError(f"objective returned {f} at evaluation {self.count}")
        if f < self.best_f:
            self.best_f, self.best_x = f, x
        self.trace.append((self.count, self.best_f))
        return f


@dataclass
class OptResult:
    x: np.ndarray
    fun: float
    n_evals: int
    trace: list[tuple[int, float]] = field(repr=False)
    termination: str
    method: str


def finite_diff_gradient(obj: Callable[[np.ndarray], float], theta, h: float = 1e-6) -> np.ndarray:
    """Central differences, ``2 * dim`` evaluations."""
    if not h > 0:
        raise ValueError("step must be positive")
    x = np.array(theta, dtype=float).ravel()
    g = np.empty_like(x)
    for k in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[k] += h
        xm[k] -= h
        fp, fm = obj(xp), obj(xm)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise FloatingPointError("non-finite value in finite difference")
        g[k] = (fp - fm) / (2 * h)
    return g


def minimize(method: str, obj: Objective, theta0, budget: Budget | None = None) -> OptResult:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    budget = budget or Budget()
    x0 = np.array(theta0, dtype=float).ravel()
    if x0.size != obj.dim:
        raise ValueError("theta0 dimension mismatch")
    obj.max_evals = budget.max_evals
    jac = lambda x: finite_diff_gradient(obj, x, budget.step)  # noqa: E731

    try:
        if obj.dim == 0:
            obj(x0)
            reason = "no parameters"
        elif method == "cobyla_style":
            res = optimize.minimize(obj, x0, method="COBYLA",
                                    options={"rhobeg": budget.rhobeg, "tol": budget.rhoend,
                                             "maxiter": budget.max_evals})
            reason = str(res.message)
        elif method == "powell":
            res = optimize.minimize(obj, x0, method="Powell",
                                    options={"xtol": budget.xtol, "ftol": budget.ftol,
                                             "maxfev": budget.max_evals})
            reason = str(res.message)
        elif method == "bfgs":
            res = optimize.minimize(obj, x0, method="BFGS", jac=jac,
                                    options={"gtol": budget.gtol,
                                             "maxiter": budget.max_evals})
            reason = str(res.message)
        else:
            res = optimize.minimize(obj, x0, method="SLSQP", jac=jac,
                                    options={"ftol": budget.ftol, "maxiter": budget.max_evals})
            reason = str(res.message)
    except BudgetExhausted:
        reason = "budget exhausted"
    if obj.best_x is None:
        raise RuntimeError("optimizer made no evaluations")
    return OptResult(obj.best_x.copy(), obj.best_f, obj.count, list(obj.trace), reason, method)
