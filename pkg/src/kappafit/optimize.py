"""Derivative-free maximisation with the Nelder-Mead simplex."""

from dataclasses import dataclass, field
import math

import numpy as np

from .exceptions import DomainError

REFLECT, EXPAND, CONTRACT, SHRINK = 1.0, 2.0, 0.5, 0.5


@dataclass
class MaximizeResult:
    x: np.ndarray
    value: float
    converged: bool
    iterations: int
    evaluations: int
    history: list = field(default_factory=list, repr=False)


def _run(f, simplex, values, tol, ftol, max_iter, history):
    n = simplex.shape[1]
    evals = 0
    it = 0
    converged = False
    while it < max_iter:
        order = np.argsort(-values, kind="stable")
        simplex, values = simplex[order], values[order]
        history.append(values[0])
        diam = np.max(np.abs(simplex[1:] - simplex[0]))
        spread = values[0] - values[-1]
        if diam < tol or (ftol is not None and spread <= ftol):
            converged = True
            break
        it += 1
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + REFLECT * (centroid - worst)
        fr = f(xr)
        evals += 1
        if fr > values[0]:
            xe = centroid + EXPAND * (xr - centroid)
            fe = f(xe)
            evals += 1
            if fe > fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue
        if fr > values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr > values[-1]:
            # outside contraction
            xc = centroid + CONTRACT * (xr - centroid)
            fc = f(xc)
            evals += 1
            if fc >= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid + CONTRACT * (worst - centroid)
            fc = f(xc)
            evals += 1
            if fc > values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        best = simplex[0]
        simplex[1:] = best + SHRINK * (simplex[1:] - best)
        for i in range(1, n + 1):
            values[i] = f(simplex[i])
        evals += n
    order = np.argsort(-values, kind="stable")
    return simplex[order], values[order], converged, it, evals


def _initial_simplex(x0, step):
    n = x0.size
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] += step[i]
    return simplex


def maximize(objective, x0, tol=1e-8, max_iter=5000, ftol=None, step=None, restart=True):
    """Maximise ``objective`` starting from ``x0``.

    Stops when the simplex diameter (max-norm) drops below ``tol`` or, if
    ``ftol`` is given, when the spread of objective values across the
    simplex is at most ``ftol``.  With ``restart`` a fresh simplex is built
    once around the best vertex and the search repeated, which guards
    against premature collapse.  Non-finite objective values are treated
    as ``-inf`` so infeasible points are simply never accepted.

    The best value never decreases between iterations; ``history`` records
    it at every iteration.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float)).copy()

    def f(x):
        v = objective(x)
        v = float(v)
        return v if not math.isnan(v) else -math.inf

    f0 = f(x0)
    if not math.isfinite(f0):
        raise DomainError("objective is not finite at x0")
    if step is None:
        step = np.where(x0 != 0, 0.05 * np.abs(x0), 0.00025) + 0.1
    step = np.broadcast_to(np.asarray(step, dtype=float), x0.shape)

    history = []
    simplex = _initial_simplex(x0, step)
    values = np.array([f0] + [f(v) for v in simplex[1:]])
    simplex, values, converged, iters, evals = _run(f, simplex, values, tol, ftol, max_iter, history)
    evals += x0.size + 1
    if restart and iters < max_iter:
        best = simplex[0].copy()
        # shrink the restart simplex; the basin is already located
        simplex = _initial_simplex(best, step * 0.1)
        values = np.array([values[0]] + [f(v) for v in simplex[1:]])
        simplex, values, converged, more, ev = _run(
            f, simplex, values, tol, ftol, max_iter - iters, history)
        iters += more
        evals += ev + x0.size
    return MaximizeResult(
        x=simplex[0].copy(),
        value=float(values[0]),
        converged=bool(converged),
        iterations=iters,
        evaluations=evals,
        history=history,
    )
