"""Damped Newton root finder for small square systems, with seeded multistart."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10
MAX_ITER = 100
MAX_HALVINGS = 30
FD_STEP = 1e-7
STEP_FLOOR = 1e-14


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    final_residual_norm: float
    guess_used: np.ndarray
    root: np.ndarray
    multistart_attempts: int = 1
    wall_time: float = 0.0
    message: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "final_residual_norm": float(self.final_residual_norm),
            "guess_used": [float(v) for v in self.guess_used],
            "root": [float(v) for v in self.root],
            "multistart_attempts": int(self.multistart_attempts),
            "wall_time": float(self.wall_time),
            "message": self.message,
        }


class NonConvergence(RuntimeError):
    """Raised by the planners when every start failed; carries the best report."""

    def __init__(self, message: str, report: SolveReport | None = None):
        super().__init__(message)
        self.report = report


def _safe_eval(fn, x):
    try:
        r = np.asarray(fn(x), dtype=float)
    except (ValueError, ArithmeticError, FloatingPointError):
        return None
    return r if np.all(np.isfinite(r)) else None


def _jacobian(fn, x, r0, lo, hi):
    n = x.size
    jac = np.empty((r0.size, n))
    for j in range(n):
        h = FD_STEP * max(abs(x[j]), 1.0)
        if x[j] + h > hi[j]:
            h = -h
        xp = x.copy()
        xp[j] += h
        rp = _safe_eval(fn, xp)
        if rp is None:
            xp[j] = x[j] - h
            rp = _safe_eval(fn, xp)
            if rp is None:
                return None
            h = -h
        jac[:, j] = (rp - r0) / h
    return jac


def _box(box, n):
    if box is None:
        return np.full(n, -np.inf), np.full(n, np.inf)
    lo = np.array([b[0] for b in box], dtype=float)
    hi = np.array([b[1] for b in box], dtype=float)
    return lo, hi


def solve_system(residual_fn: Callable[[np.ndarray], Sequence[float]], guess,
                 box=None, tol: float = DEFAULT_TOL,
                 max_iter: int = MAX_ITER) -> SolveReport:
    """Damped Newton with a forward-difference Jacobian and box projection.

    Never raises on failure: the report has ``converged=False`` and a
    message instead.
    """
    t0 = time.perf_counter()
    x = np.atleast_1d(np.asarray(guess, dtype=float)).copy()
    guess_used = x.copy()
    lo, hi = _box(box, x.size)
    x = np.clip(x, lo, hi)

    def done(ok, it, res, msg):
        return SolveReport(ok, it, res, guess_used, x.copy(),
                           wall_time=time.perf_counter() - t0, message=msg)

    r = _safe_eval(residual_fn, x)
    if r is None:
        return done(False, 0, float("nan"), "residual not finite at the initial guess")
    if r.size != x.size:
        raise ValueError(f"residual has {r.size} components for {x.size} unknowns")
    norm = float(np.max(np.abs(r)))
    for it in range(1, max_iter + 1):
        if norm < tol:
            return done(True, it - 1, norm, "converged")
        jac = _jacobian(residual_fn, x, r, lo, hi)
        if jac is None:
            return done(False, it - 1, norm, "jacobian evaluation failed")
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            return done(False, it - 1, norm, "singular jacobian")
        l2 = float(np.linalg.norm(r))
        t = 1.0
        accepted = False
        for _ in range(MAX_HALVINGS):
            x_new = np.clip(x + t * step, lo, hi)
            r_new = _safe_eval(residual_fn, x_new)
            if r_new is not None and np.linalg.norm(r_new) < (1.0 - 1e-4 * t) * l2:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            return done(False, it, norm, "line search failed")
        moved = float(np.max(np.abs(x_new - x)))
        x, r = x_new, r_new
        norm = float(np.max(np.abs(r)))
        if norm >= tol and moved < STEP_FLOOR:
            return done(False, it, norm, "step stagnated")
    if norm < tol:
        return done(True, max_iter, norm, "converged")
    return done(False, max_iter, norm, "iteration limit reached")


def _score(rep: SolveReport) -> float:
    r = rep.final_residual_norm
    return r if np.isfinite(r) else np.inf


def perturbed_starts(center, box, n_starts: int, seed: int,
                     spread: float = 0.5) -> np.ndarray:
    """Start 0 is the center; the rest scale each coordinate log-uniformly.

    Each factor is drawn from exp(U(log(1 - spread), log(1 + spread))).
    """
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    center = np.atleast_1d(np.asarray(center, dtype=float))
    rng = np.random.default_rng(seed)
    lo_f, hi_f = np.log(1.0 - spread), np.log(1.0 + spread)
    factors = np.exp(rng.uniform(lo_f, hi_f, size=(n_starts - 1, center.size)))
    lo, hi = _box(box, center.size)
    starts = np.vstack([center, center * factors])
    return np.clip(starts, lo, hi)


def multistart(residual_fn, center_guess, box=None, n_starts: int = 16,
               seed: int = 42, tol: float = DEFAULT_TOL) -> SolveReport:
    """Run solve_system from seeded perturbations of the center guess.

    Returns the first converged report by start index, otherwise the
    failure with the smallest residual.
    """
    t0 = time.perf_counter()
    best, best_score = None, np.inf
    for k, start in enumerate(perturbed_starts(center_guess, box, n_starts, seed)):
        rep = solve_system(residual_fn, start, box, tol)
        rep.multistart_attempts = k + 1
        if rep.converged:
            rep.wall_time = time.perf_counter() - t0
            return rep
        if best is None or _score(rep) < best_score:
            best, best_score = rep, _score(rep)
    best.multistart_attempts = n_starts
    best.wall_time = time.perf_counter() - t0
    return best


def best_root(residual_fn, centers, box=None, key=None,
              tol: float = DEFAULT_TOL) -> SolveReport:
    """Solve from every center and keep the converged root minimising ``key``.

    Used when several extremals exist and the cheapest one is wanted.
    Ties go to the earlier center.  ``extra['roots']`` lists every
    converged root.
    """
    t0 = time.perf_counter()
    best, best_key, fallback = None, np.inf, None
    roots = []
    centers = list(centers)
    for k, center in enumerate(centers):
        rep = solve_system(residual_fn, center, box, tol)
        rep.multistart_attempts = k + 1
        if rep.converged:
            roots.append(rep.root)
            score = rep.root[-1] if key is None else key(rep.root)
            if best is None or score < best_key - 1e-12 * max(1.0, abs(best_key)):
                best, best_key = rep, score
        elif fallback is None or _score(rep) < _score(fallback):
            fallback = rep
    out = best if best is not None else fallback
    out.multistart_attempts = len(centers)
    out.wall_time = time.perf_counter() - t0
    out.extra["roots"] = [r.tolist() for r in roots]
    return out
