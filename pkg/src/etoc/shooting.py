"""Indirect shooting on the raw necessary conditions, plus control replay.

The shot integrates (x, y, theta, lambda_3) with classical fixed-step RK4;
lambda_1 = c1 and lambda_2 = c2 are constants and the controls are
eliminated through

    v = -(c1 cos(theta) + c2 sin(theta)) / mu,      omega = -lambda_3 / mu.

The replay integrator pushes any sampled control signal through the
kinematics alone and needs no costates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .form1 import Form1Params, eval_costates as _form1_costates
from .model import Problem, ProblemError, check_mu, check_tf
from .rootsolve import NonConvergence, SolveReport, multistart, solve_system

DEFAULT_STEPS = 10_000
MIN_STEPS = 100
BOX = ((-100.0, 100.0), (-100.0, 100.0), (-100.0, 100.0), (1e-3, 100.0))


class ShootingError(ArithmeticError):
    """Integration produced a non-finite value."""

    def __init__(self, tau: float):
        super().__init__(f"non-finite state at tau={tau:.6g}")
        self.tau = tau


@dataclass(frozen=True)
class Rollout:
    tau: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    lambda3: np.ndarray
    v: np.ndarray
    omega: np.ndarray
    hamiltonian: np.ndarray


@njit(cache=True)
def _rhs(s, c1, c2, tf, mu, out):
    th = s[2]
    c, sn = math.cos(th), math.sin(th)
    v = -(c1 * c + c2 * sn) / mu
    out[0] = tf * v * c
    out[1] = tf * v * sn
    out[2] = -tf * s[3] / mu
    out[3] = tf * (c1 * v * sn - c2 * v * c)


@njit(cache=True)
def _shoot(c1, c2, l30, tf, mu, n_steps, keep):
    """RK4 from the origin; returns (trajectory, index of first non-finite step or -1)."""
    rows = n_steps + 1 if keep else 1
    traj = np.empty((rows, 4))
    s = np.array([0.0, 0.0, 0.0, l30])
    traj[0] = s
    h = 1.0 / n_steps
    k1 = np.empty(4)
    k2 = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    for i in range(n_steps):
        _rhs(s, c1, c2, tf, mu, k1)
        _rhs(s + 0.5 * h * k1, c1, c2, tf, mu, k2)
        _rhs(s + 0.5 * h * k2, c1, c2, tf, mu, k3)
        _rhs(s + h * k3, c1, c2, tf, mu, k4)
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        for j in range(4):
            if not math.isfinite(s[j]):
                return traj, i + 1
        if keep:
            traj[i + 1] = s
    if not keep:
        traj[0] = s
    return traj, -1


def _check_steps(n_steps: int) -> int:
    if int(n_steps) < MIN_STEPS:
        raise ProblemError(f"n_steps must be at least {MIN_STEPS}")
    return int(n_steps)


def _controls(c1, c2, theta, lam3, mu):
    v = -(c1 * np.cos(theta) + c2 * np.sin(theta)) / mu
    return v, -lam3 / mu


def _hamiltonian(c1, c2, theta, lam3, v, w, tf, mu):
    return tf * ((1.0 - mu) + 0.5 * mu * (v * v + w * w)
                 + c1 * v * np.cos(theta) + c2 * v * np.sin(theta) + lam3 * w)


def rk4_rollout(c1: float, c2: float, lambda3_0: float, tf: float, mu: float,
                n_steps: int = DEFAULT_STEPS) -> Rollout:
    """Integrate one shot and return every step with controls and H."""
    n_steps, tf, mu = _check_steps(n_steps), check_tf(tf), check_mu(mu)
    traj, bad = _shoot(float(c1), float(c2), float(lambda3_0), tf, mu, n_steps, True)
    if bad >= 0:
        raise ShootingError(bad / n_steps)
    x, y, th, l3 = traj.T
    v, w = _controls(c1, c2, th, l3, mu)
    h = _hamiltonian(c1, c2, th, l3, v, w, tf, mu)
    return Rollout(np.linspace(0.0, 1.0, n_steps + 1), x, y, th, l3, v, w, h)


def shoot_residual(c1: float, c2: float, lambda3_0: float, tf: float,
                   problem: Problem, n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """(x(1) - x_f, y(1) - y_f, lambda_3(1), H(0))."""
    mu = problem.mu
    tf = check_tf(tf)
    end, bad = _shoot(float(c1), float(c2), float(lambda3_0), tf, mu, int(n_steps), False)
    if bad >= 0:
        raise ShootingError(bad / n_steps)
    x1, y1, _, l31 = end[0]
    xf, yf = problem.target
    v0, w0 = _controls(c1, c2, 0.0, lambda3_0, mu)
    h0 = _hamiltonian(c1, c2, 0.0, lambda3_0, v0, w0, tf, mu)
    return np.array([x1 - xf, y1 - yf, l31, h0])


def from_form1(p: Form1Params) -> np.ndarray:
    """Shot parameters (c1, c2, lambda_3(0), T_f) of a closed-form solution."""
    l1, l2, l3, _ = _form1_costates(p, 0.0)
    return np.array([l1, l2, l3, p.tf])


def solve_shooting(problem: Problem, guess, n_steps: int = DEFAULT_STEPS,
                   tol: float = 1e-10, n_starts: int = 1,
                   seed: int = 42) -> tuple[np.ndarray, SolveReport]:
    """Newton on the four shooting unknowns (c1, c2, lambda_3(0), T_f)."""
    n_steps = _check_steps(n_steps)

    def fn(x):
        return shoot_residual(x[0], x[1], x[2], x[3], problem, n_steps)

    if n_starts == 1:
        rep = solve_system(fn, guess, BOX, tol)
    else:
        rep = multistart(fn, guess, BOX, n_starts, seed, tol)
    if not rep.converged:
        raise NonConvergence(f"shooting: {rep.message}", rep)
    return rep.root.copy(), rep


@njit(cache=True)
def _replay(v, w, tf, n_steps):
    # v, w hold samples at tau = k h / 2, k = 0 .. 2 n_steps
    out = np.empty((n_steps + 1, 3))
    x = 0.0
    y = 0.0
    th = 0.0
    out[0, 0] = 0.0
    out[0, 1] = 0.0
    out[0, 2] = 0.0
    h = 1.0 / n_steps
    for i in range(n_steps):
        va, vm, vb = v[2 * i], v[2 * i + 1], v[2 * i + 2]
        wa, wm, wb = w[2 * i], w[2 * i + 1], w[2 * i + 2]
        k1x, k1y, k1t = tf * va * math.cos(th), tf * va * math.sin(th), tf * wa
        t2 = th + 0.5 * h * k1t
        k2x, k2y, k2t = tf * vm * math.cos(t2), tf * vm * math.sin(t2), tf * wm
        t3 = th + 0.5 * h * k2t
        k3x, k3y, k3t = tf * vm * math.cos(t3), tf * vm * math.sin(t3), tf * wm
        t4 = th + h * k3t
        k4x, k4y, k4t = tf * vb * math.cos(t4), tf * vb * math.sin(t4), tf * wb
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        out[i + 1, 0] = x
        out[i + 1, 1] = y
        out[i + 1, 2] = th
    return out


def replay_controls(control_fn, tf: float, n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """RK4 of the kinematics driven by ``control_fn(tau) -> Control``.

    Returns the (n_steps + 1, 3) array of (x, y, theta).
    """
    n_steps, tf = _check_steps(n_steps), check_tf(tf)
    tau = np.linspace(0.0, 1.0, 2 * n_steps + 1)
    ctl = control_fn(tau)
    v = np.ascontiguousarray(np.broadcast_to(np.asarray(ctl.v, dtype=float), tau.shape))
    w = np.ascontiguousarray(np.broadcast_to(np.asarray(ctl.omega, dtype=float), tau.shape))
    return _replay(v, w, tf, n_steps)
