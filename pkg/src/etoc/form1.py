"""Closed-form energy-time optimal trajectories from the Hamiltonian conditions.

The costates lambda_1, lambda_2 are constant with magnitude z, and the
heading obeys a pendulum equation whose solution is written with Jacobi
elliptic functions of parameter m = Q/2 and argument

    u(tau) = (T_f z / mu) tau + eta,    eta = (2n + 1) K(m) - T_f z / mu,

so that lambda_3(1) = 0.  Everything is evaluated for a target in the
closed first quadrant; the ``mirror`` (about the x-axis) and ``reverse``
(through the origin) flags map the canonical solution onto the other
quadrants.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import elliptic as ell
from .model import (Control, Problem, ProblemError, State, Trajectory, check_mu,
                    check_tau, scalarize, check_tf, hamiltonian, straight_line_time)
from .rootsolve import NonConvergence, SolveReport, best_root, multistart

Q_BOX = (1e-4, 2.0 - 1e-4)
TF_BOX = (1e-3, 100.0)
COSTATE_NAMES = ("lambda1", "lambda2", "lambda3", "lambda4")


@dataclass(frozen=True)
class Form1Params:
    mu: float
    tf: float
    q: float
    n: int
    z: float
    phi: float
    eta: float
    m: float
    cx: float
    cy: float
    mirror: bool = False
    reverse: bool = False

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.eta)

    @property
    def lambda12(self) -> tuple[float, float]:
        """Constant costates (lambda_1, lambda_2) after the symmetry flags."""
        l1, l2 = -self.z * math.sin(self.phi), -self.z * math.cos(self.phi)
        if self.mirror:
            l2 = -l2
        if self.reverse:
            l1, l2 = -l1, -l2
        return l1, l2

    def to_dict(self) -> dict:
        return asdict(self)


def derive_params(q: float, tf: float, mu: float, n: int = 0,
                  mirror: bool = False, reverse: bool = False) -> Form1Params:
    """All dependent constants from the two unknowns (Q, T_f)."""
    q, mu = float(q), check_mu(mu)
    if not (0.0 < q < 2.0):
        raise ProblemError(f"Q={q!r} outside (0, 2)")
    tf = check_tf(tf)
    if n < 0:
        raise ProblemError("branch index n must be nonnegative")
    m = 0.5 * q
    z = math.sqrt(4.0 * mu * (1.0 - mu) / q)
    eta = (2 * n + 1) * ell.ellip_k(m) - tf * z / mu
    sm = math.sqrt(m)
    sn0, cn0, _, _, _ = ell.jacobi(eta, m)
    phi = math.asin(sm * sn0)
    w0 = eta - ell.jacobi_epsilon(eta, m)
    cx = sm * math.cos(phi) * cn0 - math.sin(phi) * w0
    cy = -sm * math.sin(phi) * cn0 - math.cos(phi) * w0
    return Form1Params(mu, tf, q, int(n), z, phi, eta, m, cx, cy, mirror, reverse)


def straight_line(mu: float, r: float, reverse: bool = False) -> Form1Params:
    """The m = 1 limit: a straight run along the x-axis at constant speed."""
    mu = check_mu(mu)
    z = math.sqrt(2.0 * mu * (1.0 - mu))
    return Form1Params(mu, straight_line_time(mu, r), 2.0, 0, z, 0.5 * math.pi,
                       math.inf, 1.0, 0.0, 0.0, False, reverse)


def _u(p: Form1Params, tau):
    return (p.tf * p.z / p.mu) * tau + p.eta


def _canonical_state(p: Form1Params, tau):
    if p.degenerate:
        speed = p.z / p.mu
        return p.tf * speed * tau, np.zeros_like(tau), np.zeros_like(tau)
    u = _u(p, tau)
    sn, cn, _, _, _ = ell.jacobi(u, p.m)
    sm = math.sqrt(p.m)
    w = u - ell.jacobi_epsilon(u, p.m)
    s, c = math.sin(p.phi), math.cos(p.phi)
    theta = np.arcsin(sm * sn) - p.phi
    x = -sm * c * cn + s * w + p.cx
    y = sm * s * cn + c * w + p.cy
    return x, y, theta


def _canonical_sn_cn(p: Form1Params, tau):
    if p.degenerate:
        return np.ones_like(tau), np.zeros_like(tau)
    sn, cn, _, _, _ = ell.jacobi(_u(p, tau), p.m)
    return sn, cn


def eval_state(p: Form1Params, tau) -> State:
    tau = check_tau(tau)
    x, y, theta = _canonical_state(p, tau)
    if p.mirror:
        y, theta = -y, -theta
    if p.reverse:
        x, y = -x, -y
    return State(scalarize(x), scalarize(y), scalarize(theta))


def eval_control(p: Form1Params, tau) -> Control:
    tau = check_tau(tau)
    sn, cn = _canonical_sn_cn(p, tau)
    amp = p.z * math.sqrt(p.m) / p.mu
    v, w = amp * sn, amp * cn
    if p.mirror:
        w = -w
    if p.reverse:
        v = -v
    return Control(scalarize(v), scalarize(w))


def eval_costates(p: Form1Params, tau):
    """(lambda_1, lambda_2, lambda_3, lambda_4) at tau."""
    tau = check_tau(tau)
    _, cn = _canonical_sn_cn(p, tau)
    l3 = -p.z * math.sqrt(p.m) * cn
    if p.mirror:
        l3 = -l3
    l4 = (-1.0 + p.mu + p.z * p.z * p.m / (2.0 * p.mu)) * tau
    l1, l2 = p.lambda12
    ones = np.ones_like(tau)
    return (scalarize(l1 * ones), scalarize(l2 * ones), scalarize(l3), scalarize(l4))


def sample(p: Form1Params, tau) -> Trajectory:
    tau = np.atleast_1d(check_tau(tau))
    st = eval_state(p, tau)
    ctl = eval_control(p, tau)
    lam = np.column_stack([np.atleast_1d(v) for v in eval_costates(p, tau)])
    h = hamiltonian(st, ctl, lam[:, :3].T, p.tf, p.mu)
    return Trajectory(tau, st, ctl, lam, COSTATE_NAMES, np.atleast_1d(h))


def stationary_time(p: Form1Params) -> float:
    """tau* at which v = 0 and omega is stationary (may lie outside [0, 1])."""
    return -p.eta * p.mu / (p.tf * p.z)


def transition_condition(p: Form1Params) -> float:
    """T_f z - mu (2n + 1) K(m); its sign separates reversing trajectories."""
    if p.degenerate:
        return -math.inf
    return p.tf * p.z - p.mu * (2 * p.n + 1) * ell.ellip_k(p.m)


def canonical_target(problem: Problem):
    """First-quadrant image of the target and the flags that undo the map."""
    xf, yf = problem.target
    reverse = xf < 0.0
    mirror = (yf < 0.0) != reverse
    return abs(xf), abs(yf), mirror, reverse


def residual(q: float, tf: float, problem: Problem, n: int = 0):
    """Terminal position mismatch (x(1) - x_f, y(1) - y_f)."""
    mirror, reverse = canonical_target(problem)[2:]
    p = derive_params(q, tf, problem.mu, n, mirror, reverse)
    st = eval_state(p, 1.0)
    xf, yf = problem.target
    return np.array([st.x - xf, st.y - yf])


def default_guess(problem: Problem) -> tuple[float, float]:
    return 1.0, straight_line_time(problem.mu, problem.r)


def guess_ladder(problem: Problem) -> list[tuple[float, float]]:
    """Deterministic centers used when no guess is supplied.

    The plain default comes first; the rest cover the longer final times
    of sharp turns so the cheapest extremal is found.
    """
    q0, t0 = default_guess(problem)
    ladder = [(q0, t0)]
    for q in (0.5, 1.0, 1.5, 1.9):
        for f in (1.0, 1.5, 2.0, 3.0, 5.0, 8.0):
            if (q, f) != (q0, 1.0):
                ladder.append((q, f * t0))
    return ladder


def solve(problem: Problem, guess=None, n_starts: int = 16, seed: int = 42,
          tol: float = 1e-10, branches=(0, 1)) -> tuple[Form1Params, SolveReport]:
    """Find (Q, T_f) hitting the target; tries branch n = 0 before n = 1.

    With an explicit guess the seeded multistart around it is used and the
    first converged start wins.  Without one, every center of
    :func:`guess_ladder` is solved and the root with the smallest final
    time (hence the smallest cost 2 T_f (1 - mu)) is returned.
    """
    mu = problem.mu
    xc, yc, mirror, reverse = canonical_target(problem)
    if yc == 0.0:
        p = straight_line(mu, problem.r, reverse)
        root = np.array([p.q, p.tf])
        return p, SolveReport(True, 0, 0.0, root, root, 0, 0.0, "straight line")
    canonical = Problem(mu, math.hypot(xc, yc), math.atan2(yc, xc))
    best = None
    for n in branches:
        def fn(x, n=n):
            return residual(x[0], x[1], canonical, n)
        if guess is None:
            rep = best_root(fn, guess_ladder(canonical), (Q_BOX, TF_BOX), tol=tol)
        else:
            rep = multistart(fn, guess, (Q_BOX, TF_BOX), n_starts, seed, tol)
        rep.extra["branch"] = n
        if rep.converged:
            q, tf = rep.root
            return derive_params(q, tf, mu, n, mirror, reverse), rep
        if best is None or rep.final_residual_norm < best.final_residual_norm:
            best = rep
    raise NonConvergence(f"form1: no root on branches {tuple(branches)}", best)
