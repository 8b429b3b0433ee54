"""Closed-form solutions when the linear velocity is held at an unknown constant v_c.

The multipliers lie on the cylinder zeta_1^2 + zeta_2^2 = K_c^2 and the
extruded parabola zeta_3^2 / 2 = mu v_c zeta_1 + C_c.  With

    C_c = mu (1 - mu) + mu^2 v_c^2 / 2,     K_c = C_c / (v_c mu (2m - 1)),
    Lambda = T_f sqrt(v_c K_c / mu),        eta = K(m) - Lambda,

everything is a Jacobi elliptic function of u = Lambda tau + eta.  The three
unknowns (m, T_f, v_c) are fixed by the two terminal positions and the
periodicity zeta_5(0) = zeta_5(1).  Base solutions turn counter-clockwise
(omega >= 0); ``mirror`` reflects them about the x-axis.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import elliptic as ell
from .model import (Control, Problem, ProblemError, State, Trajectory, check_mu,
                    check_tau, check_tf, cost_quadrature, scalarize,
                    straight_line_time)
from .rootsolve import NonConvergence, SolveReport, best_root, multistart

M_BOX = (0.5 + 1e-9, 1.0 - 1e-9)
TF_BOX = (1e-3, 100.0)
VC_BOX = (1e-6, 100.0)
COSTATE_NAMES = ("zeta1", "zeta2", "zeta3", "zeta5")


@dataclass(frozen=True)
class FixedVParams:
    mu: float
    tf: float
    vc: float
    m: float
    cc: float
    kc: float
    lambda_cap: float
    eta: float
    c_theta: float
    cx: float
    cy: float
    c_zeta5: float
    mirror: bool = False

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.eta)

    @property
    def a(self) -> float:
        """C_c / (mu v_c), the magnitude of zeta_1 at the final time."""
        return self.cc / (self.mu * self.vc)

    def to_dict(self) -> dict:
        return asdict(self)


def _cc(mu, vc):
    return mu * (1.0 - mu) + 0.5 * mu * mu * vc * vc


def derive_params(m: float, tf: float, vc: float, mu: float,
                  mirror: bool = False) -> FixedVParams:
    mu, tf = check_mu(mu), check_tf(tf)
    m, vc = float(m), float(vc)
    if not (M_BOX[0] <= m <= M_BOX[1]):
        raise ProblemError(f"m={m!r} outside (0.5, 1): K_c would be infinite or negative")
    if not (math.isfinite(vc) and vc > 0.0):
        raise ProblemError(f"v_c must be positive, got {vc!r}")
    cc = _cc(mu, vc)
    kc = cc / (vc * mu * (2.0 * m - 1.0))
    lam = tf * math.sqrt(vc * kc / mu)
    eta = ell.ellip_k(m) - lam
    sm = math.sqrt(m)
    sn0, cn0, _, _, _ = ell.jacobi(eta, m)
    a0 = math.asin(sm * sn0)
    c0, s0 = math.cos(2.0 * a0), math.sin(2.0 * a0)
    e0 = ell.jacobi_epsilon(eta, m)
    scale = tf * vc / lam
    cx = scale * (-2.0 * c0 * e0 + 2.0 * sm * s0 * cn0)
    cy = scale * (2.0 * sm * c0 * cn0 + 2.0 * s0 * e0)
    c_zeta5 = -(2.0 * kc * tf / lam) * (eta - e0)
    return FixedVParams(mu, tf, vc, m, cc, kc, lam, eta, -2.0 * a0, cx, cy,
                        c_zeta5, mirror)


def straight_line_params(tf: float, vc: float, mu: float) -> FixedVParams:
    """The m -> 1 limit for arbitrary (T_f, v_c): a straight run, omega = 0."""
    mu, tf = check_mu(mu), check_tf(tf)
    cc = _cc(mu, vc)
    a = cc / (mu * vc)
    return FixedVParams(mu, tf, float(vc), 1.0, cc, a, math.inf, math.inf, 0.0,
                        0.0, 0.0, 0.0)


def straight_line(mu: float, r: float) -> FixedVParams:
    """Optimal straight run: v_c on the control circle, T_f = r / v_c."""
    mu = check_mu(mu)
    vc = math.sqrt(2.0 * (1.0 - mu) / mu)
    return straight_line_params(straight_line_time(mu, r), vc, mu)


def _u(p: FixedVParams, tau):
    return p.lambda_cap * tau + p.eta


def eval_costates(p: FixedVParams, tau):
    """(zeta_1, zeta_2, zeta_3, zeta_5) at tau."""
    tau = check_tau(tau)
    if p.degenerate:
        ones = np.ones_like(tau)
        z1 = -p.a * ones
        z5 = p.tf * (p.a - p.mu * p.vc) * tau
        return scalarize(z1), scalarize(0.0 * ones), scalarize(0.0 * ones), scalarize(z5)
    u = _u(p, tau)
    sn, cn, dn, _, _ = ell.jacobi(u, p.m)
    kc, a = p.kc, p.a
    z1 = kc - (kc + a) * sn * sn
    z2 = -math.sqrt(2.0 * kc * (kc + a)) * sn * dn
    z3 = -math.sqrt(2.0 * p.mu * p.vc * (kc + a)) * cn
    z5 = (-p.tf * (p.mu * p.vc + kc) * tau
          + (2.0 * kc * p.tf / p.lambda_cap) * (u - ell.jacobi_epsilon(u, p.m))
          + p.c_zeta5)
    if p.mirror:
        z2, z3 = -z2, -z3
    return scalarize(z1), scalarize(z2), scalarize(z3), scalarize(z5)


def eval_control(p: FixedVParams, tau) -> Control:
    tau = check_tau(tau)
    v = np.full_like(np.asarray(tau, dtype=float), p.vc)
    if p.degenerate:
        return Control(scalarize(v), scalarize(0.0 * v))
    _, cn, _, _, _ = ell.jacobi(_u(p, tau), p.m)
    w = math.sqrt(2.0 * p.mu * p.vc * (p.kc + p.a)) / p.mu * cn
    if p.mirror:
        w = -w
    return Control(scalarize(v), scalarize(w))


def eval_state(p: FixedVParams, tau) -> State:
    tau = check_tau(tau)
    if p.degenerate:
        zero = np.zeros_like(tau)
        return State(scalarize(p.tf * p.vc * tau), scalarize(zero), scalarize(zero))
    u = _u(p, tau)
    sn, cn, _, _, _ = ell.jacobi(u, p.m)
    sm = math.sqrt(p.m)
    c0, s0 = math.cos(p.c_theta), -math.sin(p.c_theta)
    lam = p.lambda_cap
    g = 2.0 * ell.jacobi_epsilon(u, p.m) / lam - tau
    scale = p.tf * p.vc
    theta = 2.0 * np.arcsin(sm * sn) + p.c_theta
    x = scale * (c0 * g - (2.0 * sm * s0 / lam) * cn) + p.cx
    y = scale * (-(2.0 * sm * c0 / lam) * cn - s0 * g) + p.cy
    if p.mirror:
        y, theta = -y, -theta
    return State(scalarize(x), scalarize(y), scalarize(theta))


def sample(p: FixedVParams, tau) -> Trajectory:
    tau = np.atleast_1d(check_tau(tau))
    st = eval_state(p, tau)
    ctl = eval_control(p, tau)
    z = np.column_stack([np.atleast_1d(c) for c in eval_costates(p, tau)])
    z1, z3 = z[:, 0], z[:, 2]
    v, w = np.asarray(ctl.v), np.asarray(ctl.omega)
    h = p.tf * ((1.0 - p.mu) + 0.5 * p.mu * (v * v + w * w) + z1 * v + z3 * w)
    return Trajectory(tau, st, ctl, z, COSTATE_NAMES, h)


def zeta4_rate(p: FixedVParams, tau):
    """d zeta_4 / d tau with the closed forms substituted; zero by construction of C_c."""
    z1, _, z3, _ = eval_costates(p, tau)
    w = -np.asarray(z3) / p.mu
    return -((1.0 - p.mu) + 0.5 * p.mu * p.vc ** 2 + 0.5 * p.mu * w * w
             + np.asarray(z1) * p.vc + np.asarray(z3) * w)


def periodicity_residual(p: FixedVParams) -> float:
    """zeta_5(1) - zeta_5(0) in closed form."""
    if p.degenerate:
        return p.tf * ((1.0 - p.mu) / p.vc - 0.5 * p.mu * p.vc)
    kc, lam = p.kc, p.lambda_cap
    tail = (ell.ellip_k(p.m) - ell.ellip_e_complete(p.m)
            - p.eta + ell.jacobi_epsilon(p.eta, p.m))
    return -p.tf * (p.mu * p.vc + kc) + (2.0 * kc * p.tf / lam) * tail


def cost(p: FixedVParams, n: int = 401) -> float:
    tau = np.linspace(0.0, 1.0, n)
    ctl = eval_control(p, tau)
    return cost_quadrature(ctl.v, ctl.omega, p.tf, p.mu, tau)


def params_for(m: float, tf: float, vc: float, mu: float, mirror: bool = False):
    if m == 1.0:
        p = straight_line_params(tf, vc, mu)
        return FixedVParams(**{**p.to_dict(), "mirror": mirror})
    return derive_params(m, tf, vc, mu, mirror)


def residual3(m: float, tf: float, vc: float, problem: Problem):
    """(x(1) - x_f, y(1) - y_f, zeta_5(1) - zeta_5(0)); m = 1 is the straight line."""
    xf, yf = problem.target
    p = params_for(m, tf, vc, problem.mu, yf < 0.0)
    st = eval_state(p, 1.0)
    return np.array([st.x - xf, st.y - yf, periodicity_residual(p)])


def default_guess(problem: Problem) -> tuple[float, float, float]:
    mu = problem.mu
    return 0.75, straight_line_time(mu, problem.r), math.sqrt(2.0 * mu * (1.0 - mu)) / mu


def guess_ladder(problem: Problem) -> list[tuple[float, float, float]]:
    m0, t0, v0 = default_guess(problem)
    ladder = [(m0, t0, v0)]
    for m in (0.6, 0.75, 0.9, 0.99):
        for f in (1.0, 1.5, 2.0, 3.0, 5.0):
            for g in (1.0, 0.5):
                if (m, f, g) != (m0, 1.0, 1.0):
                    ladder.append((m, f * t0, g * v0))
    return ladder


def solve(problem: Problem, guess=None, n_starts: int = 16, seed: int = 42,
          tol: float = 1e-10) -> tuple[FixedVParams, SolveReport]:
    """Solve the three-equation system for (m, T_f, v_c).

    Targets below the x-axis are solved in reflection.  Without a guess,
    every ladder center is tried and the cheapest converged root is kept.
    """
    mu = problem.mu
    xf, yf = problem.target
    if yf == 0.0 and xf > 0.0:
        p = straight_line(mu, problem.r)
        root = np.array([1.0, p.tf, p.vc])
        return p, SolveReport(True, 0, 0.0, root, root, 0, 0.0, "straight line")
    mirror = yf < 0.0
    canonical = Problem(mu, problem.r, math.atan2(abs(yf), xf))

    def fn(x):
        return residual3(x[0], x[1], x[2], canonical)

    box = (M_BOX, TF_BOX, VC_BOX)
    if guess is None:
        def key(root):
            return cost(derive_params(root[0], root[1], root[2], mu), 201)
        rep = best_root(fn, guess_ladder(canonical), box, key=key, tol=tol)
    else:
        rep = multistart(fn, guess, box, n_starts, seed, tol)
    if not rep.converged:
        raise NonConvergence("fixedv: no root for (m, T_f, v_c)", rep)
    m, tf, vc = rep.root
    return derive_params(m, tf, vc, mu, mirror), rep
