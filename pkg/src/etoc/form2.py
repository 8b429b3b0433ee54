"""Closed-form solutions of the variational (Lagrange multiplier) formulation.

The multipliers zeta_1..zeta_3 live on the intersection of the cylinders
zeta_1^2 + zeta_3^2 = K^2 (K^2 = 2 mu (1 - mu)) and zeta_1^2 + zeta_2^2 =
eps^2, and are Jacobi elliptic functions of parameter m = K^2 / eps^2 and
argument u = (T_f eps / mu) tau + eta with eta = K(m) - T_f eps / mu.

Signs: (K < 0, eps > 0) reaches the first quadrant.  Flipping eps mirrors
the path about the x-axis; flipping both reflects it through the origin.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import elliptic as ell
from .form1 import guess_ladder as _form1_ladder
from .model import (Control, Problem, ProblemError, State, Trajectory, check_mu,
                    check_tau, check_tf, scalarize, straight_line_time)
from .rootsolve import NonConvergence, SolveReport, best_root, multistart

M_MAX = 1.0 - 5e-5  # same ceiling as the Q box of form1
TF_BOX = (1e-3, 100.0)
EPS_MAX = 100.0
TIE_RTOL = 1e-8
COSTATE_NAMES = ("zeta1", "zeta2", "zeta3")


@dataclass(frozen=True)
class Form2Params:
    mu: float
    tf: float
    eps: float
    k_sign: int
    k: float
    m: float
    eta: float
    c_theta: float
    cx: float
    cy: float

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.eta)

    def to_dict(self) -> dict:
        return asdict(self)


def k_magnitude(mu: float) -> float:
    return math.sqrt(2.0 * mu * (1.0 - mu))


def derive_params(eps: float, tf: float, mu: float, k_sign: int = -1) -> Form2Params:
    mu = check_mu(mu)
    tf = check_tf(tf)
    eps = float(eps)
    if k_sign not in (-1, 1):
        raise ProblemError("k_sign must be +1 or -1")
    k = k_sign * k_magnitude(mu)
    if not (math.isfinite(eps) and abs(eps) > abs(k)):
        raise ProblemError(f"|eps| must exceed sqrt(2 mu (1 - mu)) = {abs(k):.17g} "
                           f"so that m < 1, got eps={eps!r}")
    m = (k / eps) ** 2
    if m >= 1.0:
        raise ProblemError(f"eps={eps!r} gives m >= 1")
    eta = ell.ellip_k(m) - tf * eps / mu
    sn0, cn0, dn0, _, _ = ell.jacobi(eta, m)
    w0 = eta - ell.jacobi_epsilon(eta, m)
    s = -math.copysign(1.0, k * eps)
    c_theta = -s * math.asin(math.sqrt(m) * sn0)
    cx = -(k / eps) * (dn0 * cn0 - sn0 * w0)
    cy = -(dn0 * w0 + m * sn0 * cn0)
    return Form2Params(mu, tf, eps, k_sign, k, m, eta, c_theta, cx, cy)


def straight_line(mu: float, r: float, k_sign: int = -1) -> Form2Params:
    """Equal-radius cylinders (m = 1): constant multipliers, straight path."""
    mu = check_mu(mu)
    k = k_sign * k_magnitude(mu)
    return Form2Params(mu, straight_line_time(mu, r), abs(k), k_sign, k, 1.0,
                       math.inf, 0.0, 0.0, 0.0)


def _jac(p: Form2Params, tau):
    if p.degenerate:
        one = np.ones_like(tau)
        return one, 0.0 * one, 0.0 * one
    u = (p.tf * p.eps / p.mu) * tau + p.eta
    sn, cn, dn, _, _ = ell.jacobi(u, p.m)
    return np.asarray(sn), np.asarray(cn), np.asarray(dn)


def eval_costates(p: Form2Params, tau):
    """(zeta_1, zeta_2, zeta_3) at tau."""
    tau = check_tau(tau)
    sn, cn, dn = _jac(p, tau)
    return scalarize(p.k * sn), scalarize(-p.eps * dn), scalarize(p.k * cn)


def eval_control(p: Form2Params, tau) -> Control:
    tau = check_tau(tau)
    sn, cn, _ = _jac(p, tau)
    return Control(scalarize(-(p.k / p.mu) * sn), scalarize(-(p.k / p.mu) * cn))


def eval_state(p: Form2Params, tau) -> State:
    tau = check_tau(tau)
    if p.degenerate:
        x = -(p.k / p.mu) * p.tf * tau
        zero = np.zeros_like(tau)
        return State(scalarize(x), scalarize(zero), scalarize(zero))
    u = (p.tf * p.eps / p.mu) * tau + p.eta
    sn, cn, _, _, _ = ell.jacobi(u, p.m)
    sn0, cn0, dn0, _, _ = ell.jacobi(p.eta, p.m)
    w = u - ell.jacobi_epsilon(u, p.m)
    s = -math.copysign(1.0, p.k * p.eps)
    theta = s * np.arcsin(math.sqrt(p.m) * sn) + p.c_theta
    x = (p.k / p.eps) * (dn0 * cn - sn0 * w) + p.cx
    y = dn0 * w + p.m * sn0 * cn + p.cy
    return State(scalarize(x), scalarize(y), scalarize(theta))


def hamiltonian_column(p: Form2Params, zeta1, zeta3, v, omega):
    """Hamiltonian-like function T_f[(1 - mu) + mu (v^2 + w^2)/2 + z1 v + z3 w]."""
    return p.tf * ((1.0 - p.mu) + 0.5 * p.mu * (v * v + omega * omega)
                   + zeta1 * v + zeta3 * omega)


def sample(p: Form2Params, tau) -> Trajectory:
    tau = np.atleast_1d(check_tau(tau))
    st = eval_state(p, tau)
    ctl = eval_control(p, tau)
    z = np.column_stack([np.atleast_1d(c) for c in eval_costates(p, tau)])
    h = hamiltonian_column(p, z[:, 0], z[:, 2], np.asarray(ctl.v), np.asarray(ctl.omega))
    return Trajectory(tau, st, ctl, z, COSTATE_NAMES, np.atleast_1d(h))


def zeta4_rate(p: Form2Params, tau):
    """d zeta_4 / d tau = -1 + mu + (zeta_1^2 + zeta_3^2) / (2 mu)."""
    z1, _, z3 = eval_costates(p, tau)
    return -1.0 + p.mu + (np.square(z1) + np.square(z3)) / (2.0 * p.mu)


def costate_geometry(p: Form2Params, delta):
    """Point on the cylinder intersection curve at angle delta."""
    delta = np.asarray(delta, dtype=float)
    if np.any(delta < 0.0) or np.any(delta > 2.0 * math.pi):
        raise ProblemError("delta must lie in [0, 2 pi]")
    kk = abs(p.k)
    z1 = kk * np.sin(delta)
    rad = p.eps * p.eps - z1 * z1
    if np.any(rad < -1e-15 * p.eps * p.eps):
        raise ProblemError("eps^2 < 2 mu (1 - mu) sin^2(delta): zeta_2 is imaginary")
    z2 = -math.copysign(1.0, p.eps) * np.sqrt(np.maximum(rad, 0.0))
    return scalarize(z1), scalarize(z2), scalarize(kk * np.cos(delta))


def residual(eps: float, tf: float, problem: Problem, k_sign: int = -1):
    p = derive_params(eps, tf, problem.mu, k_sign)
    st = eval_state(p, 1.0)
    xf, yf = problem.target
    return np.array([st.x - xf, st.y - yf])


def eps_box(mu: float, sign: float) -> tuple[float, float]:
    lo = k_magnitude(mu) / math.sqrt(M_MAX)
    return (lo, EPS_MAX) if sign > 0 else (-EPS_MAX, -lo)


def default_guess(problem: Problem) -> tuple[float, float]:
    q0, t0 = _form1_ladder(problem)[0]
    return _eps_from_q(problem.mu, q0, problem.target[1]), t0


def _eps_from_q(mu, q, y):
    # eps = z and m = Q/2 link the two formulations
    return math.copysign(math.sqrt(4.0 * mu * (1.0 - mu) / q), y)


def solve(problem: Problem, guess=None, n_starts: int = 16, seed: int = 42,
          tol: float = 1e-10) -> tuple[Form2Params, SolveReport]:
    """Solve for (eps, T_f) with both signs of K; keep the cheaper root.

    The cost of any extremal is 2 T_f (1 - mu), so the smaller final time
    wins; near-ties go to K < 0.
    """
    mu = problem.mu
    xf, yf = problem.target
    if yf == 0.0:
        p = straight_line(mu, problem.r, 1 if xf < 0.0 else -1)
        root = np.array([p.eps, p.tf])
        return p, SolveReport(True, 0, 0.0, root, root, 0, 0.0, "straight line")
    sign = math.copysign(1.0, yf)
    box = (eps_box(mu, sign), TF_BOX)
    found = []
    failures = []
    for k_sign in (-1, 1):
        def fn(x, k_sign=k_sign):
            return residual(x[0], x[1], problem, k_sign)
        if guess is None:
            centers = [(_eps_from_q(mu, q, yf), t) for q, t in _form1_ladder(problem)]
            rep = best_root(fn, centers, box, tol=tol)
        else:
            rep = multistart(fn, guess, box, n_starts, seed, tol)
        rep.extra["k_sign"] = k_sign
        (found if rep.converged else failures).append(rep)
    if not found:
        best = min(failures, key=lambda r: r.final_residual_norm
                   if np.isfinite(r.final_residual_norm) else np.inf)
        raise NonConvergence("form2: no root for either sign of K", best)
    rep = found[0]
    for other in found[1:]:
        if other.root[1] < rep.root[1] * (1.0 - TIE_RTOL):
            rep = other
    eps, tf = rep.root
    return derive_params(eps, tf, mu, rep.extra["k_sign"]), rep
