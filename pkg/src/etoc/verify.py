"""Invariant checks over solved trajectories.

Every check records its worst violation next to an explicit tolerance so
the report can be read (and serialised) without knowing any defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fixedv, form1, form2, shooting
from .fixedv import FixedVParams
from .form1 import Form1Params
from .form2 import Form2Params
from .model import Problem, cost_quadrature

FD_STEP = 1e-6
TOL = {
    "hamiltonian": 1e-8,
    "control_circle": 1e-10,
    "cylinder": 1e-10,
    "parabola": 1e-10,
    "zeta4_rate": 1e-10,
    "initial_state": 1e-10,
    "terminal_position": 1e-8,
    "transversality": 1e-10,
    "lambda4_zero": 1e-10,
    "zeta1_final": 1e-10,
    "zeta5_periodicity": 1e-8,
    "ode_residual": 1e-6,
    "cost_identity": 1e-6,
    "constant_speed": 0.0,
    "agreement": 1e-6,
    "replay_endpoint": 1e-6,
    "derived_constants": 1e-12,
}


@dataclass(frozen=True)
class Check:
    name: str
    max_violation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_violation) and self.max_violation <= self.tolerance)

    def to_dict(self) -> dict:
        return {"name": self.name, "max_violation": float(self.max_violation),
                "tolerance": float(self.tolerance), "passed": self.passed}


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, violation, tol_key: str | None = None) -> None:
        v = float(np.max(np.abs(violation))) if np.size(violation) else 0.0
        self.checks.append(Check(name, v, TOL[tol_key or name]))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _interior(n_samples: int) -> np.ndarray:
    tau = np.linspace(0.0, 1.0, n_samples)
    return tau[(tau >= 2 * FD_STEP) & (tau <= 1.0 - 2 * FD_STEP)]


def _fd(fn, tau):
    """Central differences of each component returned by fn."""
    hi, lo = fn(tau + FD_STEP), fn(tau - FD_STEP)
    return [(np.asarray(a) - np.asarray(b)) / (2.0 * FD_STEP) for a, b in zip(hi, lo)]


def _state_tuple(mod, p):
    def fn(tau):
        s = mod.eval_state(p, tau)
        return s.x, s.y, s.theta
    return fn


def _kinematics_checks(rep, mod, p, problem, n_samples):
    tau = _interior(n_samples)
    dx, dy, dth = _fd(_state_tuple(mod, p), tau)
    st, ctl = mod.eval_state(p, tau), mod.eval_control(p, tau)
    rep.add("ode_state", np.concatenate([
        dx - p.tf * ctl.v * np.cos(st.theta),
        dy - p.tf * ctl.v * np.sin(st.theta),
        dth - p.tf * ctl.omega]), "ode_residual")
    s0 = mod.eval_state(p, 0.0)
    rep.add("initial_state", [s0.x, s0.y, s0.theta])
    s1 = mod.eval_state(p, 1.0)
    xf, yf = problem.target
    rep.add("terminal_position", [s1.x - xf, s1.y - yf])


def _circle(rep, ctl, mu):
    rep.add("control_circle", ctl.v ** 2 + ctl.omega ** 2 - 2.0 * (1.0 - mu) / mu)


def _cost_identity(rep, ctl, tau, tf, mu):
    rep.add("cost_identity",
            cost_quadrature(ctl.v, ctl.omega, tf, mu, tau) - 2.0 * tf * (1.0 - mu))


def _rederive(p, problem):
    if isinstance(p, Form1Params):
        if p.degenerate:
            return form1.straight_line(p.mu, problem.r, p.reverse)
        return form1.derive_params(p.q, p.tf, p.mu, p.n, p.mirror, p.reverse)
    if isinstance(p, Form2Params):
        if p.degenerate:
            return form2.straight_line(p.mu, problem.r, p.k_sign)
        return form2.derive_params(p.eps, p.tf, p.mu, p.k_sign)
    if p.degenerate:
        q = fixedv.straight_line_params(p.tf, p.vc, p.mu)
        return type(p)(**{**q.to_dict(), "mirror": p.mirror})
    return fixedv.derive_params(p.m, p.tf, p.vc, p.mu, p.mirror)


def _derived_constants(rep, p, problem):
    """Stored dependent constants against a fresh derivation from the unknowns."""
    try:
        fresh = _rederive(p, problem).to_dict()
    except ValueError:
        rep.add("derived_constants", math.inf)
        return
    worst = 0.0
    for k, a in p.to_dict().items():
        b = fresh[k]
        if isinstance(a, (bool, int)) or isinstance(b, (bool, int)):
            worst = max(worst, 0.0 if a == b else math.inf)
        elif math.isinf(a) or math.isinf(b):
            worst = max(worst, 0.0 if a == b else math.inf)
        else:
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    rep.add("derived_constants", worst)


def _check_form1(p: Form1Params, problem, n_samples, rep):
    tau = np.linspace(0.0, 1.0, n_samples)
    traj = form1.sample(p, tau)
    rep.add("hamiltonian", traj.hamiltonian)
    _circle(rep, traj.control, p.mu)
    _kinematics_checks(rep, form1, p, problem, n_samples)
    ti = _interior(n_samples)
    (dl3,) = _fd(lambda t: (form1.eval_costates(p, t)[2],), ti)
    l1, l2, _, _ = form1.eval_costates(p, ti)
    st, ctl = form1.eval_state(p, ti), form1.eval_control(p, ti)
    rhs = p.tf * (l1 * ctl.v * np.sin(st.theta) - l2 * ctl.v * np.cos(st.theta))
    rep.add("ode_costate", dl3 - rhs, "ode_residual")
    rep.add("transversality", form1.eval_costates(p, 1.0)[2])
    rep.add("lambda4_zero", traj.costates[:, 3])
    _cost_identity(rep, traj.control, tau, p.tf, p.mu)


def _check_form2(p: Form2Params, problem, n_samples, rep):
    tau = np.linspace(0.0, 1.0, n_samples)
    traj = form2.sample(p, tau)
    z1, z2, z3 = traj.costates.T
    _circle(rep, traj.control, p.mu)
    rep.add("cylinder_13", z1 ** 2 + z3 ** 2 - p.k ** 2, "cylinder")
    rep.add("cylinder_12", z1 ** 2 + z2 ** 2 - p.eps ** 2, "cylinder")
    rep.add("zeta4_rate", form2.zeta4_rate(p, tau))
    _kinematics_checks(rep, form2, p, problem, n_samples)
    ti = _interior(n_samples)
    d1, d2, d3 = _fd(lambda t: form2.eval_costates(p, t), ti)
    a1, a2, a3 = (np.asarray(c) for c in form2.eval_costates(p, ti))
    c = p.tf / p.mu
    rep.add("ode_costate", np.concatenate([d1 + c * a2 * a3, d2 - c * a1 * a3,
                                           d3 - c * a1 * a2]), "ode_residual")
    rep.add("transversality", form2.eval_costates(p, 1.0)[2])
    _cost_identity(rep, traj.control, tau, p.tf, p.mu)


def _check_fixedv(p: FixedVParams, problem, n_samples, rep):
    tau = np.linspace(0.0, 1.0, n_samples)
    traj = fixedv.sample(p, tau)
    z1, z2, z3, z5 = traj.costates.T
    rep.add("cylinder", z1 ** 2 + z2 ** 2 - p.kc ** 2)
    rep.add("parabola", 0.5 * z3 ** 2 - z1 * p.mu * p.vc - p.cc)
    rep.add("zeta4_rate", fixedv.zeta4_rate(p, tau))
    v = np.asarray(traj.control.v)
    rep.add("constant_speed", v - v[0])
    _kinematics_checks(rep, fixedv, p, problem, n_samples)
    ti = _interior(n_samples)
    d1, d2, d3, d5 = _fd(lambda t: fixedv.eval_costates(p, t), ti)
    a1, a2, a3, _ = (np.asarray(c) for c in fixedv.eval_costates(p, ti))
    c = p.tf / p.mu
    rep.add("ode_costate", np.concatenate([
        d1 + c * a2 * a3, d2 - c * a1 * a3, d3 + p.tf * p.vc * a2,
        d5 + p.tf * p.mu * p.vc + p.tf * a1]), "ode_residual")
    end = fixedv.eval_costates(p, 1.0)
    rep.add("transversality", end[2])
    rep.add("zeta1_final", end[0] + p.cc / (p.mu * p.vc))
    rep.add("zeta5_periodicity", end[3] - fixedv.eval_costates(p, 0.0)[3])


def check_all(solution, problem: Problem, n_samples: int = 101) -> VerificationReport:
    """Run every invariant that applies to the solution's formulation."""
    rep = VerificationReport()
    if isinstance(solution, Form1Params):
        _check_form1(solution, problem, n_samples, rep)
    elif isinstance(solution, Form2Params):
        _check_form2(solution, problem, n_samples, rep)
    elif isinstance(solution, FixedVParams):
        _check_fixedv(solution, problem, n_samples, rep)
    else:
        raise TypeError(f"unsupported solution type {type(solution).__name__}")
    _derived_constants(rep, solution, problem)
    return rep


def check_shot(shot, problem: Problem, n_steps: int = shooting.DEFAULT_STEPS) -> VerificationReport:
    """Conservation of H along a shooting rollout and its terminal conditions."""
    rep = VerificationReport()
    ro = shooting.rk4_rollout(*shot, problem.mu, n_steps)
    rep.add("hamiltonian", ro.hamiltonian)
    xf, yf = problem.target
    rep.add("terminal_position", [ro.x[-1] - xf, ro.y[-1] - yf])
    rep.add("transversality", ro.lambda3[-1])
    return rep


def replay_error(mod, p, problem: Problem, n_steps: int = shooting.DEFAULT_STEPS) -> float:
    """Endpoint miss of an RK4 replay of the closed-form controls."""
    out = shooting.replay_controls(lambda t: mod.eval_control(p, t), p.tf, n_steps)
    xf, yf = problem.target
    return math.hypot(out[-1, 0] - xf, out[-1, 1] - yf)


def cross_check(problem: Problem, n_samples: int = 101,
                n_steps: int = shooting.DEFAULT_STEPS) -> VerificationReport:
    """Solve form1 and form2 independently and compare them point by point."""
    p1, _ = form1.solve(problem)
    p2, _ = form2.solve(problem)
    rep = VerificationReport()
    rep.add("tf_agreement", p1.tf - p2.tf, "agreement")
    rep.add("eps_vs_z", abs(p2.eps) - p1.z, "agreement")
    rep.add("m_vs_q_half", p2.m - 0.5 * p1.q, "agreement")
    tau = np.linspace(0.0, 1.0, n_samples)
    s1, s2 = form1.eval_state(p1, tau), form2.eval_state(p2, tau)
    c1, c2 = form1.eval_control(p1, tau), form2.eval_control(p2, tau)
    rep.add("state_agreement", np.concatenate([s1.x - s2.x, s1.y - s2.y,
                                               s1.theta - s2.theta]), "agreement")
    rep.add("control_agreement", np.concatenate([c1.v - c2.v, c1.omega - c2.omega]),
            "agreement")
    rep.add("replay_form1", replay_error(form1, p1, problem, n_steps), "replay_endpoint")
    rep.add("replay_form2", replay_error(form2, p2, problem, n_steps), "replay_endpoint")
    return rep
