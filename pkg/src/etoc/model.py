"""Problem definition, unicycle kinematics, Hamiltonian and cost quadrature.

Time is normalised, tau = t / T_f in [0, 1], so every derivative below is
taken per unit tau and carries a factor of T_f.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

# The control circle radius sqrt(2 mu (1 - mu)) / mu blows up as mu -> 0,
# so the weight is kept away from both ends of (0, 1).
MU_MIN = 1e-3


class ProblemError(ValueError):
    """Invalid planning request."""


class Formulation(str, enum.Enum):
    FORM1 = "form1"
    FORM2 = "form2"
    FIXEDV = "fixedv"


def check_mu(mu: float) -> float:
    mu = float(mu)
    if not (MU_MIN <= mu <= 1.0 - MU_MIN):
        raise ProblemError(f"mu={mu!r} outside [{MU_MIN}, {1.0 - MU_MIN}]")
    return mu


def check_tf(tf: float) -> float:
    tf = float(tf)
    if not (math.isfinite(tf) and tf > 0.0):
        raise ProblemError(f"final time must be positive, got {tf!r}")
    return tf


@dataclass(frozen=True)
class Problem:
    """Point-to-point request from the origin (heading 0) to a target.

    The target is stored in polar form; use :meth:`cartesian` for (x, y)
    input.
    """

    mu: float
    r: float
    alpha: float
    formulation: Formulation = Formulation.FORM1

    def __post_init__(self):
        check_mu(self.mu)
        if not (math.isfinite(self.r) and self.r > 0.0):
            raise ProblemError(f"target radius must be positive, got {self.r!r}")
        if not math.isfinite(self.alpha):
            raise ProblemError("target angle must be finite")
        object.__setattr__(self, "formulation", Formulation(self.formulation))

    @classmethod
    def cartesian(cls, x: float, y: float, mu: float,
                  formulation: Formulation | str = Formulation.FORM1) -> "Problem":
        if x == 0.0 and y == 0.0:
            raise ProblemError("target coincides with the start point")
        return cls(mu, math.hypot(x, y), math.atan2(y, x), Formulation(formulation))

    @classmethod
    def polar(cls, r: float, alpha_deg: float, mu: float,
              formulation: Formulation | str = Formulation.FORM1) -> "Problem":
        return cls(mu, r, math.radians(alpha_deg), Formulation(formulation))

    @property
    def xf(self) -> float:
        return self.r * math.cos(self.alpha)

    @property
    def yf(self) -> float:
        return self.r * math.sin(self.alpha)

    @property
    def target(self) -> tuple[float, float]:
        # exact zeros on the axes keep the degenerate branches reachable
        x, y = self.xf, self.yf
        if abs(y) < 1e-15 * self.r:
            y = 0.0
        if abs(x) < 1e-15 * self.r:
            x = 0.0
        return x, y

    def with_formulation(self, formulation: Formulation | str) -> "Problem":
        return Problem(self.mu, self.r, self.alpha, Formulation(formulation))


@dataclass(frozen=True)
class State:
    x: float | np.ndarray
    y: float | np.ndarray
    theta: float | np.ndarray


@dataclass(frozen=True)
class Control:
    v: float | np.ndarray
    omega: float | np.ndarray


@dataclass(frozen=True)
class TrajectorySample:
    tau: float
    state: State
    control: Control
    costates: tuple[float, ...]
    hamiltonian: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ProblemError(f"tau={self.tau!r} outside [0, 1]")


@dataclass(frozen=True)
class Trajectory:
    """Column-wise samples of one closed-form solution."""

    tau: np.ndarray
    state: State
    control: Control
    costates: np.ndarray  # shape (n, k)
    costate_names: tuple[str, ...]
    hamiltonian: np.ndarray
    extra: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.tau)

    def __getitem__(self, i: int) -> TrajectorySample:
        s, c = self.state, self.control
        return TrajectorySample(
            float(self.tau[i]),
            State(float(s.x[i]), float(s.y[i]), float(s.theta[i])),
            Control(float(c.v[i]), float(c.omega[i])),
            tuple(float(v) for v in self.costates[i]),
            float(self.hamiltonian[i]),
        )


def scalarize(x):
    """0-d arrays become floats; anything else is returned as an array."""
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def check_tau(tau) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0.0) or np.any(tau > 1.0) or not np.all(np.isfinite(tau)):
        raise ProblemError("tau must lie in [0, 1]")
    return tau


def kinematics_rhs(state: State, control: Control, tf: float) -> np.ndarray:
    """d(x, y, theta)/dtau for the unicycle."""
    tf = check_tf(tf)
    v, th = control.v, state.theta
    rates = np.broadcast_arrays(tf * v * np.cos(th), tf * v * np.sin(th),
                                tf * np.asarray(control.omega, dtype=float))
    return np.stack(rates)


def hamiltonian(state: State, control: Control, lambdas, tf: float, mu: float):
    """Hamiltonian of the free-final-time problem with lambda_4 eliminated."""
    tf = check_tf(tf)
    l1, l2, l3 = lambdas
    v, w, th = control.v, control.omega, state.theta
    return tf * ((1.0 - mu) + 0.5 * mu * (w * w + v * v)
                 + l1 * v * np.cos(th) + l2 * v * np.sin(th) + l3 * w)


def cost_quadrature(v, omega, tf: float, mu: float, tau=None) -> float:
    """Weighted time/energy cost by composite Simpson quadrature.

    ``v`` and ``omega`` are samples on ``tau`` (equispaced on [0, 1] when
    ``tau`` is omitted).
    """
    v = np.asarray(v, dtype=float)
    omega = np.broadcast_to(np.asarray(omega, dtype=float), v.shape)
    if v.ndim != 1 or v.size < 2:
        raise ProblemError("cost quadrature needs at least 2 samples")
    tf = check_tf(tf)
    if tau is None:
        tau = np.linspace(0.0, 1.0, v.size)
    integrand = (1.0 - mu) + 0.5 * mu * (v * v + omega * omega)
    return float(tf * simpson(integrand, x=tau))


def straight_line_time(mu: float, r: float = 1.0) -> float:
    """Final time of the optimal straight run of length r (speed on the circle)."""
    return mu * r / math.sqrt(2.0 * mu * (1.0 - mu))
