"""Oracles kept in the test tree, independent of the package's integrators."""

import numpy as np
from scipy.integrate import solve_ivp


def pmp_rollout(c1, c2, l30, tf, mu, tau=None):
    """Integrate (x, y, theta, lambda_3) with DOP853 from the origin.

    Controls follow from minimising the Hamiltonian pointwise:
    v = -(c1 cos(theta) + c2 sin(theta)) / mu, omega = -lambda_3 / mu.
    """
    def rhs(_, s):
        x, y, th, l3 = s
        v = -(c1 * np.cos(th) + c2 * np.sin(th)) / mu
        return [tf * v * np.cos(th), tf * v * np.sin(th), -tf * l3 / mu,
                tf * (c1 * v * np.sin(th) - c2 * v * np.cos(th))]

    sol = solve_ivp(rhs, (0.0, 1.0), [0.0, 0.0, 0.0, l30], method="DOP853",
                    rtol=1e-13, atol=1e-14, t_eval=tau, dense_output=False)
    return sol.y


def kinematic_rollout(control_fn, tf, tau=None):
    """Integrate the unicycle under a control law given as a function of tau."""
    def rhs(t, s):
        c = control_fn(t)
        v, w = float(c.v), float(c.omega)
        return [tf * v * np.cos(s[2]), tf * v * np.sin(s[2]), tf * w]

    sol = solve_ivp(rhs, (0.0, 1.0), [0.0, 0.0, 0.0], method="DOP853",
                    rtol=1e-13, atol=1e-14, t_eval=tau)
    return sol.y
