"""Figure output for the CLI (files only, non-interactive backend)."""

from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed salt and no timestamp so identical data gives identical SVG bytes
plt.rcParams["svg.hashsalt"] = "etoc"
_METADATA = {"svg": {"Date": None}, "png": {"Software": None}}


def _save(fig, path: str) -> str:
    ext = os.path.splitext(path)[1].lstrip(".").lower() or "svg"
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, suffix="." + ext)
    os.close(fd)
    try:
        fig.savefig(tmp, format=ext, metadata=_METADATA.get(ext), bbox_inches="tight")
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.remove(tmp)
    return path


def plot_trajectory(traj, path: str, title: str = "") -> str:
    """Path in the plane next to v(tau) and omega(tau)."""
    fig, (ax_xy, ax_u) = plt.subplots(1, 2, figsize=(10, 4.2))
    st, ctl = traj.state, traj.control
    ax_xy.plot(st.x, st.y, lw=1.8)
    ax_xy.plot([0.0], [0.0], "ko", ms=4)
    ax_xy.plot([st.x[-1]], [st.y[-1]], "rx", ms=7)
    ax_xy.set_aspect("equal", adjustable="datalim")
    ax_xy.set_xlabel("x")
    ax_xy.set_ylabel("y")
    ax_xy.grid(alpha=0.3)
    ax_u.plot(traj.tau, ctl.v, label="v")
    ax_u.plot(traj.tau, ctl.omega, label="omega")
    ax_u.set_xlabel("tau")
    ax_u.legend(frameon=False)
    ax_u.grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    return _save(fig, path)


def plot_sweep_paths(trajs: dict, path: str, title: str = "") -> str:
    """Overlay of the paths of a terminal-angle sweep, keyed by angle in degrees."""
    fig, ax = plt.subplots(figsize=(6, 6))
    cmap = plt.get_cmap("viridis")
    keys = sorted(trajs)
    for i, a in enumerate(keys):
        st = trajs[a].state
        ax.plot(st.x, st.y, color=cmap(i / max(len(keys) - 1, 1)), lw=1.3,
                label=f"{a:.4g} deg")
    phi = np.linspace(0.0, 2.0 * np.pi, 361)
    r = max(np.hypot(trajs[a].state.x[-1], trajs[a].state.y[-1]) for a in keys) if keys else 1.0
    ax.plot(r * np.cos(phi), r * np.sin(phi), "k:", lw=0.6)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.grid(alpha=0.3)
    if len(keys) <= 18:
        ax.legend(fontsize=7, frameon=False, loc="best")
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_control_cylinder(trajs: dict, path: str, title: str = "") -> str:
    """Controls of a sweep drawn in (v, omega, tau) space."""
    fig = plt.figure(figsize=(6.5, 6))
    ax = fig.add_subplot(projection="3d")
    cmap = plt.get_cmap("viridis")
    keys = sorted(trajs)
    for i, a in enumerate(keys):
        t = trajs[a]
        ax.plot(t.control.v, t.control.omega, t.tau,
                color=cmap(i / max(len(keys) - 1, 1)), lw=1.2)
    ax.set_xlabel("v")
    ax.set_ylabel("omega")
    ax.set_zlabel("tau")
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_sweep_summary(alpha_deg, tf, transition, path: str) -> str:
    """Final time and transition indicator against the terminal angle."""
    fig, (ax_t, ax_c) = plt.subplots(2, 1, figsize=(6, 5.5), sharex=True)
    ax_t.plot(alpha_deg, tf, "o-", ms=3)
    ax_t.set_ylabel("T_f")
    ax_t.grid(alpha=0.3)
    if transition is not None:
        ax_c.plot(alpha_deg, transition, "s-", ms=3)
        ax_c.axhline(0.0, color="k", lw=0.6)
        ax_c.set_ylabel("T_f z - mu (2n+1) K(m)")
    ax_c.set_xlabel("alpha [deg]")
    ax_c.grid(alpha=0.3)
    return _save(fig, path)


def plot_bench_grid(q_values, tf_values, converged, path: str) -> str:
    """Convergence matrix of the guess grid."""
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.imshow(np.asarray(converged, dtype=float), origin="lower", cmap="RdYlGn",
              vmin=0.0, vmax=1.0)
    ax.set_xticks(range(len(tf_values)), [f"{v:g}" for v in tf_values])
    ax.set_yticks(range(len(q_values)), [f"{v:g}" for v in q_values])
    ax.set_xlabel("T_f guess")
    ax.set_ylabel("Q guess")
    return _save(fig, path)
