"""Command-line interface: ``etoc plan | sweep | bench | verify``.

Exit codes: 0 success, 1 usage error, 2 a solve did not converge,
3 a verification check failed.  Data goes to files (or to stdout with
``--format stdout``); diagnostics always go to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import form1, shooting, verify
from .model import Formulation, Problem, ProblemError, cost_quadrature
from .output import (MODULES, SolutionFileError, dumps, fmt, load_solution, rows_csv,
                     summary, trajectory_csv, trajectory_json, write_atomic)
from .rootsolve import NonConvergence

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_SEED = 42
N_UNKNOWNS = {Formulation.FORM1: 2, Formulation.FORM2: 2, Formulation.FIXEDV: 3}
BENCH_Q = (1.19, 1.20, 1.21, 1.22, 1.23)
BENCH_TF = (0.92, 0.93, 0.94, 0.95, 0.96)
BENCH_NLP_CENTER = (1.21, 0.94)
BENCH_SHOOT_CENTER = (-0.17, -0.89, -0.68, 0.94)


class UsageError(Exception):
    """Bad flags or inputs; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------- config

@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one command."""

    command: str
    mu: float = 0.5
    target: tuple | None = None  # ("xy", x, y) or ("polar", r, alpha_deg)
    formulation: Formulation = Formulation.FORM1
    samples: int = 201
    guess: tuple | None = None
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "csv"
    figures: str = "svg"

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise UsageError(f"unknown configuration keys: {unknown}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        try:
            Formulation(self.formulation)
        except ValueError:
            raise UsageError(f"unknown formulation {self.formulation!r}") from None
        object.__setattr__(self, "formulation", Formulation(self.formulation))
        if self.samples < 2:
            raise UsageError("--samples must be at least 2")
        if self.format not in ("csv", "json", "stdout"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.guess is not None and len(self.guess) != N_UNKNOWNS[self.formulation]:
            raise UsageError(f"--guess for {self.formulation.value} needs "
                             f"{N_UNKNOWNS[self.formulation]} values, got {len(self.guess)}")
        if self.target is not None:
            self.problem()

    def problem(self, alpha_deg: float | None = None) -> Problem:
        try:
            if alpha_deg is not None:
                return Problem.polar(self.target[1], alpha_deg, self.mu, self.formulation)
            kind, a, b = self.target
            if kind == "xy":
                return Problem.cartesian(a, b, self.mu, self.formulation)
            return Problem.polar(a, b, self.mu, self.formulation)
        except ProblemError as exc:
            raise UsageError(str(exc)) from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected finite numbers, got {text!r}")
    return vals


def _target_from_args(args, need: bool, default_r: float | None = None):
    xy = (args.x is not None, args.y is not None)
    polar = (args.r is not None, args.alpha_deg is not None)
    if any(xy) and any(polar):
        raise UsageError("give either --x/--y or --r/--alpha-deg, not both")
    if any(xy):
        if not all(xy):
            raise UsageError("--x and --y must be given together")
        return ("xy", args.x, args.y)
    if all(polar):
        return ("polar", args.r, args.alpha_deg)
    if args.alpha_deg is not None and default_r is not None:
        return ("polar", default_r, args.alpha_deg)
    if args.r is not None and not need:
        return ("polar", args.r, 0.0)
    if need:
        raise UsageError("a target is required: --x X --y Y or --r R --alpha-deg A")
    return ("polar", default_r if default_r is not None else 1.0, 0.0)


def _config(args, command: str, need_target: bool = True, default_r=None) -> RunConfig:
    return RunConfig.from_mapping({
        "command": command,
        "mu": args.mu,
        "target": _target_from_args(args, need_target, default_r),
        "formulation": args.formulation,
        "samples": args.samples,
        "guess": args.guess,
        "seed": args.seed,
        "out": args.out,
        "format": getattr(args, "format", "csv"),
        "figures": args.figures,
    })


def worker_count() -> int:
    """Worker processes from ETOC_NUM_THREADS: unset means 1, 0 means all CPUs."""
    raw = os.environ.get("ETOC_NUM_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"ETOC_NUM_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("ETOC_NUM_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def _pmap(fn, items, workers: int):
    """Ordered map; identical results whether or not it runs in parallel."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- solving

def solve_problem(problem: Problem, guess=None, seed: int = DEFAULT_SEED):
    mod = MODULES[problem.formulation]
    if guess is None:
        return mod.solve(problem, seed=seed)
    return mod.solve(problem, guess=guess, seed=seed)


def solution_cost(params, traj) -> float:
    return cost_quadrature(traj.control.v, traj.control.omega, params.tf, params.mu, traj.tau)


def _verify_samples(samples: int) -> int:
    return max(samples, 101)


def _figure(kind: str, fn, *args) -> str | None:
    """Render one figure; a plotting failure is reported but never fatal."""
    try:
        from . import plotting
        return getattr(plotting, fn)(*args)
    except Exception as exc:  # noqa: BLE001 - figures are a side product
        _log(f"warning: {kind} figure not written: {exc}")
        return None


# ---------------------------------------------------------------- plan

def cmd_plan(args) -> int:
    cfg = _config(args, "plan")
    problem = cfg.problem()
    mod = MODULES[problem.formulation]
    try:
        params, rep = solve_problem(problem, cfg.guess, cfg.seed)
    except NonConvergence as exc:
        _log(f"error: {exc}")
        if exc.report is not None:
            _log(f"  best residual {exc.report.final_residual_norm:.3g} ({exc.report.message})")
        return EXIT_NONCONVERGENCE
    traj = mod.sample(params, np.linspace(0.0, 1.0, cfg.samples))
    report = verify.check_all(params, problem, _verify_samples(cfg.samples))
    doc = summary(problem, params, solution_cost(params, traj), report)
    form = problem.formulation

    if cfg.format == "stdout":
        sys.stdout.write(trajectory_csv(traj, form))
        sys.stdout.flush()
    out = cfg.out if cfg.out is not None else (None if cfg.format == "stdout" else "etoc_out")
    if out is not None:
        if cfg.format == "json":
            write_atomic(os.path.join(out, "trajectory.json"), trajectory_json(traj, form))
        else:
            write_atomic(os.path.join(out, "trajectory.csv"), trajectory_csv(traj, form))
        write_atomic(os.path.join(out, "summary.json"), dumps(doc))
        if cfg.figures != "none":
            _figure("trajectory", "plot_trajectory", traj,
                    os.path.join(out, f"trajectory.{cfg.figures}"),
                    f"{form.value}  T_f = {params.tf:.6g}")
        _log(f"wrote {os.path.abspath(out)}")

    _log(f"{form.value}: T_f={params.tf:.12g} cost={doc['cost']:.12g} "
         f"iterations={rep.iterations} residual={rep.final_residual_norm:.3g}")
    if rep.extra.get("branch", 0) > 0:
        _log("warning: only a higher-branch extremal was found; it satisfies the necessary "
             "conditions but may not be the minimum-time solution")
    if not report.passed:
        _log(f"verification failed: {', '.join(report.failed)}")
        return EXIT_VERIFY
    _log("verification passed")
    return EXIT_OK


# ---------------------------------------------------------------- sweep

PARAM_COLUMNS = {
    Formulation.FORM1: ("q", "eta", "n"),
    Formulation.FORM2: ("eps", "k_sign", "m"),
    Formulation.FIXEDV: ("m", "vc"),
}


def _sweep_one(job):
    """Solve and verify one sweep target (top level so workers can pickle it)."""
    problem, seed, n_verify = job
    try:
        params, rep = solve_problem(problem, None, seed)
    except NonConvergence as exc:
        return None, None, str(exc)
    return params, verify.check_all(params, problem, n_verify), rep.message


def cmd_sweep(args) -> int:
    cfg = _config(args, "sweep", need_target=False, default_r=1.0)
    if args.alpha_steps < 1:
        raise UsageError("--alpha-steps must be at least 1")
    if cfg.target[0] != "polar":
        raise UsageError("sweep targets are polar: use --r, not --x/--y")
    if cfg.guess is not None:
        raise UsageError("--guess is not supported by sweep")
    alphas = np.linspace(args.alpha_start, args.alpha_end, args.alpha_steps)
    problems = [cfg.problem(float(a)) for a in alphas]
    form = cfg.formulation
    mod = MODULES[form]
    jobs = [(p, cfg.seed, _verify_samples(cfg.samples)) for p in problems]
    results = _pmap(_sweep_one, jobs, worker_count())

    out = cfg.out or "etoc_sweep"
    tau = np.linspace(0.0, 1.0, cfg.samples)
    header = ["index", "alpha_deg", "converged", "verified", "tf",
              *PARAM_COLUMNS[form], "cost", "v_final", "omega_final",
              "transition_condition", "file"]
    rows, records, trajs = [], [], {}
    n_fail_solve = n_fail_verify = 0
    for i, (a, prob, (params, report, message)) in enumerate(zip(alphas, problems, results)):
        rec = {"index": i, "alpha_deg": float(a), "alpha_rad": prob.alpha}
        if params is None:
            n_fail_solve += 1
            rec.update(converged=False, verified=False, message=message)
            records.append(rec)
            rows.append([i, fmt(a), 0, 0, "nan", *["nan"] * len(PARAM_COLUMNS[form]),
                         "nan", "nan", "nan", "nan", ""])
            _log(f"alpha={a:g}: no convergence ({message})")
            continue
        traj = mod.sample(params, tau)
        trajs[float(a)] = traj
        fname = f"trajectory_{i:03d}.csv"
        write_atomic(os.path.join(out, fname), trajectory_csv(traj, form))
        trans = form1.transition_condition(params) if form is Formulation.FORM1 else math.nan
        cost = solution_cost(params, traj)
        n_fail_verify += not report.passed
        pd = params.to_dict()
        rows.append([i, fmt(a), 1, int(report.passed), fmt(params.tf),
                     *[fmt(pd[c]) if isinstance(pd[c], float) else pd[c]
                       for c in PARAM_COLUMNS[form]],
                     fmt(cost), fmt(traj.control.v[-1]), fmt(traj.control.omega[-1]),
                     fmt(trans), fname])
        rec.update(converged=True, verified=report.passed, tf=params.tf, cost=cost,
                   params=pd, transition_condition=trans, file=fname,
                   verification=report.to_dict())
        records.append(rec)
        if not report.passed:
            _log(f"alpha={a:g}: verification failed: {', '.join(report.failed)}")

    write_atomic(os.path.join(out, "sweep.csv"), rows_csv(header, rows))
    trans_vals = [r.get("transition_condition", math.nan) for r in records]
    finite = [t for t in trans_vals if t is not None and math.isfinite(t)]
    changes = int(sum(1 for s, t in zip(finite, finite[1:]) if (s < 0.0) != (t < 0.0)))
    doc = {"formulation": form.value, "mu": cfg.mu, "r": cfg.target[1],
           "alpha_deg": [float(a) for a in alphas],
           "converged": len(alphas) - n_fail_solve, "verified": sum(
               1 for r in records if r.get("verified")),
           "transition_sign_changes": changes if form is Formulation.FORM1 else None,
           "results": records}
    write_atomic(os.path.join(out, "sweep.json"), dumps(doc))
    if cfg.figures != "none" and trajs:
        ext = cfg.figures
        _figure("sweep paths", "plot_sweep_paths", trajs,
                os.path.join(out, f"sweep_paths.{ext}"), f"{form.value}, r = {cfg.target[1]:g}")
        _figure("control cylinder", "plot_control_cylinder", trajs,
                os.path.join(out, f"control_cylinder.{ext}"))
        ok = [r for r in records if r.get("converged")]
        _figure("sweep summary", "plot_sweep_summary",
                [r["alpha_deg"] for r in ok], [r["tf"] for r in ok],
                [r["transition_condition"] for r in ok] if form is Formulation.FORM1 else None,
                os.path.join(out, f"sweep_summary.{ext}"))
    _log(f"sweep: {len(alphas) - n_fail_solve}/{len(alphas)} converged, "
         f"{n_fail_verify} verification failures; wrote {os.path.abspath(out)}")
    if n_fail_solve:
        return EXIT_NONCONVERGENCE
    return EXIT_VERIFY if n_fail_verify else EXIT_OK


# ---------------------------------------------------------------- bench

def _bench_nlp(job):
    problem, guess = job
    t0 = time.perf_counter()
    try:
        params, rep = form1.solve(problem, guess=guess, n_starts=1)
        root, ok, its, res = (params.q, params.tf), True, rep.iterations, rep.final_residual_norm
    except NonConvergence as exc:
        rep = exc.report
        root, ok = (math.nan, math.nan), False
        its = rep.iterations if rep else 0
        res = rep.final_residual_norm if rep else math.inf
    return ok, its, res, root, time.perf_counter() - t0


def _bench_shoot(job):
    problem, guess, n_steps = job
    t0 = time.perf_counter()
    try:
        root, rep = shooting.solve_shooting(problem, guess, n_steps)
        ok, its, res = True, rep.iterations, rep.final_residual_norm
    except NonConvergence as exc:
        rep = exc.report
        root, ok, its, res = np.full(4, math.nan), False, rep.iterations, rep.final_residual_norm
    return ok, its, res, tuple(float(v) for v in root), time.perf_counter() - t0


def random_guesses(center, n: int, spread: float, seed: int) -> np.ndarray:
    """n guesses center * U(1 - spread, 1 + spread), componentwise."""
    rng = np.random.default_rng(seed)
    c = np.asarray(center, dtype=float)
    return c * rng.uniform(1.0 - spread, 1.0 + spread, size=(n, c.size))


def _stats(results, center=None, atol: float = 0.01) -> dict:
    its = [r[1] for r in results if r[0]]
    extra = {}
    if center is not None:
        # converged and within the printed two-decimal precision of the optimum
        extra["at_optimum"] = sum(1 for r in results if r[0] and np.all(
            np.abs(np.asarray(r[3]) - np.asarray(center)) <= atol))
    return {
        "attempts": len(results),
        "converged": sum(1 for r in results if r[0]),
        **extra,
        "rate": (sum(1 for r in results if r[0]) / len(results)) if results else math.nan,
        "iterations_mean": float(np.mean(its)) if its else None,
        "iterations_max": int(max(its)) if its else None,
        "wall_time_total": float(sum(r[4] for r in results)),
    }


def cmd_bench(args) -> int:
    if args.shooting_starts < 0 or args.nlp_starts < 0:
        raise UsageError("start counts must be nonnegative")
    if not 0.0 < args.spread < 1.0:
        raise UsageError("--spread must lie in (0, 1)")
    cfg = _config(args, "bench", need_target=False, default_r=1.0)
    if cfg.target == ("polar", 1.0, 0.0) and args.alpha_deg is None and args.x is None:
        cfg = dataclasses.replace(cfg, target=("polar", 1.0, 30.0))
    problem = cfg.problem().with_formulation(Formulation.FORM1)
    if len(args.shooting_center) != 4 or len(args.nlp_center) != 2:
        raise UsageError("--nlp-center needs 2 values and --shooting-center 4")
    workers = worker_count()
    out = cfg.out or "etoc_bench"

    grid = [(q, t) for q in args.grid_q for t in args.grid_tf]
    grid_res = _pmap(_bench_nlp, [(problem, g) for g in grid], workers)
    nlp_g = random_guesses(args.nlp_center, args.nlp_starts, args.spread, cfg.seed)
    shoot_g = random_guesses(args.shooting_center, args.shooting_starts, args.spread,
                             cfg.seed + 1)
    nlp_res = _pmap(_bench_nlp, [(problem, tuple(g)) for g in nlp_g], workers)
    shoot_res = _pmap(_bench_shoot, [(problem, tuple(g), args.shooting_steps)
                                     for g in shoot_g], workers)

    grid_rows = [[fmt(q), fmt(t), int(r[0]), r[1], fmt(r[2]), fmt(r[3][0]), fmt(r[3][1])]
                 for (q, t), r in zip(grid, grid_res)]
    write_atomic(os.path.join(out, "bench_grid.csv"), rows_csv(
        ["q_guess", "tf_guess", "converged", "iterations", "residual", "q", "tf"], grid_rows))
    rnd_rows = []
    for i, (g, r) in enumerate(zip(nlp_g, nlp_res)):
        rnd_rows.append(["nlp", i, *[fmt(v) for v in g], "", "", int(r[0]), r[1],
                         fmt(r[2]), *[fmt(v) for v in r[3]], "", ""])
    for i, (g, r) in enumerate(zip(shoot_g, shoot_res)):
        rnd_rows.append(["shooting", i, *[fmt(v) for v in g], int(r[0]), r[1],
                         fmt(r[2]), *[fmt(v) for v in r[3]]])
    write_atomic(os.path.join(out, "bench_random.csv"), rows_csv(
        ["method", "index", "g1", "g2", "g3", "g4", "converged", "iterations", "residual",
         "r1", "r2", "r3", "r4"], rnd_rows))

    ok_roots = np.array([r[3] for r in grid_res if r[0]])
    doc = {
        "problem": {"mu": problem.mu, "r": problem.r, "alpha_rad": problem.alpha},
        "seed": cfg.seed,
        "spread": args.spread,
        "grid": {"q": list(args.grid_q), "tf": list(args.grid_tf),
                 "matrix": [[int(grid_res[i * len(args.grid_tf) + j][0])
                             for j in range(len(args.grid_tf))]
                            for i in range(len(args.grid_q))],
                 "root_min": ok_roots.min(axis=0) if ok_roots.size else None,
                 "root_max": ok_roots.max(axis=0) if ok_roots.size else None,
                 **_stats(grid_res)},
        "nlp_random": {"center": list(args.nlp_center),
                       **_stats(nlp_res, args.nlp_center)},
        "shooting_random": {"center": list(args.shooting_center),
                            "n_steps": args.shooting_steps,
                            **_stats(shoot_res, args.shooting_center)},
    }
    write_atomic(os.path.join(out, "bench.json"), dumps(doc))
    if cfg.figures != "none":
        _figure("bench grid", "plot_bench_grid", args.grid_q, args.grid_tf,
                doc["grid"]["matrix"], os.path.join(out, f"bench_grid.{cfg.figures}"))
    g, n, s = doc["grid"], doc["nlp_random"], doc["shooting_random"]
    _log(f"grid: {g['converged']}/{g['attempts']} converged")
    _log(f"random guesses: nlp {n['converged']}/{n['attempts']}, "
         f"shooting {s['converged']}/{s['attempts']}")
    _log(f"wrote {os.path.abspath(out)}")
    return EXIT_OK


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    if args.solution is not None:
        if any(v is not None for v in (args.x, args.y, args.r, args.alpha_deg, args.guess)):
            raise UsageError("--solution cannot be combined with target or guess flags")
        try:
            with open(args.solution, encoding="utf-8") as fh:
                problem, params = load_solution(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {args.solution}: {exc.strerror}") from None
        except SolutionFileError as exc:
            raise UsageError(f"{args.solution}: {exc}") from None
        samples = args.samples
    else:
        cfg = _config(args, "verify")
        problem, samples = cfg.problem(), cfg.samples
        try:
            params, _ = solve_problem(problem, cfg.guess, cfg.seed)
        except NonConvergence as exc:
            _log(f"error: {exc}")
            return EXIT_NONCONVERGENCE
    report = verify.check_all(params, problem, _verify_samples(samples))
    doc = {"formulation": problem.formulation.value, **report.to_dict()}
    if args.cross:
        try:
            cross = verify.cross_check(problem.with_formulation(Formulation.FORM1))
        except NonConvergence as exc:
            _log(f"error: cross check: {exc}")
            return EXIT_NONCONVERGENCE
        doc["cross"] = cross.to_dict()
        doc["passed"] = bool(report.passed and cross.passed)
        report.checks.extend(cross.checks)
    text = dumps(doc)
    sys.stdout.write(text)
    if args.out is not None:
        write_atomic(os.path.join(args.out, "verification.json"), text)
    if not report.passed:
        _log(f"verification failed: {', '.join(report.failed)}")
        return EXIT_VERIFY
    _log("verification passed")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_problem_flags(p, with_format: bool = True):
    p.add_argument("--mu", type=float, default=0.5, help="time/energy weight in (0, 1)")
    p.add_argument("--x", type=float, help="target x (with --y)")
    p.add_argument("--y", type=float, help="target y (with --x)")
    p.add_argument("--r", type=float, help="target distance (with --alpha-deg)")
    p.add_argument("--alpha-deg", type=float, help="target bearing in degrees")
    p.add_argument("--formulation", choices=[f.value for f in Formulation], default="form1")
    p.add_argument("--samples", type=int, default=201, help="trajectory samples (default 201)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="multistart seed (default 42)")
    p.add_argument("--guess", type=_float_list, help="comma-separated initial unknowns")
    p.add_argument("--out", help="output directory")
    p.add_argument("--figures", choices=["svg", "png", "none"], default="svg",
                   help="figure format written next to the data (default svg)")
    if with_format:
        p.add_argument("--format", choices=["csv", "json", "stdout"], default="csv",
                       help="trajectory table format; stdout prints CSV data only")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="etoc", description="Energy-time optimal unicycle planner.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan", help="solve one maneuver")
    _add_problem_flags(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", help="solve a fan of terminal angles")
    _add_problem_flags(p, with_format=False)
    p.add_argument("--alpha-start", type=float, default=5.0)
    p.add_argument("--alpha-end", type=float, default=90.0)
    p.add_argument("--alpha-steps", type=int, default=12)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="guess-grid and random-start convergence study")
    _add_problem_flags(p, with_format=False)
    p.add_argument("--grid-q", type=_float_list, default=BENCH_Q)
    p.add_argument("--grid-tf", type=_float_list, default=BENCH_TF)
    p.add_argument("--nlp-center", type=_float_list, default=BENCH_NLP_CENTER)
    p.add_argument("--shooting-center", type=_float_list, default=BENCH_SHOOT_CENTER)
    p.add_argument("--nlp-starts", type=int, default=200)
    p.add_argument("--shooting-starts", type=int, default=200)
    p.add_argument("--shooting-steps", type=int, default=shooting.DEFAULT_STEPS)
    p.add_argument("--spread", type=float, default=0.5,
                   help="relative half-width of the random guess box (default 0.5)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check a solution against every invariant")
    _add_problem_flags(p, with_format=False)
    p.add_argument("--solution", help="summary JSON written by plan")
    p.add_argument("--cross", action="store_true", help="also compare form1 with form2")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE
    except ProblemError as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
