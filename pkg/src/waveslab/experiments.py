"""Configured studies producing one CSV row per refinement level.

A study is described by a flat YAML mapping.  Common keys:

- ``suite``: one of ``tau_refine``, ``p_refine``, ``spacetime_refine``,
  ``long_time``, ``effectivity``, ``adaptive``.
- ``case``: ``case1``, ``case2`` or ``case3``; ``alpha`` tunes case2
  (must exceed 1.5), ``mode_m``/``mode_n``/``omega`` tune case3.
- ``T``: final time (default 1.0); ``long_time`` instead takes ``T_list``.
- ``tau`` or ``tau_list``: time step(s); each step must divide the final
  time up to a 2 percent rounding allowance (the step lists in common use
  are decimal roundings of 1/N).
- ``p_t`` or ``p_t_list``: temporal degree(s), between 2 and 10.
- ``p_x``: spatial degree (default 2, at most 5); ``h``: spatial mesh size
  on (-1, 1)^2 (default 0.4), must similarly divide the side length 2.
- ``theta`` (default 0.5), ``max_iters`` (default 25), ``eta_tol``
  (default 0.0), ``initial_n`` (default 5): adaptive loop controls.
- ``include_osc``: add data oscillation to the reported total (default
  false; the oscillation column is always filled).
- ``out``: output CSV path; ``seed``: optional unsigned integer recorded
  for reproducibility.

Unknown keys are rejected, and all validation problems are reported at
once.  A fixed configuration yields identical CSV output up to the wall
time column.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .adaptive import run_adaptive, total_dofs
from .errors import compute_errors, make_case, problem_data
from .estimator import estimate
from .slabsolver import TimeGrid, march
from .spacefem import MAX_DEGREE, TensorSpace

SUITES = (
    "tau_refine", "p_refine", "spacetime_refine", "long_time", "effectivity", "adaptive",
)
CASES = ("case1", "case2", "case3")

COLUMNS = (
    "level", "h", "tau", "p_x", "p_t", "N", "dofs",
    "max_W1inf_L2", "max_Linf_H1", "L2_H1", "H1deriv_L2L2", "Linf_L2", "jump",
    "eta", "eta1", "osc", "kappa", "wall_time",
)

_DEFAULTS = {
    "alpha": 1.75, "mode_m": 1, "mode_n": 1, "omega": float(np.sqrt(2.0)),
    "T": 1.0, "p_x": 2, "h": 0.4, "theta": 0.5, "include_osc": False,
    "max_iters": 25, "eta_tol": 0.0, "initial_n": 5, "out": "results.csv",
    "seed": None, "p_t": 2,
}

_KNOWN_KEYS = set(_DEFAULTS) | {
    "suite", "case", "T_list", "tau", "tau_list", "p_t_list",
}


class ConfigError(Exception):
    """Carries every validation problem found in a configuration."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def _steps_per(total: float, step: float) -> int | None:
    """Number of steps if `step` divides `total` up to rounding, else None."""
    if step <= 0 or total <= 0:
        return None
    n = round(total / step)
    if n < 1 or abs(total / step - n) > 0.02 * n:
        return None
    return int(n)


@dataclass(frozen=True)
class Config:
    suite: str
    case: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, key):
        try:
            return self.values[key]
        except KeyError as exc:
            raise AttributeError(key) from exc


def parse_config(source) -> Config:
    """Load and validate a study configuration.

    `source` is a mapping, a YAML string, or a path to a YAML file.
    Raises ConfigError listing every violation.
    """
    if isinstance(source, dict):
        raw = dict(source)
    else:
        text = Path(source).read_text() if Path(str(source)).exists() else str(source)
        raw = yaml.safe_load(text)
    if not isinstance(raw, dict):
        raise ConfigError(["configuration must be a flat mapping"])

    problems = []
    for key in sorted(set(raw) - _KNOWN_KEYS):
        problems.append(f"unknown key {key!r}")

    suite = raw.get("suite")
    if suite not in SUITES:
        problems.append(f"suite must be one of {SUITES}, got {suite!r}")
    case = raw.get("case")
    if case not in CASES:
        problems.append(f"case must be one of {CASES}, got {case!r}")

    values = dict(_DEFAULTS)
    for key in raw:
        if key in _KNOWN_KEYS and key not in ("suite", "case"):
            values[key] = raw[key]

    def check_num(key, cond, msg, cast=float):
        if key not in values or values[key] is None:
            return None
        try:
            val = cast(values[key])
        except (TypeError, ValueError):
            problems.append(f"{key} must be numeric, got {values[key]!r}")
            return None
        if not cond(val):
            problems.append(f"{key} {msg}, got {val}")
            return None
        values[key] = val
        return val

    check_num("T", lambda v: v > 0, "must be positive")
    check_num("alpha", lambda v: v > 1.5, "must exceed 1.5")
    check_num("omega", lambda v: v > 0, "must be positive")
    check_num("theta", lambda v: 0 < v <= 1, "must lie in (0, 1]")
    check_num("eta_tol", lambda v: v >= 0, "must be nonnegative")
    check_num("p_t", lambda v: 2 <= v <= 10, "must lie in [2, 10]", cast=int)
    check_num("p_x", lambda v: 1 <= v <= MAX_DEGREE,
              f"must lie in [1, {MAX_DEGREE}]", cast=int)
    check_num("mode_m", lambda v: v >= 1, "must be a positive integer", cast=int)
    check_num("mode_n", lambda v: v >= 1, "must be a positive integer", cast=int)
    check_num("max_iters", lambda v: v >= 1, "must be >= 1", cast=int)
    check_num("initial_n", lambda v: v >= 1, "must be >= 1", cast=int)
    if values.get("seed") is not None:
        check_num("seed", lambda v: v >= 0, "must be a nonnegative integer", cast=int)
    if not isinstance(values["include_osc"], bool):
        problems.append(f"include_osc must be boolean, got {values['include_osc']!r}")

    h = values.get("h")
    if isinstance(h, (int, float)) and h > 0:
        if _steps_per(2.0, float(h)) is None:
            problems.append(f"h must divide the domain side 2, got {h}")
        else:
            values["h"] = float(h)
    else:
        problems.append(f"h must be a positive number, got {h!r}")

    def check_list(key, item_cond, msg, cast=float):
        if key not in values:
            return
        seq = values[key]
        if not isinstance(seq, (list, tuple)) or not seq:
            problems.append(f"{key} must be a nonempty list")
            return
        out = []
        for item in seq:
            try:
                val = cast(item)
            except (TypeError, ValueError):
                problems.append(f"{key} entries must be numeric, got {item!r}")
                return
            if not item_cond(val):
                problems.append(f"{key} entry {msg}, got {val}")
                return
            out.append(val)
        values[key] = out

    T = values.get("T", 1.0)

    def tau_ok(t):
        return isinstance(T, float) and _steps_per(T, t) is not None

    if "tau" in values:
        check_num("tau", tau_ok, f"must divide T={T}")
    if "tau_list" in values:
        check_list("tau_list", tau_ok, f"must divide T={T}")
    if "p_t_list" in values:
        check_list("p_t_list", lambda v: 2 <= v <= 10, "must lie in [2, 10]", cast=int)
    if "T_list" in values:
        check_list("T_list", lambda v: v > 0, "must be positive")
        if suite == "long_time" and "tau" in values and not problems:
            for Ti in values["T_list"]:
                if _steps_per(Ti, values["tau"]) is None:
                    problems.append(f"tau {values['tau']} must divide T={Ti}")

    requirements = {
        "tau_refine": ("tau_list",),
        "p_refine": ("p_t_list", "tau"),
        "spacetime_refine": ("tau_list",),
        "long_time": ("T_list", "tau"),
        "effectivity": ("tau_list", "p_t_list"),
        "adaptive": (),
    }
    for key in requirements.get(suite, ()):
        if key not in raw:
            problems.append(f"suite {suite!r} requires key {key!r}")

    if suite == "spacetime_refine" and isinstance(values.get("p_t"), int):
        if values["p_t"] + 1 > MAX_DEGREE:
            problems.append(
                f"spacetime_refine pairs p_x = p_t + 1 and needs p_t <= {MAX_DEGREE - 1}"
            )
    if case == "case2" and suite in ("spacetime_refine",):
        problems.append("spacetime_refine is meant for case3")

    if problems:
        raise ConfigError(problems)
    return Config(suite=suite, case=case, values=values)


def _build_case(config: Config):
    if config.case == "case1":
        return make_case("case1")
    if config.case == "case2":
        return make_case("case2", alpha=config.alpha)
    return make_case(
        "case3", m=config.mode_m, n=config.mode_n, omega=config.omega,
    )


@dataclass
class ExperimentResult:
    columns: tuple
    rows: list
    config: Config


def _level_row(level, h, tau, p_x, p_t, grid, space, errs, report, wall):
    kappa = report.eta / errs.Linf_L2 if errs.Linf_L2 > 0 else float("inf")
    row = {
        "level": level, "h": h, "tau": tau, "p_x": p_x, "p_t": p_t,
        "N": grid.n_intervals, "dofs": total_dofs(grid, space),
        "eta": report.eta, "eta1": report.eta1, "osc": report.osc,
        "kappa": kappa, "wall_time": wall,
    }
    row.update(errs.as_dict())
    return row


def _uniform_level(case, config, h, tau, p_x, p_t, T=None):
    T = config.T if T is None else T
    n = round(T / tau)
    space = TensorSpace(round(2.0 / h), round(2.0 / h), p_x)
    grid = TimeGrid.uniform(T, n, p_t)
    data = problem_data(case)
    started = time.perf_counter()
    sol = march(data, space, grid)
    report = estimate(sol, data, include_osc=config.include_osc)
    errs = compute_errors(sol, case)
    wall = time.perf_counter() - started
    return grid, space, errs, report, wall


def run_suite(config: Config) -> ExperimentResult:
    """Execute the configured study and collect one row per level."""
    case = _build_case(config)
    rows = []

    if config.suite in ("tau_refine", "spacetime_refine"):
        for level, tau in enumerate(config.tau_list):
            if config.suite == "spacetime_refine":
                h, p_x = tau, config.p_t + 1
            else:
                h, p_x = config.h, config.p_x
            grid, space, errs, report, wall = _uniform_level(
                case, config, h, tau, p_x, config.p_t,
            )
            rows.append(_level_row(
                level, h, grid.T / grid.n_intervals, p_x, config.p_t,
                grid, space, errs, report, wall,
            ))
    elif config.suite == "p_refine":
        for level, p_t in enumerate(config.p_t_list):
            grid, space, errs, report, wall = _uniform_level(
                case, config, config.h, config.tau, config.p_x, p_t,
            )
            rows.append(_level_row(
                level, config.h, grid.T / grid.n_intervals, config.p_x, p_t,
                grid, space, errs, report, wall,
            ))
    elif config.suite == "long_time":
        for level, T in enumerate(config.T_list):
            grid, space, errs, report, wall = _uniform_level(
                case, config, config.h, config.tau, config.p_x, config.p_t, T=T,
            )
            rows.append(_level_row(
                level, config.h, grid.T / grid.n_intervals, config.p_x, config.p_t,
                grid, space, errs, report, wall,
            ))
    elif config.suite == "effectivity":
        level = 0
        for p_t in config.p_t_list:
            for tau in config.tau_list:
                grid, space, errs, report, wall = _uniform_level(
                    case, config, config.h, tau, config.p_x, p_t,
                )
                rows.append(_level_row(
                    level, config.h, grid.T / grid.n_intervals, config.p_x, p_t,
                    grid, space, errs, report, wall,
                ))
                level += 1
    elif config.suite == "adaptive":
        nx = round(2.0 / config.h)
        space = TensorSpace(nx, nx, config.p_x)
        grid = TimeGrid.uniform(config.T, config.initial_n, config.p_t)
        result = run_adaptive(
            problem_data(case), space, grid,
            theta=config.theta, max_iters=config.max_iters,
            eta_tol=config.eta_tol, include_osc=config.include_osc,
        )
        for level, rec in enumerate(result.history):
            taus = np.diff(rec.grid.nodes)
            row = {
                "level": level, "h": config.h, "tau": float(taus.min()),
                "p_x": config.p_x, "p_t": config.p_t,
                "N": rec.grid.n_intervals, "dofs": rec.dofs,
                "eta": rec.report.eta, "eta1": rec.report.eta1,
                "osc": rec.report.osc,
                "kappa": rec.kappa if rec.kappa is not None else float("nan"),
                "wall_time": rec.wall_time,
            }
            row.update(rec.errors.as_dict())
            rows.append(row)
    else:
        raise ConfigError([f"suite {config.suite!r} is not implemented"])

    return ExperimentResult(columns=COLUMNS, rows=rows, config=config)


def emit_csv(result: ExperimentResult, path) -> Path:
    """Write rows to CSV: UTF-8, dot decimal, 13 significant digits."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(result.columns)
        for row in result.rows:
            out = []
            for key in result.columns:
                val = row[key]
                if isinstance(val, (int, np.integer)):
                    out.append(str(int(val)))
                else:
                    out.append(f"{float(val):.12e}")
            writer.writerow(out)
    return path


def run_from_file(config_path, out=None, suite=None, seed=None) -> Path:
    """Parse a config file, run its suite, and write the CSV."""
    raw = yaml.safe_load(Path(config_path).read_text())
    if not isinstance(raw, dict):
        raise ConfigError(["configuration must be a flat mapping"])
    if suite is not None:
        raw["suite"] = suite
    if seed is not None:
        raw["seed"] = seed
    config = parse_config(raw)
    result = run_suite(config)
    return emit_csv(result, out if out is not None else config.out)
