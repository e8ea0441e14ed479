"""Command-line front end: figure data, sweeps, capacity tables and fuzzing.

Every command writes one CSV (``--out``, default ``<command>.csv``) and
prints a one-line summary. Exit status: 0 success, 1 bound violation or
failed check, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bounds, partitions, qinfo
from .matrixio import MatrixFormatError, read_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("fig1", "fig2", "fig3", "fig4", "bounds-sweep", "capacity", "partitions", "qinfo-fuzz")
CONFIG_KEYS = {"command", "out", "seed", "grid", "trials", "workers", "scenario"}
SEED_LIMIT = 2 ** 64


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """CSV cell: 12 significant digits for reals, lowercase booleans."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _int_list(text: str) -> tuple:
    return tuple(int(t) for t in str(text).split(",") if t.strip())


# grid keys per command: name -> (parser, default)
GRID_KEYS: dict = {
    "fig1": {"points": (int, 41), "lo": (float, 0.01), "hi": (float, 10.0), "x0_ratio": (float, 100.0)},
    "fig2": {"points": (int, 41), "lo": (float, 1e-4), "hi": (float, 10.0)},
    "fig3": {"points": (int, 41), "lo": (float, 0.01), "hi": (float, 10.0), "tr_ratio": (float, 0.5)},
    "fig4": {"max_denominator": (int, 8)},
    "bounds-sweep": {"mu_lo": (float, -5.0), "mu_hi": (float, 200.0)},
    "capacity": {"n_values": (_int_list, (100, 1000, 10000)), "time": (float, 1.0)},
    "partitions": {"n_values": (_int_list, (100, 1000, 10000)), "multiplicity": (int, 1)},
    "qinfo-fuzz": {"max_dim": (int, 6), "two_way_max_dim": (int, 3)},
}
DEFAULT_TRIALS = {"bounds-sweep": 10_000, "qinfo-fuzz": 1000}


@dataclass
class RunConfig:
    command: str
    out: Optional[str] = None
    seed: int = 0
    grid: dict = field(default_factory=dict)
    trials: Optional[int] = None
    workers: int = 1
    scenario: Optional[str] = None

    def resolved_grid(self) -> dict:
        allowed = GRID_KEYS[self.command]
        unknown = sorted(set(self.grid) - set(allowed))
        if unknown:
            raise UsageError(f"unknown grid key(s) for {self.command}: {', '.join(unknown)}; "
                             f"allowed: {', '.join(sorted(allowed))}")
        values = {}
        for key, (parse, default) in allowed.items():
            if key in self.grid:
                try:
                    values[key] = parse(self.grid[key])
                except (TypeError, ValueError):
                    raise UsageError(f"bad value for grid key {key}: {self.grid[key]!r}") from None
            else:
                values[key] = default
        return values


@dataclass
class Outcome:
    header: list
    rows: list
    summary: str
    ok: bool


# --------------------------------------------------------------------------
# commands

def _executor(cfg: RunConfig):
    return ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else nullcontext(None)


def _sweep_outcome(grid: bounds.SweepGrid, cfg: RunConfig) -> Outcome:
    with _executor(cfg) as ex:
        rows = bounds.sweep(grid, ex)
    violations = sum(1 for r in rows if not r.error and not r.satisfied)
    failures = sum(1 for r in rows if r.error)
    ratios = [r.ratio for r in rows if not r.error]
    summary = f"max ratio: {fmt(max(ratios)) if ratios else 'nan'}; violations: {violations}"
    if failures:
        summary += f"; failed points: {failures}"
    table = [[float(r.g), r.axis, r.ratio, r.satisfied, r.curve, r.error] for r in rows]
    return Outcome(["g", "axis", "ratio", "satisfied", "curve", "error"], table, summary,
                   violations == 0 and failures == 0)


def run_fig1(cfg, grid):
    return _sweep_outcome(bounds.figure1_grid(grid["points"], grid["lo"], grid["hi"], grid["x0_ratio"]), cfg)


def run_fig2(cfg, grid):
    return _sweep_outcome(bounds.figure2_grid(grid["points"], grid["lo"], grid["hi"]), cfg)


def run_fig3(cfg, grid):
    return _sweep_outcome(bounds.figure3_grid(grid["points"], grid["lo"], grid["hi"], grid["tr_ratio"]), cfg)


def run_fig4(cfg, grid):
    curve = partitions.capacity_ratio_curve(partitions.farey_grid(grid["max_denominator"]))
    ratios = [r for _, r in curve]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    summary = f"points: {len(curve)}; endpoints: {fmt(ratios[0])}, {fmt(ratios[-1])}; " \
              f"strictly decreasing: {fmt(decreasing)}"
    return Outcome(["g", "ratio"], [[float(g), r] for g, r in curve], summary, decreasing)


def run_bounds_sweep(cfg, grid):
    n = cfg.trials if cfg.trials is not None else DEFAULT_TRIALS["bounds-sweep"]
    with _executor(cfg) as ex:
        points = bounds.randomized_sweep(n, cfg.seed, ex, mu_range=(grid["mu_lo"], grid["mu_hi"]))
    rows, violations, failures, worst = [], 0, 0, -math.inf
    for p in points:
        s = p.setup
        general = p.general.ratio if p.general else math.nan
        tight = p.tight.ratio if p.tight else math.nan
        satisfied = bool(p.general and p.general.satisfied and (p.tight is None or p.tight.satisfied))
        if p.error:
            failures += 1
        elif not satisfied:
            violations += 1
        worst = max([worst] + [r for r in (general, tight) if not math.isnan(r)])
        rows.append([float(s.g), s.left.temperature, s.right.temperature, s.left.chemical_potential,
                     s.right.chemical_potential, general, tight, satisfied, p.error])
    summary = f"setups: {n}; max ratio: {fmt(worst)}; violations: {violations}"
    if failures:
        summary += f"; failed points: {failures}"
    header = ["g", "TL", "TR", "muL", "muR", "general", "tight", "satisfied", "error"]
    return Outcome(header, rows, summary, violations == 0 and failures == 0)


def run_capacity(cfg, grid):
    t = grid["time"]
    if not t > 0.0:
        raise UsageError("time must be positive")
    rows, ok = [], True
    for n in grid["n_values"]:
        if n < 1:
            raise UsageError("n_values must be positive")
        # P in units of h / T^2 equals N
        power = n * partitions.H_PLANCK / t ** 2
        exact_b = partitions.exact_capacity(n, None, t).bits_per_time
        exact_f = partitions.exact_capacity(n, 1, t).bits_per_time
        bound = partitions.capacity_bound(power)
        try:
            asym_b = partitions.capacity_boson_asym(power, t).bits_per_time
            asym_f = partitions.capacity_fermion_asym(power, t).bits_per_time
        except partitions.DomainError:
            asym_b = asym_f = math.nan
        below = asym_b < bound and asym_f < bound
        ok = ok and below
        rows.append([n, t, n, exact_b, asym_b, exact_f, asym_f, bound, below])
    summary = f"rows: {len(rows)}; asymptotic capacities below bound: {fmt(ok)}"
    header = ["N", "T", "P_over_h_per_T2", "exact_boson", "asym_boson",
              "exact_fermion", "asym_fermion", "bound", "below_bound"]
    return Outcome(header, rows, summary, ok)


def run_partitions(cfg, grid):
    m = grid["multiplicity"]
    if m != 1:
        raise UsageError("the asymptotic column is the distinct-part formula; multiplicity must be 1")
    rows, worst = [], 0.0
    for n in grid["n_values"]:
        if n < 1:
            raise UsageError("n_values must be positive")
        exact = partitions.count_partitions(n, m)
        log_asym = partitions.log_asymptotic_distinct_count(n)
        relerr = abs(math.expm1(log_asym - math.log(exact)))
        worst = max(worst, relerr)
        rows.append([n, exact, partitions.asymptotic_distinct_count(n), relerr])
    return Outcome(["N", "exact", "asymptotic", "relerr"], rows,
                   f"rows: {len(rows)}; max relerr: {fmt(worst)}", True)


def run_qinfo_fuzz(cfg, grid):
    trials = cfg.trials if cfg.trials is not None else DEFAULT_TRIALS["qinfo-fuzz"]
    if grid["max_dim"] < 2 or grid["two_way_max_dim"] < 2:
        raise UsageError("dimensions must be at least 2")
    rows, violations = [], 0
    if cfg.scenario is not None:
        ch = read_scenario(cfg.scenario)
        res = qinfo.generalized_holevo2_check(ch)
        violations += not res.holds
        rows.append(["scenario", "two-way", ch.left.dim, ch.right.dim, res.info, res.bound, res.holds])
    children = np.random.SeedSequence(cfg.seed).spawn(trials)
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        d = int(rng.integers(2, grid["max_dim"] + 1))
        e = qinfo.random_ensemble(d, int(rng.integers(1, 6)), rng)
        m = qinfo.random_povm(d, int(rng.integers(1, 6)), rng)
        res = qinfo.verify_holevo(e, m)
        violations += not res.holds
        rows.append([i, "holevo", d, "", res.info, res.bound, res.holds])
        top = grid["two_way_max_dim"] + 1
        ch = qinfo.random_two_way_channel(int(rng.integers(2, top)), int(rng.integers(2, top)), rng)
        res = qinfo.generalized_holevo2_check(ch)
        violations += not res.holds
        rows.append([i, "two-way", ch.left.dim, ch.right.dim, res.info, res.bound, res.holds])
    return Outcome(["trial", "check", "dim_l", "dim_r", "info", "bound", "holds"], rows,
                   f"checks: {len(rows)}; violations: {violations}", violations == 0)


RUNNERS: dict = {
    "fig1": run_fig1,
    "fig2": run_fig2,
    "fig3": run_fig3,
    "fig4": run_fig4,
    "bounds-sweep": run_bounds_sweep,
    "capacity": run_capacity,
    "partitions": run_partitions,
    "qinfo-fuzz": run_qinfo_fuzz,
}


def write_csv(path: str, header: list, rows: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        if cfg.command not in RUNNERS:
            raise UsageError(f"unknown command {cfg.command!r}")
        if not 0 <= cfg.seed < SEED_LIMIT:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if cfg.trials is not None and cfg.trials < 1:
            raise UsageError("trials must be positive")
        if cfg.workers < 1:
            raise UsageError("workers must be positive")
        grid = cfg.resolved_grid()
        outcome = RUNNERS[cfg.command](cfg, grid)
        write_csv(cfg.out or f"{cfg.command}.csv", outcome.header, outcome.rows)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (MatrixFormatError, qinfo.InvariantError, qinfo.DimensionError) as exc:
        print(f"error: invalid scenario: {exc}", file=stderr)
        return EXIT_USAGE
    except partitions.ResourceLimitError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    print(outcome.summary, file=stdout)
    return EXIT_OK if outcome.ok else EXIT_FAIL


# --------------------------------------------------------------------------
# argument handling

def _grid_pairs(items) -> dict:
    grid = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"grid override must be key=value, got {item!r}")
        grid[key.strip()] = value.strip()
    return grid


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="channel-limits", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--out", help="CSV output path (default: <command>.csv)")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed (default 0)")
    p.add_argument("--grid", nargs="+", action="extend", metavar="KEY=VALUE",
                   help="override grid parameters")
    p.add_argument("--trials", type=int, help="number of random trials")
    p.add_argument("--workers", type=int, help="worker processes for sweeps (default 1)")
    p.add_argument("--scenario", help="matrix file with a two-way channel (qinfo-fuzz)")
    p.add_argument("--config", help="JSON file with defaults; flags take precedence")
    return p


def _load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
    if "grid" in data and not isinstance(data["grid"], dict):
        raise UsageError("config 'grid' must be an object")
    return data


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    base = _load_config(args.config) if args.config else {}
    if "command" in base and base["command"] != args.command:
        raise UsageError(f"config is for {base['command']!r}, not {args.command!r}")
    grid = {k: str(v) if not isinstance(v, list) else ",".join(map(str, v))
            for k, v in base.get("grid", {}).items()}
    grid.update(_grid_pairs(args.grid))

    def pick(name, default=None):
        flag = getattr(args, name)
        return flag if flag is not None else base.get(name, default)

    return RunConfig(
        command=args.command,
        out=pick("out"),
        seed=int(pick("seed", 0)),
        grid=grid,
        trials=pick("trials"),
        workers=int(pick("workers", 1)),
        scenario=pick("scenario"),
    )


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:  # argparse reports usage errors this way
        return EXIT_USAGE if exc.code else EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
