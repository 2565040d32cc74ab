"""Experiment specs, seeded batch execution and CSV output.

A spec file is flat ``key = value`` text::

    # lines starting with '#' are comments
    controller = fixed_ratio(0.5)
    runs = 5
    master_seed = 7
    world.food_spawn_rate = 2.0
    p0 = 0.4                        # bare names resolve to world/params fields
    sweep params.phi1 = 0.0,0.1,0.2
    sweep num_robots = 10,20

Keys are ``controller``, ``controller.target``, ``controller.ratio``,
``master_seed``, ``runs``, ``output_dir``, ``per_robot``, any
``world.<field>`` or ``params.<field>`` (bare field names are accepted), and
``profile.<low|normal|high>.<speed|sense|cost>``. Tuple fields take
comma-separated numbers. ``sweep <path> = v1,v2,...`` adds a sweep axis over
a numeric field; the run grid is the cross product of all axes, first axis
slowest.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .controller import ActivityProfile, Controller, ControllerKind, ControllerParams, LevelMultipliers
from .engine import ConfigError, Sample, run
from .metrics import RunResult
from .rng import derive_seed
from .world import WorldConfig, from_quanta, validate_config

TIMESERIES_COLUMNS = ("step", "active_foragers", "stimulus", "mean_threshold", "food_available",
                      "cum_collected", "cum_move", "cum_comm", "cum_idle", "cum_net")
SUMMARY_HEAD = ("run_id", "seed", "controller")
SUMMARY_TAIL = ("trips", "successes", "failures", "collected", "spent_total", "net_energy",
                "efficiency")

_WORLD_DEFAULTS = {f.name: getattr(WorldConfig(), f.name) for f in fields(WorldConfig)}
_PARAM_DEFAULTS = {f.name: getattr(ControllerParams(), f.name) for f in fields(ControllerParams)}
_LEVELS = ("low", "normal", "high")
_LEVEL_ATTRS = ("speed", "sense", "cost")
_KINDS = {k.value for k in ControllerKind}


class SpecError(ValueError):
    """All problems found in a spec file, one message per entry."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("\n".join(errors))


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


@dataclass
class ExperimentSpec:
    world: WorldConfig = field(default_factory=WorldConfig)
    params: ControllerParams = field(default_factory=ControllerParams)
    profile: ActivityProfile = field(default_factory=ActivityProfile)
    controller: ControllerKind = ControllerKind.ADAPTIVE
    target: int = 0
    ratio: float = 0.0
    master_seed: int = 0
    runs: int = 1
    sweeps: list[tuple[str, list]] = field(default_factory=list)
    output_dir: str = "out"
    per_robot: bool = False

    def points(self) -> list[dict]:
        if not self.sweeps:
            return [{}]
        paths = [p for p, _ in self.sweeps]
        return [dict(zip(paths, combo)) for combo in itertools.product(*(v for _, v in self.sweeps))]

    def build(self, point: dict) -> tuple[WorldConfig, Controller]:
        """World and controller for one sweep point."""
        world, params = {}, {}
        target, ratio = self.target, self.ratio
        levels = {lvl: {} for lvl in _LEVELS}
        for path, value in point.items():
            section, _, name = path.partition(".")
            if section == "world":
                world[name] = value
            elif section == "params":
                params[name] = value
            elif path == "controller.target":
                target = value
            elif path == "controller.ratio":
                ratio = value
            else:  # profile.<level>.<attr>
                lvl, attr = name.split(".")
                levels[lvl][attr] = value
        profile = ActivityProfile(**{lvl: replace(getattr(self.profile, lvl), **kv)
                                     for lvl, kv in levels.items()})
        ctrl = Controller(self.controller, replace(self.params, **params), target=target,
                          ratio=ratio, profile=profile)
        return replace(self.world, **world), ctrl


def _canonical(key: str) -> str | None:
    """Map a (possibly bare) key to its dotted path, or None if unknown."""
    if key in ("controller.target", "controller.ratio"):
        return key
    section, dot, name = key.partition(".")
    if not dot:
        if key in _WORLD_DEFAULTS:
            return "world." + key
        if key in _PARAM_DEFAULTS:
            return "params." + key
        if key in ("target", "ratio"):
            return "controller." + key
        return None
    if section == "world" and name in _WORLD_DEFAULTS:
        return key
    if section == "params" and name in _PARAM_DEFAULTS:
        return key
    if section == "profile":
        lvl, _, attr = name.partition(".")
        if lvl in _LEVELS and attr in _LEVEL_ATTRS:
            return key
    return None


def _default_for(path: str):
    section, _, name = path.partition(".")
    if section == "world":
        return _WORLD_DEFAULTS[name]
    if section == "params":
        return _PARAM_DEFAULTS[name]
    if path == "controller.target":
        return 0
    return 0.0  # controller.ratio, profile.*


def _convert(text: str, like):
    text = text.strip()
    if isinstance(like, bool):
        low = text.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    if isinstance(like, int):
        return int(text)
    if isinstance(like, float):
        return float(text)
    if isinstance(like, tuple):
        parts = tuple(float(p) for p in text.split(","))
        if len(parts) != len(like):
            raise ValueError(f"expected {len(like)} comma-separated numbers")
        return parts
    raise ValueError(f"unsupported value {text!r}")


def _parse_controller(text: str):
    text = text.strip()
    name, paren, rest = text.partition("(")
    name = name.strip()
    if name not in _KINDS:
        raise ValueError(f"unknown controller {name!r}")
    kind = ControllerKind(name)
    if not paren:
        return kind, None
    if not rest.endswith(")"):
        raise ValueError("missing ')'")
    arg = rest[:-1].strip()
    if kind is ControllerKind.FIXED_NUMBER:
        return kind, int(arg)
    if kind is ControllerKind.FIXED_RATIO:
        return kind, float(arg)
    raise ValueError(f"controller {name!r} takes no argument")


def parse_spec(text: str) -> ExperimentSpec:
    """Parse spec-file text; raises :class:`SpecError` listing every problem."""
    errors: list[str] = []
    spec = ExperimentSpec()
    point: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: syntax error, expected 'key = value'")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key.startswith("sweep ") or key.startswith("sweep\t"):
                path = _canonical(key[5:].strip())
                if path is None:
                    errors.append(f"line {lineno}: unknown sweep key {key[5:].strip()!r}")
                    continue
                like = _default_for(path)
                if isinstance(like, bool) or not isinstance(like, (int, float)):
                    errors.append(f"line {lineno}: sweep key {path!r} is not a numeric field")
                    continue
                vals = [_convert(v, like) for v in value.split(",") if v.strip()]
                if not vals:
                    errors.append(f"line {lineno}: sweep {path!r} has no values")
                    continue
                spec.sweeps.append((path, vals))
            elif key == "controller":
                spec.controller, arg = _parse_controller(value)
                if arg is not None:
                    if spec.controller is ControllerKind.FIXED_NUMBER:
                        spec.target = arg
                    else:
                        spec.ratio = arg
            elif key == "master_seed":
                spec.master_seed = int(value)
            elif key == "runs":
                spec.runs = int(value)
            elif key == "output_dir":
                spec.output_dir = value
            elif key == "per_robot":
                spec.per_robot = _convert(value, True)
            else:
                path = _canonical(key)
                if path is None:
                    errors.append(f"line {lineno}: unknown key {key!r}")
                    continue
                point[path] = _convert(value, _default_for(path))
        except ValueError as exc:
            errors.append(f"line {lineno}: type error for {key!r}: {exc}")

    if errors:
        raise SpecError(errors)

    # fold the scalar settings into the base objects
    if "controller.target" in point:
        spec.target = point.pop("controller.target")
    if "controller.ratio" in point:
        spec.ratio = point.pop("controller.ratio")
    spec.world, ctrl = spec.build(point)
    spec.params, spec.profile = ctrl.params, ctrl.profile

    if spec.runs < 1:
        errors.append("runs: must be >= 1")
    if not 0 <= spec.ratio <= 1:
        errors.append("controller.ratio: must lie in [0, 1]")
    if spec.target < 0:
        errors.append("controller.target: must be >= 0")
    seen = set()
    for idx, pt in enumerate(spec.points()):
        world, ctrl = spec.build(pt)
        probs = [(f"world.{v.field}", v.message) for v in validate_config(world)]
        probs += [(f"params.{f}", m) for f, m in ctrl.params.violations()]
        probs += ctrl.profile.violations()
        if not 0 <= ctrl.ratio <= 1 and "controller.ratio" in pt:
            probs.append(("controller.ratio", "must lie in [0, 1]"))
        for f, m in probs:
            msg = f"{f}: {m}" + (f" (sweep point {idx})" if pt else "")
            if (f, m) not in seen:
                seen.add((f, m))
                errors.append(msg)
    if errors:
        raise SpecError(errors)
    return spec


def parse_spec_file(path: str | os.PathLike) -> ExperimentSpec:
    return parse_spec(Path(path).read_text())


def timeseries_csv(series: list[Sample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TIMESERIES_COLUMNS)
    for s in series:
        w.writerow((s.step, s.active_foragers, fmt(s.stimulus), fmt(s.mean_threshold),
                    s.food_available, fmt(from_quanta(s.cum_collected)), fmt(from_quanta(s.cum_move)),
                    fmt(from_quanta(s.cum_comm)), fmt(from_quanta(s.cum_idle)),
                    fmt(from_quanta(s.cum_net))))
    return buf.getvalue()


def summary_columns(spec: ExperimentSpec) -> list[str]:
    cols = list(SUMMARY_HEAD) + [p for p, _ in spec.sweeps] + list(SUMMARY_TAIL)
    if spec.per_robot:
        cols.append("net_energy_per_robot")
    return cols


def summary_row(spec: ExperimentSpec, point: dict, res: RunResult) -> list[str]:
    row = [res.run_id, str(res.seed), res.controller]
    row += [fmt(point[p]) for p, _ in spec.sweeps]
    row += [str(res.trips), str(res.successes), str(res.failures), fmt(res.collected),
            fmt(res.spent_total), fmt(res.net_energy), fmt(res.efficiency)]
    if spec.per_robot:
        row.append(fmt(res.net_energy_per_robot))
    return row


def _run_job(job) -> tuple[RunResult, str]:
    cfg, ctrl, seed, run_id = job
    res, series = run(cfg, ctrl, seed, run_id=run_id)
    return res, timeseries_csv(series)


def jobs_for(spec: ExperimentSpec):
    """Every (point index, run index, job) of the spec in output order."""
    for i, pt in enumerate(spec.points()):
        cfg, ctrl = spec.build(pt)
        for r in range(spec.runs):
            yield i, r, pt, (cfg, ctrl, derive_seed(spec.master_seed, i, r), f"{i}_{r}")


def execute(spec: ExperimentSpec, out_dir: str | os.PathLike | None = None,
            workers: int = 1) -> int:
    """Run the whole grid and write CSVs; returns a process exit status.

    Files are committed in (point, run) order whatever the worker count, so
    the output directory is byte-identical for any ``workers``.
    """
    out = Path(out_dir if out_dir is not None else spec.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        summary = open(out / "summary.csv", "w", newline="")
    except OSError as exc:
        print(f"error: cannot write to {out}: {exc}")
        return 2
    listing = list(jobs_for(spec))
    with summary:
        w = csv.writer(summary, lineterminator="\n")
        w.writerow(summary_columns(spec))
        pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
        try:
            results = pool.map(_run_job, [j for *_, j in listing]) if pool else \
                map(_run_job, (j for *_, j in listing))
            for (i, r, pt, _), (res, ts_text) in zip(listing, results):
                (out / f"timeseries_{i}_{r}.csv").write_text(ts_text)
                w.writerow(summary_row(spec, pt, res))
                summary.flush()
        except (ConfigError, RuntimeError, OSError, ValueError) as exc:
            print(f"error: run failed: {exc}")
            return 2
        finally:
            if pool:
                pool.shutdown(cancel_futures=True)
    return 0


def read_summary(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _sort_key(v: str):
    try:
        return (0, float(v), "")
    except ValueError:
        return (1, 0.0, v)


def emit_plot_data(rows: list[dict[str, str]], axis: str, value: str) -> str:
    """Group rows by ``axis`` and give mean and sample std of ``value``.

    Output is whitespace-separated columns ``axis mean std`` under a '#'
    header, one line per distinct axis value in ascending order.
    """
    present = set(rows[0]) if rows else set()
    missing = [f for f in (axis, value) if f not in present]
    if missing:
        raise KeyError(f"unknown field(s): {', '.join(missing)}")
    groups: dict[str, list[float]] = {}
    for row in rows:
        groups.setdefault(row[axis], []).append(float(row[value]))
    lines = [f"# {axis} mean_{value} std_{value}"]
    for key in sorted(groups, key=_sort_key):
        vals = groups[key]
        mean = statistics.mean(vals)
        std = statistics.stdev(vals) if len(vals) > 1 else 0.0
        lines.append(f"{key} {fmt(float(mean))} {fmt(float(std))}")
    return "\n".join(lines) + "\n"
