"""Discrete-time foraging engine.

One call to :meth:`Simulation.step` runs eight phases in a fixed order:

1. spawn food
2. departures (at-home robots consult their controller)
3. movement (straight transit to the forage area, correlated random walk
   inside it, straight return to the home centre)
4. pickup of the nearest available item within sensing range
5. encounters between every pair of away-from-home robots within range
6. give-up of searching robots that exceeded the give-up time
7. arrivals at home: delivery, trip classification and controller update
8. idle cost for robots at home

Robots are always iterated in ascending id, and every random draw comes from
the run's single :class:`~forage_sim.rng.RngStream` in a fixed order (food
spawning, then departure targets in id order, then random-walk turns in id
order), so a run is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import controller as ctl
from .controller import Controller, ControllerKind, PeerStatus, TripOutcome
from .metrics import RunResult, build_run_result
from .rng import RngStream
from .world import (
    ActivityLevel,
    EnergyLedger,
    FoodItem,
    FoodTable,
    Mode,
    RobotState,
    StimulusBoard,
    WorldConfig,
    spawn_food,
    to_quanta,
    validate_config,
)


class ConfigError(ValueError):
    """Raised before a run when the configuration is invalid."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{f}: {m}" for f, m in self.violations))


class CorruptedStateError(RuntimeError):
    """A world invariant failed after a step. Always an engine bug."""


class Event(NamedTuple):
    step: int
    kind: str  # depart | pickup | encounter | giveup | arrive
    robot: int
    other: int | None = None


class Sample(NamedTuple):
    """End-of-step observables. Energy columns are in integer quanta."""

    step: int
    active_foragers: int
    stimulus: float
    mean_threshold: float
    food_available: int
    cum_collected: int
    cum_move: int
    cum_comm: int
    cum_idle: int
    cum_net: int


@dataclass
class TripRecord:
    robot: int
    start_step: int
    end_step: int
    level: ActivityLevel
    outcome: TripOutcome
    ledger: EnergyLedger
    distance: float
    task_counter: int
    delivered: bool


_TRIU_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    idx = _TRIU_CACHE.get(n)
    if idx is None:
        idx = _TRIU_CACHE[n] = np.triu_indices(n, 1)
    return idx


def home_positions(cfg: WorldConfig) -> list[tuple[float, float]]:
    """Initial robot spots: a sunflower spiral filling 80 % of the home disc."""
    hx, hy = cfg.home_center
    n = cfg.num_robots
    if n == 1:
        return [(hx, hy)]
    radius = 0.8 * cfg.home_radius
    golden = math.pi * (3.0 - math.sqrt(5.0))
    out = []
    for i in range(n):
        rho = radius * math.sqrt((i + 0.5) / n)
        out.append((hx + rho * math.cos(i * golden), hy + rho * math.sin(i * golden)))
    return out


class Simulation:
    """Mutable state of one run: robots, food, stimulus board and RNG."""

    def __init__(self, cfg: WorldConfig, controller: Controller, seed: int | RngStream = 0,
                 *, robots: list[RobotState] | None = None, check_invariants: bool = True,
                 record_events: bool = False):
        violations = validate_config(cfg) + controller.params.violations() \
            + controller.profile.violations()
        if violations:
            raise ConfigError(violations)
        self.cfg = cfg
        self.controller = controller
        self.params = controller.params
        self.profile = controller.profile
        self.rng = seed if isinstance(seed, RngStream) else RngStream(seed)
        self.check_invariants = check_invariants
        self.record_events = record_events

        p = self.params
        if robots is None:
            robots = [RobotState(id=i, x=x, y=y, threshold=p.th_init, stimulus=p.s_init)
                      for i, (x, y) in enumerate(home_positions(cfg))]
        self.robots = sorted(robots, key=lambda r: r.id)
        if len({r.id for r in self.robots}) != len(self.robots):
            raise ConfigError([("robots", "ids must be unique")])
        self.board = StimulusBoard(p.s_init)
        max_sense = cfg.sense_radius * max(self.profile.low.sense, self.profile.normal.sense,
                                           self.profile.high.sense)
        self.food = FoodTable(cfg, cell_size=max(max_sense, 1e-6))
        for item in spawn_food(cfg, self.rng, 0, count=cfg.initial_food):
            self.food.add(item)

        self.step_index = 0
        self.totals = EnergyLedger()
        self.events: list[Event] = []
        self.event_log: list[Event] = []
        self.trips: list[TripRecord] = []
        self.encounter_pairs = 0
        self._trip_start: dict[int, int] = {}

        self._q_comm = to_quanta(cfg.comm_cost)
        self._q_idle = to_quanta(cfg.idle_cost)
        self._turn = math.radians(cfg.max_turn_deg)

    # -- helpers -----------------------------------------------------------

    def stimulus_for(self, robot: RobotState) -> float:
        return robot.stimulus if self.params.local_stimulus else self.board.stimulus

    def _log(self, kind: str, robot: int, other: int | None = None) -> None:
        ev = Event(self.step_index, kind, robot, other)
        self.events.append(ev)
        if self.record_events:
            self.event_log.append(ev)

    def _depart(self, r: RobotState) -> None:
        r.mode = Mode.SEARCHING
        r.steps_in_trip = 0
        r.trip_failed_flag = False
        r.trip_distance = 0.0
        if self.controller.kind is ControllerKind.ADAPTIVE_MULTILEVEL:
            r.activity_level = ctl.select_activity_level(self.stimulus_for(r), self.params)
        else:
            r.activity_level = ActivityLevel.NORMAL
        x0, y0, x1, y1 = self.cfg.forage_area
        if self.cfg.scatter_entry:
            tx = self.rng.uniform(x0, x1)
            ty = self.rng.uniform(y0, y1)
        else:
            tx = min(max(r.x, x0), x1)
            ty = min(max(r.y, y0), y1)
        r.target = (tx, ty)
        if tx != r.x or ty != r.y:
            r.heading = math.atan2(ty - r.y, tx - r.x)
        self._trip_start[r.id] = self.step_index
        self._log("depart", r.id)

    @staticmethod
    def peer_status(r: RobotState) -> PeerStatus:
        if r.carried_food is not None:
            return PeerStatus.FOUND_FOOD
        if r.trip_failed_flag:
            return PeerStatus.FAILED
        return PeerStatus.SEARCHING

    # -- phases ------------------------------------------------------------

    def _phase_spawn(self) -> None:
        food = self.food
        for item in spawn_food(self.cfg, self.rng, food.next_id, step=self.step_index,
                               available=food.available):
            food.add(item)

    def _phase_departures(self) -> None:
        at_home = [r for r in self.robots if r.mode is Mode.AT_HOME]
        if not at_home:
            return
        kind = self.controller.kind
        if kind.adaptive:
            p0 = self.params.p0
            for r in at_home:
                prob = ctl.foraging_probability(self.stimulus_for(r), r.threshold)
                if ctl.decide_depart(prob, p0):
                    self._depart(r)
            return
        active = len(self.robots) - len(at_home)
        ids = [r.id for r in at_home]
        if kind is ControllerKind.FIXED_NUMBER:
            go = ctl.fixed_number_decide(ids, active, self.controller.target)
        else:
            go = ctl.fixed_ratio_decide(ids, active, len(self.robots), self.controller.ratio)
        for r in at_home:
            if r.id in go:
                self._depart(r)

    def _phase_movement(self) -> None:
        cfg = self.cfg
        x0, y0, x1, y1 = cfg.forage_area
        hx, hy = cfg.home_center
        turn = self._turn
        uniform = self.rng.uniform
        totals = self.totals
        for r in self.robots:
            if r.mode is Mode.AT_HOME:
                continue
            r.steps_in_trip += 1
            m = self.profile[r.activity_level]
            speed = cfg.robot_speed * m.speed
            if r.mode is Mode.SEARCHING:
                if x0 <= r.x <= x1 and y0 <= r.y <= y1:
                    h = r.heading + uniform(-turn, turn)
                    nx = r.x + speed * math.cos(h)
                    ny = r.y + speed * math.sin(h)
                    if nx < x0:
                        nx, h = 2 * x0 - nx, math.pi - h
                    elif nx > x1:
                        nx, h = 2 * x1 - nx, math.pi - h
                    if ny < y0:
                        ny, h = 2 * y0 - ny, -h
                    elif ny > y1:
                        ny, h = 2 * y1 - ny, -h
                    r.x = min(max(nx, x0), x1)
                    r.y = min(max(ny, y0), y1)
                    r.heading = h
                    dist = speed
                else:
                    dist = self._move_toward(r, r.target[0], r.target[1], speed)
            else:
                dist = self._move_toward(r, hx, hy, speed)
            r.trip_distance += dist
            q = to_quanta(dist * cfg.move_cost * m.cost)
            r.trip_ledger.move_spent += q
            totals.move_spent += q

    @staticmethod
    def _move_toward(r: RobotState, tx: float, ty: float, speed: float) -> float:
        dx = tx - r.x
        dy = ty - r.y
        d = math.hypot(dx, dy)
        if d <= speed:
            r.x, r.y = tx, ty
            return d
        r.x += dx / d * speed
        r.y += dy / d * speed
        r.heading = math.atan2(dy, dx)
        return speed

    def _phase_pickup(self) -> None:
        food = self.food
        base = self.cfg.sense_radius
        for r in self.robots:
            if r.mode is not Mode.SEARCHING:
                continue
            radius = base * self.profile[r.activity_level].sense
            fid = food.nearest_available(r.x, r.y, radius)
            if fid is None:
                continue
            food.pick_up(fid)
            r.carried_food = fid
            r.mode = Mode.RETURNING
            self._log("pickup", r.id, fid)

    def _phase_encounters(self) -> None:
        away = [r for r in self.robots if r.mode is not Mode.AT_HOME]
        n = len(away)
        if n < 2:
            return
        xs = np.fromiter((r.x for r in away), dtype=np.float64, count=n)
        ys = np.fromiter((r.y for r in away), dtype=np.float64, count=n)
        iu, ju = _triu(n)
        dx = xs[iu] - xs[ju]
        dy = ys[iu] - ys[ju]
        rad = self.cfg.encounter_radius
        hits = np.flatnonzero(dx * dx + dy * dy <= rad * rad)
        if hits.size == 0:
            return
        status = [self.peer_status(r) for r in away]
        q = self._q_comm
        totals = self.totals
        observe = ctl.observe_peer
        # pairs come out of triu_indices in (i, j) lexicographic order; `away`
        # is sorted by id, so this is (min id, max id) order.
        for k in hits.tolist():
            i = int(iu[k])
            j = int(ju[k])
            a, b = away[i], away[j]
            a.trip_ledger.comm_spent += q
            b.trip_ledger.comm_spent += q
            totals.comm_spent += 2 * q
            a.task_counter = observe(a.task_counter, status[j])
            b.task_counter = observe(b.task_counter, status[i])
            self.encounter_pairs += 1
            self._log("encounter", a.id, b.id)

    def _phase_giveup(self) -> None:
        limit = self.cfg.giveup_steps
        for r in self.robots:
            if r.mode is Mode.SEARCHING and r.steps_in_trip > limit:
                r.trip_failed_flag = True
                r.mode = Mode.RETURNING
                self._log("giveup", r.id)

    def _phase_arrivals(self) -> None:
        hx, hy = self.cfg.home_center
        r2 = self.cfg.home_radius ** 2
        adaptive = self.controller.kind.adaptive
        p = self.params
        for r in self.robots:
            if r.mode is not Mode.RETURNING:
                continue
            dx = r.x - hx
            dy = r.y - hy
            if dx * dx + dy * dy > r2:
                continue
            delivered = r.carried_food is not None
            if delivered:
                item = self.food.deliver(r.carried_food)
                q = to_quanta(item.energy)
                r.trip_ledger.collected += q
                self.totals.collected += q
            outcome = ctl.classify_trip(r.trip_ledger)
            if adaptive:
                s = self.stimulus_for(r)
                r.threshold, s = ctl.apply_trip_update(r.threshold, s, outcome, r.task_counter, p)
                if p.local_stimulus:
                    r.stimulus = s
                else:
                    self.board.stimulus = s
            self.trips.append(TripRecord(
                robot=r.id, start_step=self._trip_start.pop(r.id), end_step=self.step_index,
                level=r.activity_level, outcome=outcome, ledger=r.trip_ledger,
                distance=r.trip_distance, task_counter=r.task_counter, delivered=delivered))
            r.cumulative_ledger.add(r.trip_ledger)
            r.trip_ledger = EnergyLedger()
            r.task_counter = 0
            r.carried_food = None
            r.steps_in_trip = 0
            r.trip_failed_flag = False
            r.mode = Mode.AT_HOME
            self._log("arrive", r.id)

    def _phase_idle(self) -> None:
        q = self._q_idle
        if q == 0:
            return
        for r in self.robots:
            if r.mode is Mode.AT_HOME:
                r.cumulative_ledger.idle_spent += q
                self.totals.idle_spent += q

    # -- driver ------------------------------------------------------------

    def step(self) -> Sample:
        self.events = []
        self._phase_spawn()
        self._phase_departures()
        self._phase_movement()
        self._phase_pickup()
        self._phase_encounters()
        self._phase_giveup()
        self._phase_arrivals()
        self._phase_idle()
        if self.check_invariants:
            self.assert_invariants()
        sample = self.sample()
        self.step_index += 1
        return sample

    def sample(self) -> Sample:
        robots = self.robots
        n = len(robots)
        if self.params.local_stimulus:
            stim = math.fsum(r.stimulus for r in robots) / n
        else:
            stim = self.board.stimulus
        t = self.totals
        return Sample(
            step=self.step_index,
            active_foragers=sum(1 for r in robots if r.mode is not Mode.AT_HOME),
            stimulus=stim,
            mean_threshold=math.fsum(r.threshold for r in robots) / n,
            food_available=self.food.available,
            cum_collected=t.collected,
            cum_move=t.move_spent,
            cum_comm=t.comm_spent,
            cum_idle=t.idle_spent,
            cum_net=t.net(),
        )

    def ledgers(self) -> list[EnergyLedger]:
        """Every robot's cumulative ledger plus any trip still in progress."""
        out = []
        for r in self.robots:
            led = r.cumulative_ledger.copy()
            led.add(r.trip_ledger)
            out.append(led)
        return out

    def assert_invariants(self) -> None:
        cfg = self.cfg
        food = self.food
        if not food.counts_consistent():
            raise CorruptedStateError(f"food count mismatch at step {self.step_index}")
        hx, hy = cfg.home_center
        r2 = cfg.home_radius ** 2
        for r in self.robots:
            if not (0.0 <= r.x <= cfg.arena_width and 0.0 <= r.y <= cfg.arena_height):
                raise CorruptedStateError(f"robot {r.id} left the arena")
            if r.mode is Mode.AT_HOME:
                if (r.x - hx) ** 2 + (r.y - hy) ** 2 > r2 or r.carried_food is not None:
                    raise CorruptedStateError(f"robot {r.id} at home but outside nest or carrying")
            if r.carried_food is not None and r.mode is not Mode.RETURNING:
                raise CorruptedStateError(f"robot {r.id} carries food while {r.mode.value}")
            if r.threshold < 0:
                raise CorruptedStateError(f"robot {r.id} has negative threshold")
        if self.board.stimulus < 0:
            raise CorruptedStateError("negative stimulus")

    def result(self, run_id: str = "0", seed: int | None = None) -> RunResult:
        return build_run_result(self, run_id=run_id,
                                seed=self.rng.seed if seed is None else seed)


def place_food(sim: Simulation, x: float, y: float, energy: float | None = None) -> FoodItem:
    """Put an available item at (x, y); used by scripted scenarios."""
    item = FoodItem(sim.food.next_id, x, y, sim.cfg.food_energy if energy is None else energy)
    sim.food.add(item)
    return item


def run(cfg: WorldConfig, controller: Controller, seed: int | RngStream = 0,
        max_steps: int | None = None, *, run_id: str = "0",
        check_invariants: bool = False) -> tuple[RunResult, list[Sample]]:
    """Run a simulation to ``max_steps`` (default ``cfg.max_steps``)."""
    sim = Simulation(cfg, controller, seed, check_invariants=check_invariants)
    steps = cfg.max_steps if max_steps is None else max_steps
    series = [sim.step() for _ in range(steps)]
    return sim.result(run_id=run_id), series
