"""World configuration, robots, food and energy bookkeeping."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields
from typing import NamedTuple

from .rng import RngStream

Point = tuple[float, float]
Rect = tuple[float, float, float, float]  # xmin, ymin, xmax, ymax

# Energies are stored as integer multiples of this quantum so that ledger
# sums are exact and independent of summation order.
ENERGY_QUANTUM = 1e-9
_QUANTA_PER_UNIT = 1_000_000_000


def to_quanta(energy: float) -> int:
    return round(energy * _QUANTA_PER_UNIT)


def from_quanta(quanta: int) -> float:
    return quanta / _QUANTA_PER_UNIT


class FoodStatus(enum.Enum):
    AVAILABLE = "available"
    CARRIED = "carried"
    DELIVERED = "delivered"


class Mode(enum.Enum):
    AT_HOME = "at_home"
    SEARCHING = "searching"
    RETURNING = "returning"


class ActivityLevel(enum.Enum):
    LOW = "low"
    NORMAL = "normal"
    HIGH = "high"


@dataclass
class WorldConfig:
    arena_width: float = 100.0
    arena_height: float = 100.0
    home_center: Point = (50.0, 10.0)
    home_radius: float = 5.0
    forage_area: Rect = (25.0, 20.0, 75.0, 45.0)
    food_spawn_rate: float = 0.5
    initial_food: int = 20
    food_energy: float = 50.0
    move_cost: float = 1.0
    comm_cost: float = 0.1
    idle_cost: float = 0.0
    encounter_radius: float = 1.0
    sense_radius: float = 3.0
    robot_speed: float = 1.0
    giveup_steps: int = 60
    max_steps: int = 2000
    num_robots: int = 20
    # Correlated random walk: per-step heading perturbation bound, degrees.
    max_turn_deg: float = 30.0
    # Departing robots head for a uniform random point of the forage area
    # (True) or for its nearest point (False) until they enter it.
    scatter_entry: bool = True
    # Spawning pauses while this many items are available; 0 disables the cap.
    max_available_food: int = 50
    # Alternating abundance: every regime_period steps the spawn rate toggles
    # between food_spawn_rate and alt_food_spawn_rate. 0 disables.
    alt_food_spawn_rate: float = 0.0
    regime_period: int = 0

    def spawn_rate_at(self, step: int) -> float:
        if self.regime_period > 0 and (step // self.regime_period) % 2 == 1:
            return self.alt_food_spawn_rate
        return self.food_spawn_rate


class Violation(NamedTuple):
    field: str
    message: str


def validate_config(cfg: WorldConfig) -> list[Violation]:
    """Return every invariant violation of ``cfg``; an empty list means ok."""
    out: list[Violation] = []

    def bad(name: str, msg: str) -> None:
        out.append(Violation(name, msg))

    if not cfg.arena_width > 0:
        bad("arena_width", "must be > 0")
    if not cfg.arena_height > 0:
        bad("arena_height", "must be > 0")

    x0, y0, x1, y1 = cfg.forage_area
    if not (x0 < x1 and y0 < y1):
        bad("forage_area", "must be a non-empty rectangle (xmin < xmax, ymin < ymax)")
    if not (0 <= x0 and 0 <= y0 and x1 <= cfg.arena_width and y1 <= cfg.arena_height):
        bad("forage_area", "must lie within the arena")

    hx, hy = cfg.home_center
    r = cfg.home_radius
    if not r > 0:
        bad("home_radius", "must be > 0")
    if not (hx - r >= 0 and hy - r >= 0 and hx + r <= cfg.arena_width and hy + r <= cfg.arena_height):
        bad("home_center", "home disc must lie within the arena")
    # nearest point of the forage rectangle to the home centre
    nx = min(max(hx, x0), x1)
    ny = min(max(hy, y0), y1)
    if math.hypot(nx - hx, ny - hy) <= r:
        bad("forage_area", "must be disjoint from the home disc")

    for name in ("food_spawn_rate", "alt_food_spawn_rate", "move_cost", "comm_cost",
                 "idle_cost", "max_turn_deg"):
        if not getattr(cfg, name) >= 0:
            bad(name, "must be >= 0")
    if not cfg.food_energy > 0:
        bad("food_energy", "must be > 0")
    for name in ("sense_radius", "encounter_radius", "robot_speed"):
        if not getattr(cfg, name) > 0:
            bad(name, "must be > 0")
    for name in ("initial_food", "max_available_food", "regime_period"):
        if getattr(cfg, name) < 0:
            bad(name, "must be >= 0")
    if cfg.giveup_steps < 1:
        bad("giveup_steps", "must be a positive integer")
    if cfg.max_steps < 0:
        bad("max_steps", "must be >= 0")
    if cfg.num_robots < 1:
        bad("num_robots", "must be a positive integer")
    return out


@dataclass(slots=True)
class FoodItem:
    id: int
    x: float
    y: float
    energy: float
    status: FoodStatus = FoodStatus.AVAILABLE

    @property
    def position(self) -> Point:
        return (self.x, self.y)


@dataclass(slots=True)
class EnergyLedger:
    """Energy accounts in integer quanta (see :data:`ENERGY_QUANTUM`)."""

    collected: int = 0
    move_spent: int = 0
    comm_spent: int = 0
    idle_spent: int = 0

    def spent(self) -> int:
        return self.move_spent + self.comm_spent + self.idle_spent

    def net(self) -> int:
        return self.collected - self.move_spent - self.comm_spent - self.idle_spent

    def add(self, other: "EnergyLedger") -> None:
        self.collected += other.collected
        self.move_spent += other.move_spent
        self.comm_spent += other.comm_spent
        self.idle_spent += other.idle_spent

    def copy(self) -> "EnergyLedger":
        return EnergyLedger(self.collected, self.move_spent, self.comm_spent, self.idle_spent)

    @classmethod
    def from_energy(cls, collected: float = 0.0, move: float = 0.0,
                    comm: float = 0.0, idle: float = 0.0) -> "EnergyLedger":
        return cls(to_quanta(collected), to_quanta(move), to_quanta(comm), to_quanta(idle))

    def as_energy(self) -> dict[str, float]:
        return {f.name: from_quanta(getattr(self, f.name)) for f in fields(self)}


@dataclass(slots=True)
class RobotState:
    id: int
    x: float
    y: float
    threshold: float
    heading: float = 0.0
    mode: Mode = Mode.AT_HOME
    task_counter: int = 0
    carried_food: int | None = None
    steps_in_trip: int = 0
    trip_failed_flag: bool = False
    trip_ledger: EnergyLedger = field(default_factory=EnergyLedger)
    cumulative_ledger: EnergyLedger = field(default_factory=EnergyLedger)
    activity_level: ActivityLevel = ActivityLevel.NORMAL
    # only used by the per-robot (local) stimulus variant
    stimulus: float = 0.0
    trip_distance: float = 0.0
    target: Point | None = None

    @property
    def position(self) -> Point:
        return (self.x, self.y)


@dataclass
class StimulusBoard:
    """The shared task stimulus kept at the home base."""

    stimulus: float


class FoodTable:
    """All food items of a run, with a uniform grid over available items."""

    def __init__(self, cfg: WorldConfig, cell_size: float):
        self.items: dict[int, FoodItem] = {}
        self.cell = cell_size
        self.ox = cfg.forage_area[0]
        self.oy = cfg.forage_area[1]
        self._grid: dict[tuple[int, int], list[int]] = {}
        self.next_id = 0
        self.spawned = 0
        self.available = 0
        self.carried = 0
        self.delivered = 0

    def _cell_of(self, x: float, y: float) -> tuple[int, int]:
        return (int((x - self.ox) // self.cell), int((y - self.oy) // self.cell))

    def add(self, item: FoodItem) -> None:
        self.items[item.id] = item
        self._grid.setdefault(self._cell_of(item.x, item.y), []).append(item.id)
        self.next_id = item.id + 1
        self.spawned += 1
        self.available += 1

    def nearest_available(self, x: float, y: float, radius: float) -> int | None:
        """Nearest available item within ``radius``; ties go to the lowest id."""
        r2 = radius * radius
        cx0, cy0 = self._cell_of(x - radius, y - radius)
        cx1, cy1 = self._cell_of(x + radius, y + radius)
        best = None
        best_key = None
        grid = self._grid
        items = self.items
        for cx in range(cx0, cx1 + 1):
            for cy in range(cy0, cy1 + 1):
                bucket = grid.get((cx, cy))
                if not bucket:
                    continue
                for fid in bucket:
                    it = items[fid]
                    dx = it.x - x
                    dy = it.y - y
                    d2 = dx * dx + dy * dy
                    if d2 <= r2:
                        key = (d2, fid)
                        if best_key is None or key < best_key:
                            best_key = key
                            best = fid
        return best

    def pick_up(self, fid: int) -> FoodItem:
        it = self.items[fid]
        it.status = FoodStatus.CARRIED
        self._grid[self._cell_of(it.x, it.y)].remove(fid)
        self.available -= 1
        self.carried += 1
        return it

    def deliver(self, fid: int) -> FoodItem:
        it = self.items[fid]
        it.status = FoodStatus.DELIVERED
        self.carried -= 1
        self.delivered += 1
        return it

    def counts_consistent(self) -> bool:
        return self.available + self.carried + self.delivered == self.spawned


def spawn_food(cfg: WorldConfig, rng: RngStream, next_id: int, *, step: int = 0,
               available: int = 0, count: int | None = None) -> list[FoodItem]:
    """Draw this step's new food items.

    The count is Poisson with the spawn rate in force at ``step`` (or exactly
    ``count`` when given, as for the initial stock), truncated so the number
    of available items never exceeds ``cfg.max_available_food``. The Poisson
    draw is always taken, so truncation does not shift later draws' meaning.
    Positions are uniform over the forage area; ids are consecutive from
    ``next_id``.
    """
    n = rng.poisson(cfg.spawn_rate_at(step)) if count is None else count
    if cfg.max_available_food > 0:
        n = max(0, min(n, cfg.max_available_food - available))
    x0, y0, x1, y1 = cfg.forage_area
    out = []
    for k in range(n):
        x = rng.uniform(x0, x1)
        y = rng.uniform(y0, y1)
        out.append(FoodItem(next_id + k, x, y, cfg.food_energy))
    return out
