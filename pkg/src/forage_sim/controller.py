"""Division-of-labour decision rules.

Everything here is a pure function of its arguments. The engine owns state
and calls in at departure, encounter and arrival time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .world import ActivityLevel, EnergyLedger


class PeerStatus(enum.Enum):
    FOUND_FOOD = "found_food"
    SEARCHING = "searching"
    FAILED = "failed"


class TripOutcome(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"


class ControllerKind(str, enum.Enum):
    ADAPTIVE = "adaptive"
    FIXED_NUMBER = "fixed_number"
    FIXED_RATIO = "fixed_ratio"
    ADAPTIVE_MULTILEVEL = "adaptive_multilevel"

    @property
    def adaptive(self) -> bool:
        return self in (ControllerKind.ADAPTIVE, ControllerKind.ADAPTIVE_MULTILEVEL)


@dataclass
class ControllerParams:
    delta1: float = 0.1
    delta2: float = 0.1
    phi1: float = 0.015
    phi2: float = 0.015
    p0: float = 0.5
    th_init: float = 1.0
    # slightly above th_init: every robot starts out foraging, and a single
    # early failure is enough to send it home
    s_init: float = 1.15
    th_min: float = 0.01
    th_max: float = 100.0
    s_min: float = 0.0
    s_max: float = 100.0
    # activity-level bands on the stimulus (multilevel controller only)
    s_low: float = 1.0
    s_high: float = 1.2
    # False: one stimulus on the home-base board; True: each robot keeps its own
    local_stimulus: bool = False

    def violations(self) -> list[tuple[str, str]]:
        out = []
        for name in ("delta1", "delta2", "phi1", "phi2", "th_min", "s_min"):
            if not getattr(self, name) >= 0:
                out.append((name, "must be >= 0"))
        if not 0 <= self.p0 < 1:
            out.append(("p0", "must lie in [0, 1)"))
        if not self.th_init > 0:
            out.append(("th_init", "must be > 0"))
        if not self.th_min <= self.th_init <= self.th_max:
            out.append(("th_init", "must lie in [th_min, th_max]"))
        if not self.s_min <= self.s_init <= self.s_max:
            out.append(("s_init", "must lie in [s_min, s_max]"))
        if not self.s_low < self.s_high:
            out.append(("s_low", "must be < s_high"))
        return out


@dataclass(frozen=True)
class LevelMultipliers:
    speed: float
    sense: float
    cost: float


@dataclass(frozen=True)
class ActivityProfile:
    low: LevelMultipliers = LevelMultipliers(speed=0.75, sense=0.75, cost=0.8)
    normal: LevelMultipliers = LevelMultipliers(speed=1.0, sense=1.0, cost=1.0)
    high: LevelMultipliers = LevelMultipliers(speed=1.5, sense=2.0, cost=1.25)

    def __getitem__(self, level: ActivityLevel) -> LevelMultipliers:
        if level is ActivityLevel.LOW:
            return self.low
        if level is ActivityLevel.HIGH:
            return self.high
        return self.normal

    def violations(self) -> list[tuple[str, str]]:
        out = []
        for attr in ("speed", "sense", "cost"):
            lo, mid, hi = (getattr(m, attr) for m in (self.low, self.normal, self.high))
            if not 0 < lo <= mid <= hi:
                out.append((f"profile.{attr}", "need 0 < low <= normal <= high"))
        return out


@dataclass
class Controller:
    """A controller kind plus everything it needs to decide."""

    kind: ControllerKind = ControllerKind.ADAPTIVE
    params: ControllerParams = field(default_factory=ControllerParams)
    target: int = 0
    ratio: float = 0.0
    profile: ActivityProfile = field(default_factory=ActivityProfile)

    def __post_init__(self):
        self.kind = ControllerKind(self.kind)

    def describe(self) -> str:
        if self.kind is ControllerKind.FIXED_NUMBER:
            return f"fixed_number({self.target})"
        if self.kind is ControllerKind.FIXED_RATIO:
            return f"fixed_ratio({self.ratio:g})"
        return self.kind.value


def foraging_probability(stimulus: float, threshold: float) -> float:
    """Response-threshold probability S^2 / (S^2 + T^2); 0 when both are 0."""
    s2 = stimulus * stimulus
    denom = s2 + threshold * threshold
    if denom == 0.0:
        return 0.0
    return s2 / denom


def decide_depart(p: float, p0: float) -> bool:
    return p > p0


def observe_peer(counter: int, status: PeerStatus) -> int:
    if status is PeerStatus.FOUND_FOOD:
        return counter + 1
    if status is PeerStatus.SEARCHING:
        return counter - 1
    return counter - 2


def _clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def apply_trip_update(threshold: float, stimulus: float, outcome: TripOutcome,
                      counter: int, params: ControllerParams) -> tuple[float, float]:
    """Return the post-trip (threshold, stimulus), clamped to their bounds.

    A success lowers the threshold by delta1, a failure raises it by delta2.
    The stimulus moves only when the trip's peer tally agrees with the
    outcome: +phi1 for a success with counter > 0, -phi2 for a failure with
    counter < 0.
    """
    if outcome is TripOutcome.SUCCESS:
        threshold = threshold - params.delta1
        if counter > 0:
            stimulus = stimulus + params.phi1
    else:
        threshold = threshold + params.delta2
        if counter < 0:
            stimulus = stimulus - params.phi2
    return (_clamp(threshold, params.th_min, params.th_max),
            _clamp(stimulus, params.s_min, params.s_max))


def classify_trip(trip_ledger: EnergyLedger) -> TripOutcome:
    # a zero-net trip counts as a failure
    return TripOutcome.SUCCESS if trip_ledger.net() > 0 else TripOutcome.FAILURE


def fixed_number_decide(at_home_ids, active_count: int, target: int) -> set[int]:
    need = max(0, target - active_count)
    return set(sorted(at_home_ids)[:need])


def fixed_ratio_decide(at_home_ids, active_count: int, swarm_size: int, ratio: float) -> set[int]:
    return fixed_number_decide(at_home_ids, active_count, math.floor(ratio * swarm_size))


def select_activity_level(stimulus: float, params: ControllerParams) -> ActivityLevel:
    if stimulus >= params.s_high:
        return ActivityLevel.HIGH
    if stimulus >= params.s_low:
        return ActivityLevel.NORMAL
    return ActivityLevel.LOW
