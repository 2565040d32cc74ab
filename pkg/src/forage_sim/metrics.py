"""Net energy, energy efficiency and cross-run aggregation."""

from __future__ import annotations

import statistics
from dataclasses import asdict, dataclass, field, fields
from typing import TYPE_CHECKING, Iterable, NamedTuple

from .world import EnergyLedger, from_quanta

if TYPE_CHECKING:
    from .engine import Simulation


@dataclass
class RunResult:
    run_id: str
    seed: int
    controller: str
    num_robots: int
    collected: float = 0.0
    move_spent: float = 0.0
    comm_spent: float = 0.0
    idle_spent: float = 0.0
    net_energy: float = 0.0
    efficiency: float = 0.0
    trips: int = 0
    successes: int = 0
    failures: int = 0
    final_stimulus: float = 0.0
    mean_final_threshold: float = 0.0
    params: dict = field(default_factory=dict)

    @property
    def spent_total(self) -> float:
        return self.move_spent + self.comm_spent + self.idle_spent

    @property
    def net_energy_per_robot(self) -> float:
        return self.net_energy / self.num_robots


NUMERIC_FIELDS = tuple(f.name for f in fields(RunResult)
                       if f.type in ("float", "int") and f.name not in ("seed",))


def _sum_ledgers(ledgers: Iterable[EnergyLedger]) -> EnergyLedger:
    total = EnergyLedger()
    for led in ledgers:
        total.add(led)
    return total


def net_energy(ledgers: Iterable[EnergyLedger]) -> float:
    """Collected energy minus every spending category, summed over robots."""
    return from_quanta(_sum_ledgers(ledgers).net())


def efficiency_quanta(collected: int, spent: int) -> float:
    if spent == 0:
        # one quantum stands in for a zero spend so the ratio stays finite
        return 0.0 if collected == 0 else float(collected)
    return collected / spent


def efficiency(ledgers: Iterable[EnergyLedger]) -> float:
    """Collected over spent energy for the whole swarm."""
    total = _sum_ledgers(ledgers)
    return efficiency_quanta(total.collected, total.spent())


def build_run_result(sim: "Simulation", run_id: str, seed: int) -> RunResult:
    total = _sum_ledgers(sim.ledgers())
    n = len(sim.robots)
    successes = sum(1 for t in sim.trips if t.outcome.value == "success")
    if sim.params.local_stimulus:
        stim = statistics.fmean(r.stimulus for r in sim.robots)
    else:
        stim = sim.board.stimulus
    return RunResult(
        run_id=run_id,
        seed=seed,
        controller=sim.controller.describe(),
        num_robots=n,
        collected=from_quanta(total.collected),
        move_spent=from_quanta(total.move_spent),
        comm_spent=from_quanta(total.comm_spent),
        idle_spent=from_quanta(total.idle_spent),
        net_energy=from_quanta(total.net()),
        efficiency=efficiency_quanta(total.collected, total.spent()),
        trips=len(sim.trips),
        successes=successes,
        failures=len(sim.trips) - successes,
        final_stimulus=stim,
        mean_final_threshold=statistics.fmean(r.threshold for r in sim.robots),
        params={"world": asdict(sim.cfg), "controller": asdict(sim.params),
                "target": sim.controller.target, "ratio": sim.controller.ratio},
    )


class Summary(NamedTuple):
    mean: float
    std: float
    min: float
    max: float


def summarize(values: Iterable[float]) -> Summary:
    """Sample statistics of one group; std is 0 for a single value.

    ``statistics.mean``/``stdev`` use exact rational arithmetic, so the result
    does not depend on the order of ``values``.
    """
    vals = list(values)
    if not vals:
        raise ValueError("cannot summarize an empty group")
    std = statistics.stdev(vals) if len(vals) > 1 else 0.0
    return Summary(float(statistics.mean(vals)), float(std), min(vals), max(vals))


def aggregate(results: list[RunResult]) -> dict[str, Summary]:
    """Per-field summary over a group of runs of one configuration."""
    if not results:
        raise ValueError("cannot aggregate an empty group of results")
    return {name: summarize(getattr(r, name) for r in results) for name in NUMERIC_FIELDS}
