import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forage_sim.controller import Controller
from forage_sim.engine import Simulation
from forage_sim.metrics import RunResult, aggregate, efficiency, net_energy, summarize
from forage_sim.world import EnergyLedger, WorldConfig, from_quanta


def test_net_energy_of_idle_swarm_is_zero():
    assert net_energy([EnergyLedger() for _ in range(5)]) == 0.0


def test_net_energy_example():
    led = EnergyLedger.from_energy(collected=100, move=30, comm=10, idle=5)
    assert net_energy([led]) == 55.0


def test_net_energy_matches_engine_series():
    sim = Simulation(WorldConfig(num_robots=8, max_steps=400, idle_cost=0.02), Controller(), 6)
    last = None
    for _ in range(400):
        last = sim.step()
    assert net_energy(sim.ledgers()) == from_quanta(last.cum_net)


@pytest.mark.parametrize("collected, spent, expected", [(100, 50, 2.0), (0, 50, 0.0), (0, 0, 0.0)])
def test_efficiency_examples(collected, spent, expected):
    led = EnergyLedger.from_energy(collected=collected, move=spent)
    assert efficiency([led]) == expected


@given(st.integers(0, 10**12), st.integers(1, 10**12), st.integers(0, 10**12))
def test_efficiency_above_one_iff_positive_net(c, m, k):
    led = EnergyLedger(c, m, k, 0)
    assert (efficiency([led]) > 1) == (led.net() > 0)


def result_with(**kw):
    return RunResult(run_id="0", seed=0, controller="adaptive", num_robots=1, **kw)


def test_aggregate_single_run():
    s = aggregate([result_with(net_energy=5.0)])["net_energy"]
    assert (s.mean, s.std, s.min, s.max) == (5.0, 0.0, 5.0, 5.0)


def test_aggregate_sample_std():
    s = aggregate([result_with(net_energy=v) for v in (1.0, 2.0, 3.0)])["net_energy"]
    assert (s.mean, s.std) == (2.0, 1.0)


def test_aggregate_identical_runs():
    s = aggregate([result_with(efficiency=1.3) for _ in range(4)])["efficiency"]
    assert s.std == 0.0 and s.mean == 1.3


def test_empty_group_raises():
    with pytest.raises(ValueError):
        aggregate([])
    with pytest.raises(ValueError):
        summarize([])


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=30), st.randoms())
def test_summarize_permutation_invariant(vals, rnd):
    shuffled = list(vals)
    rnd.shuffle(shuffled)
    assert summarize(vals) == summarize(shuffled)


def test_results_order_irrelevant_for_aggregate():
    rnd = random.Random(1)
    rs = [result_with(net_energy=rnd.uniform(-50, 50), efficiency=rnd.random()) for _ in range(20)]
    shuffled = list(rs)
    rnd.shuffle(shuffled)
    assert aggregate(rs) == aggregate(shuffled)
