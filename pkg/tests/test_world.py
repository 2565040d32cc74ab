import math
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forage_sim.rng import RngStream, derive_seed, splitmix64
from forage_sim.world import (
    EnergyLedger,
    FoodTable,
    FoodItem,
    WorldConfig,
    from_quanta,
    spawn_food,
    to_quanta,
    validate_config,
)


def fields_of(violations):
    return {v.field for v in violations}


def test_default_config_is_valid():
    assert validate_config(WorldConfig()) == []


def test_forage_area_outside_arena():
    cfg = WorldConfig(forage_area=(25.0, 20.0, 175.0, 45.0))
    assert "forage_area" in fields_of(validate_config(cfg))


def test_zero_food_energy():
    assert "food_energy" in fields_of(validate_config(WorldConfig(food_energy=0.0)))


@pytest.mark.parametrize("name", ["sense_radius", "encounter_radius", "robot_speed"])
def test_nonpositive_radii_and_speed(name):
    cfg = replace(WorldConfig(), **{name: 0.0})
    assert name in fields_of(validate_config(cfg))


def test_home_must_be_disjoint_from_forage_area():
    cfg = WorldConfig(home_center=(50.0, 18.0), home_radius=5.0)
    assert "forage_area" in fields_of(validate_config(cfg))


def test_home_disc_inside_arena():
    cfg = WorldConfig(home_center=(2.0, 10.0), home_radius=5.0)
    assert "home_center" in fields_of(validate_config(cfg))


def test_all_violations_reported_together():
    cfg = WorldConfig(food_energy=-1.0, move_cost=-1.0, num_robots=0)
    assert {"food_energy", "move_cost", "num_robots"} <= fields_of(validate_config(cfg))


# -- rng ----------------------------------------------------------------------


def test_splitmix64_reference_values():
    # first outputs of the reference splitmix64 generator seeded with 0
    state = 0
    outs = []
    for _ in range(3):
        outs.append(splitmix64(state))
        state = (state + 0x9E3779B97F4A7C15) & ((1 << 64) - 1)
    assert outs == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_derived_seeds_are_distinct_and_stable():
    a = [derive_seed(7, p, r) for p in range(5) for r in range(5)]
    assert len(set(a)) == 25
    assert derive_seed(7, 3, 1) == derive_seed(7, 3, 1)
    assert derive_seed(7, 3, 1) != derive_seed(8, 3, 1)


def test_rng_stream_reproducible():
    a, b = RngStream(42), RngStream(42)
    assert [a.random() for _ in range(100)] == [b.random() for _ in range(100)]
    assert [a.poisson(2.0) for _ in range(100)] == [b.poisson(2.0) for _ in range(100)]


def poisson_pmf(k, lam):
    return math.exp(-lam) * lam ** k / math.factorial(k)


@pytest.mark.parametrize("lam", [0.3, 2.0, 25.0])
def test_poisson_sampler_matches_pmf(lam):
    rng = RngStream(5)
    n = 20000
    counts = Counter(rng.poisson(lam) for _ in range(n))
    mode = int(lam)
    for k in range(max(0, mode - 3), mode + 4):
        assert counts[k] / n == pytest.approx(poisson_pmf(k, lam), abs=0.012)


# -- spawning -------------------------------------------------------------------


def test_zero_rate_spawns_nothing():
    cfg = WorldConfig(food_spawn_rate=0.0)
    rng = RngStream(1)
    assert all(spawn_food(cfg, rng, 0, step=t) == [] for t in range(1000))


def test_spawn_rate_mean_and_placement():
    cfg = WorldConfig(food_spawn_rate=2.0)
    rng = RngStream(11)
    x0, y0, x1, y1 = cfg.forage_area
    total = 0
    next_id = 0
    for t in range(10_000):
        items = spawn_food(cfg, rng, next_id, step=t)
        for it in items:
            assert x0 <= it.x <= x1 and y0 <= it.y <= y1
            assert it.id == next_id
            next_id += 1
        total += len(items)
    assert abs(total / 10_000 - 2.0) <= 0.1


def test_spawn_respects_available_cap():
    cfg = WorldConfig(food_spawn_rate=50.0, max_available_food=10)
    items = spawn_food(cfg, RngStream(0), 0, available=7)
    assert len(items) <= 3


def test_alternating_rate_schedule():
    cfg = WorldConfig(food_spawn_rate=2.0, alt_food_spawn_rate=0.05, regime_period=500)
    assert cfg.spawn_rate_at(0) == 2.0
    assert cfg.spawn_rate_at(499) == 2.0
    assert cfg.spawn_rate_at(500) == 0.05
    assert cfg.spawn_rate_at(1000) == 2.0


# -- food table -------------------------------------------------------------------


@given(st.lists(st.tuples(st.floats(25, 75), st.floats(20, 45)), max_size=60),
       st.floats(20, 80), st.floats(15, 50), st.floats(0.1, 8.0))
def test_nearest_available_matches_brute_force(points, qx, qy, radius):
    table = FoodTable(WorldConfig(), cell_size=3.0)
    for i, (x, y) in enumerate(points):
        table.add(FoodItem(i, x, y, 1.0))
    brute = [((x - qx) ** 2 + (y - qy) ** 2, i) for i, (x, y) in enumerate(points)
             if (x - qx) ** 2 + (y - qy) ** 2 <= radius * radius]
    assert table.nearest_available(qx, qy, radius) == (min(brute)[1] if brute else None)


def test_food_table_counts():
    table = FoodTable(WorldConfig(), cell_size=3.0)
    for i in range(4):
        table.add(FoodItem(i, 30.0 + i, 30.0, 1.0))
    table.pick_up(1)
    table.pick_up(2)
    table.deliver(2)
    assert (table.available, table.carried, table.delivered, table.spawned) == (2, 1, 1, 4)
    assert table.counts_consistent()
    assert table.nearest_available(31.0, 30.0, 0.5) is None


# -- ledgers ----------------------------------------------------------------------


quanta = st.integers(min_value=0, max_value=10**15)


@given(quanta, quanta, quanta, quanta)
def test_ledger_net_is_exact(c, m, k, i):
    led = EnergyLedger(c, m, k, i)
    assert led.net() == c - m - k - i
    assert led.net() == led.collected - led.spent()


def test_quanta_round_trip():
    assert from_quanta(to_quanta(12.5)) == 12.5
    assert to_quanta(0.1) * 3 == to_quanta(0.3)
