"""Named worlds used by the experiment scripts and the acceptance suite."""

from __future__ import annotations

from dataclasses import replace

from .rng import derive_seed
from .world import WorldConfig

MASTER_SEED = 2024
RICH_RATE = 2.0
SCARCE_RATE = 0.05
REGIME_PERIOD = 500
BASELINE_RATIOS = (0.25, 0.5, 0.75, 1.0)


def seeds(n: int, master_seed: int = MASTER_SEED) -> list[int]:
    return [derive_seed(master_seed, k) for k in range(n)]


def rich(**overrides) -> WorldConfig:
    return replace(WorldConfig(food_spawn_rate=RICH_RATE), **overrides)


def scarce(**overrides) -> WorldConfig:
    return replace(WorldConfig(food_spawn_rate=SCARCE_RATE), **overrides)


def alternating(**overrides) -> WorldConfig:
    """Abundance toggles between the rich and scarce rates every 500 steps."""
    cfg = WorldConfig(food_spawn_rate=RICH_RATE, alt_food_spawn_rate=SCARCE_RATE,
                      regime_period=REGIME_PERIOD)
    return replace(cfg, **overrides)
