"""Swarm foraging with adaptive division of labour."""

from .controller import (
    ActivityProfile,
    Controller,
    ControllerKind,
    ControllerParams,
    LevelMultipliers,
    PeerStatus,
    TripOutcome,
    apply_trip_update,
    classify_trip,
    decide_depart,
    fixed_number_decide,
    fixed_ratio_decide,
    foraging_probability,
    observe_peer,
    select_activity_level,
)
from .engine import ConfigError, CorruptedStateError, Simulation, run
from .metrics import RunResult, aggregate, efficiency, net_energy
from .rng import RngStream, derive_seed
from .world import ActivityLevel, EnergyLedger, Mode, WorldConfig, spawn_food, validate_config

__all__ = [
    "ActivityLevel", "ActivityProfile", "ConfigError", "Controller", "ControllerKind",
    "ControllerParams", "CorruptedStateError", "EnergyLedger", "LevelMultipliers", "Mode",
    "PeerStatus", "RngStream", "RunResult", "Simulation", "TripOutcome", "WorldConfig",
    "aggregate", "apply_trip_update", "classify_trip", "decide_depart", "derive_seed",
    "efficiency", "fixed_number_decide", "fixed_ratio_decide", "foraging_probability",
    "net_energy", "observe_peer", "run", "select_activity_level", "spawn_food",
    "validate_config",
]
