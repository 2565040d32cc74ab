"""Shared helpers for the experiment scripts."""

import argparse
import statistics
from concurrent.futures import ProcessPoolExecutor

from forage_sim.engine import run


def parser(doc: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=doc)
    p.add_argument("--seeds", type=int, default=10, help="runs per configuration")
    p.add_argument("--workers", type=int, default=1)
    return p


def _one(job):
    cfg, ctrl, seed = job
    res, series = run(cfg, ctrl, seed)
    return res, series


def run_many(jobs, workers=1):
    """Run (cfg, controller, seed) jobs; results come back in job order."""
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_one, jobs))
    return [_one(j) for j in jobs]


def mean_std(values):
    values = list(values)
    return statistics.fmean(values), (statistics.stdev(values) if len(values) > 1 else 0.0)
