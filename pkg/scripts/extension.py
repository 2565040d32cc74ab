"""Multilevel activity controller vs plain adaptive under an idle cost.

    python scripts/extension.py --idle-costs 0 0.02 0.05 0.1
"""

from collections import Counter

from _common import mean_std, parser, run_many

from forage_sim.controller import Controller
from forage_sim.engine import Simulation
from forage_sim.scenarios import alternating, seeds


def main():
    p = parser(__doc__)
    p.add_argument("--idle-costs", type=float, nargs="+", default=[0.0, 0.02, 0.05, 0.1])
    args = p.parse_args()
    sl = seeds(args.seeds)
    print(f"{'idle':>6s} {'adaptive':>14s} {'multilevel':>14s}")
    for c in args.idle_costs:
        cfg = alternating(idle_cost=c)
        row = []
        for kind in ("adaptive", "adaptive_multilevel"):
            out = run_many([(cfg, Controller(kind), s) for s in sl], args.workers)
            row.append("%7.3f±%5.3f" % mean_std(r.efficiency for r, _ in out))
        print(f"{c:6.3f} {row[0]:>14s} {row[1]:>14s}")

    sim = Simulation(alternating(), Controller("adaptive_multilevel"), sl[0])
    for _ in range(sim.cfg.max_steps):
        sim.step()
    levels = Counter(t.level.value for t in sim.trips)
    print("trip levels (one run):", dict(sorted(levels.items())))


if __name__ == "__main__":
    main()
