"""Adaptive controller against fixed-ratio baselines in the alternating world.

    python scripts/baselines.py --seeds 10 --workers 4
"""

from _common import mean_std, parser, run_many

from forage_sim.controller import Controller
from forage_sim.scenarios import BASELINE_RATIOS, alternating, seeds


def main():
    args = parser(__doc__).parse_args()
    sl = seeds(args.seeds)
    cfg = alternating()
    ctrls = [Controller()] + [Controller("fixed_ratio", ratio=r) for r in BASELINE_RATIOS]
    print(f"{'controller':18s} {'efficiency':>14s} {'net energy':>18s}")
    for ctrl in ctrls:
        out = run_many([(cfg, ctrl, s) for s in sl], args.workers)
        em, esd = mean_std(r.efficiency for r, _ in out)
        nm, nsd = mean_std(r.net_energy for r, _ in out)
        print(f"{ctrl.describe():18s} {em:7.3f}±{esd:5.3f} {nm:10.1f}±{nsd:6.1f}")


if __name__ == "__main__":
    main()
