"""Efficiency advantage of the adaptive controller over the best fixed ratio, by swarm size.

    python scripts/scaling.py --sizes 10 20 30 50 --workers 4
"""

from _common import mean_std, parser, run_many

from forage_sim.controller import Controller
from forage_sim.scenarios import BASELINE_RATIOS, alternating, seeds


def main():
    p = parser(__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 30, 50])
    args = p.parse_args()
    sl = seeds(args.seeds)
    print(f"{'n':>4s} {'adaptive':>9s} {'best fixed':>14s} {'advantage':>10s}")
    for n in args.sizes:
        cfg = alternating(num_robots=n)

        def eff(ctrl):
            return mean_std(r.efficiency for r, _ in run_many([(cfg, ctrl, s) for s in sl],
                                                               args.workers))[0]

        adaptive = eff(Controller())
        fixed = {r: eff(Controller("fixed_ratio", ratio=r)) for r in BASELINE_RATIOS}
        best = max(fixed, key=fixed.get)
        print(f"{n:4d} {adaptive:9.3f} {fixed[best]:7.3f} ({best:4.2f}) "
              f"{adaptive - fixed[best]:+10.3f}")


if __name__ == "__main__":
    main()
