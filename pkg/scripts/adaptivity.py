"""Active-forager fraction and stimulus in rich vs scarce worlds.

    python scripts/adaptivity.py --seeds 10
"""

from _common import mean_std, parser, run_many

from forage_sim.controller import Controller
from forage_sim.scenarios import rich, scarce, seeds


def main():
    args = parser(__doc__).parse_args()
    sl = seeds(args.seeds)
    print(f"{'world':8s} {'active':>14s} {'final S':>8s} {'efficiency':>14s}")
    for name, cfg in (("rich", rich()), ("scarce", scarce())):
        out = run_many([(cfg, Controller(), s) for s in sl], args.workers)
        frac = [sum(x.active_foragers for x in ser[1000:]) / len(ser[1000:]) / cfg.num_robots
                for _, ser in out]
        m, sd = mean_std(frac)
        em, esd = mean_std(r.efficiency for r, _ in out)
        stim = mean_std(r.final_stimulus for r, _ in out)[0]
        print(f"{name:8s} {m:7.3f}±{sd:5.3f} {stim:8.3f} {em:7.3f}±{esd:5.3f}")


if __name__ == "__main__":
    main()
