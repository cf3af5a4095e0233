#!/usr/bin/env python3
"""Print the headline squeezing and entanglement numbers.

Runs the density/line sweeps whose optima are the quantitative targets of
the model and prints the grid argmax of each (mechanical squeezing for the
fig2/5/6 family, both log negativities for fig7).
"""

import argparse

from omsqueeze import figure_preset, run_sweep

SQUEEZING_PRESETS = ("fig2a", "fig2b", "fig5a", "fig5b", "fig6a", "fig6b", "fig6c", "fig6d")
NEGATIVITY_PRESETS = ("fig7a", "fig7b")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    print("mechanical two-mode squeezing optima")
    for name in SQUEEZING_PRESETS:
        result = run_sweep(figure_preset(name), jobs=args.jobs)
        opt = result.optimum["s2_m_db"]
        at = "  ".join(f"{k}={v:.4g}" for k, v in opt["axes"].items())
        print(f"  {name}: S2_m = {opt['value']:6.2f} dB  at {at}")

    print("log-negativity optima")
    for name in NEGATIVITY_PRESETS:
        result = run_sweep(figure_preset(name), jobs=args.jobs)
        for metric in ("en_cc", "en_mm"):
            opt = result.optimum[metric]
            at = "  ".join(f"{k}={v:.4g}" for k, v in opt["axes"].items())
            print(f"  {name}: {metric} = {opt['value']:.4f}  at {at}")


if __name__ == "__main__":
    main()
