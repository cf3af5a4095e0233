#!/usr/bin/env python3
"""Regenerate every reference-figure dataset as CSV.

Sweep presets write one row per grid point; the time-trace preset writes
the covariance-trace relaxation curve.  Output lands in --outdir (created
if missing) as <preset>.csv.
"""

import argparse
import time
from pathlib import Path

from omsqueeze import (
    FIGURE_NAMES,
    TracePreset,
    build_diffusion,
    build_drift,
    derive_model,
    evolve_to_steady,
    figure_preset,
    initial_covariance,
    run_sweep,
)


def generate(name: str, outdir: Path, jobs: int) -> None:
    preset = figure_preset(name)
    out = outdir / f"{name}.csv"
    start = time.perf_counter()
    if isinstance(preset, TracePreset):
        model = derive_model(preset.params)
        _, trajectory = evolve_to_steady(
            build_drift(model), build_diffusion(model),
            initial_covariance(model), eps=preset.eps,
        )
        trajectory.to_csv(out)
        detail = f"{len(trajectory.times)} steps, plateau {trajectory.traces[-1]:.4f}"
    else:
        result = run_sweep(preset, jobs=jobs)
        result.write_csv(out)
        stable = sum(1 for p in result.grid if p.stable)
        opt = result.optimum["s2_m_db"]
        detail = f"{len(result.grid)} points ({stable} stable)"
        if opt is not None:
            detail += f", best S2_m = {opt['value']:.2f} dB"
    print(f"{name}: {detail}  [{time.perf_counter() - start:.1f} s] -> {out}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=Path, default=Path("figure_data"))
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument(
        "--only", nargs="*", choices=FIGURE_NAMES, default=None,
        help="subset of presets (default: all)",
    )
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for name in args.only or FIGURE_NAMES:
        generate(name, args.outdir, args.jobs)


if __name__ == "__main__":
    main()
