"""
Monte Carlo sweeps: error vs measurement count and vs SNR
=========================================================

The harness reproduces the two benchmark protocols at desk scale: a
noiseless sweep over the measurement count M, and a noisy sweep over SNR at
fixed M.  Each (value, trial) cell draws a fresh model and matrix from
deterministic seeds, so reruns produce identical tables.  Outputs land in
``demos/output/``: a per-trial CSV, a summary JSON, and a small SVG chart.

Desk scale (a few trials) keeps this script fast; the CLI flag
``--paper-scale`` switches the same machinery to M = 15..65 step 5 with 600
trials per point.
"""

import pathlib

from cstones import ExperimentSpec, run_experiment, write_csv, write_summary_json, write_svg

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# Error vs number of measurements, noiseless, all three methods.
spec_m = ExperimentSpec(
    sweep_axis="m",
    sweep_values=(16.0, 32.0, 48.0, 64.0),
    n=128,
    k=3,
    preset="freq",
    trials=10,
    base_seed=42,
    methods=("mds", "oracle", "bomp"),
)
result_m = run_experiment(spec_m)
write_csv(result_m, str(out_dir / "error_vs_m.csv"))
write_summary_json(result_m, str(out_dir / "error_vs_m.json"))
write_svg(result_m, str(out_dir / "error_vs_m.svg"))

print("mean normalized error vs M (noiseless):")
print(f"{'M':>4s}  " + "  ".join(f"{m:>10s}" for m in spec_m.methods))
for v in spec_m.sweep_values:
    cell = result_m.summary[repr(int(v))]
    print(f"{int(v):4d}  " + "  ".join(f"{cell[m]['mean_error']:10.3e}" for m in spec_m.methods))

# Error vs SNR at fixed M = 64, random amplitudes and phases.
spec_snr = ExperimentSpec(
    sweep_axis="snr",
    sweep_values=(0.0, 20.0, 40.0, 60.0),
    n=128,
    k=3,
    preset="sinu",
    fixed_m=64,
    trials=10,
    base_seed=43,
    methods=("mds",),
)
result_snr = run_experiment(spec_snr)
write_csv(result_snr, str(out_dir / "error_vs_snr.csv"))
write_summary_json(result_snr, str(out_dir / "error_vs_snr.json"))
write_svg(result_snr, str(out_dir / "error_vs_snr.svg"))

print("\nmean normalized error vs SNR (M = 64, random amplitudes/phases):")
for v in spec_snr.sweep_values:
    cell = result_snr.summary[repr(int(v))]
    print(f"{int(v):3d} dB  {cell['mds']['mean_error']:10.3e}")

print(f"\nwrote CSV/JSON/SVG files under {out_dir}")
