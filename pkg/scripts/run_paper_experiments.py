#!/usr/bin/env python3
"""Run the full experiment battery on the bundled reference scenario.

Produces the CSVs behind the four comparison figures: secrecy rate
versus SNR, BER versus angle and range, memory-ratio sweeps over N, L
and K, and the construction-time benchmark. Everything is seeded, so
rerunning reproduces identical CSVs (timing values excepted).

Usage: python scripts/run_paper_experiments.py [output_dir]
"""
import pathlib
import sys

from fdadm.cli import main
from fdadm.scenario_io import bundled_scenario_path


def run(out_dir: pathlib.Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    scenario = bundled_scenario_path()
    jobs = [
        ("validate", ["validate", "--scenario", scenario,
                      "--out", str(out_dir / "validate.csv")]),
        ("secrecy rate vs SNR", ["secrecy", "--scenario", scenario,
                                 "--out", str(out_dir / "secrecy_vs_snr.csv")]),
        ("BER vs angle", ["ber", "--scenario", scenario, "--mode", "angle",
                          "--out", str(out_dir / "ber_vs_angle.csv")]),
        ("BER vs range", ["ber", "--scenario", scenario, "--mode", "range",
                          "--out", str(out_dir / "ber_vs_range.csv")]),
        ("memory ratio vs N", ["memratio", "--scenario", scenario, "--vary", "n",
                               "--from", "1", "--to", "100",
                               "--out", str(out_dir / "memratio_vs_n.csv")]),
        ("memory ratio vs L", ["memratio", "--scenario", scenario, "--vary", "l",
                               "--from", "1", "--to", "12",
                               "--out", str(out_dir / "memratio_vs_l.csv")]),
        ("memory ratio vs K", ["memratio", "--scenario", scenario, "--vary", "k",
                               "--from", "1", "--to", "16",
                               "--out", str(out_dir / "memratio_vs_k.csv")]),
        ("construction timing", ["bench", "--scenario", scenario,
                                 "--out", str(out_dir / "bench.csv")]),
    ]
    for label, argv in jobs:
        print(f"== {label}")
        code = main(argv)
        if code != 0:
            sys.exit(code)
    print(f"done; CSVs in {out_dir}/")


if __name__ == "__main__":
    run(pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "results"))
