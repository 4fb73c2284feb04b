"""Write the data behind each reference curve as CSV, one file per curve.

    python scripts/reproduce_figures.py --out results/figures

Every curve goes through the ``sweep`` subcommand, so divergent points show
up as error rows instead of numbers. Pass ``--force-truncate N`` to fill them
with truncation-dependent values (files are then labelled in their header).
"""

import argparse
from pathlib import Path

from gksqueeze.cli import main as cli

R_GRID = "0.01:2.5:250"

FIGURES = {
    "harmonic_Q_vs_r": ["--spectrum", "harmonic", "--class", "I", "--sweep-var", "r", "--range", R_GRID],
    "ion_I_eta0.5_Q_vs_r": [
        "--spectrum", "trapped_ion", "--eta", "0.5", "--class", "I", "--sweep-var", "r", "--range", R_GRID,
    ],
    "ion_I_r1_Q_vs_eta": [
        "--spectrum", "trapped_ion", "--class", "I", "--r", "1", "--sweep-var", "eta", "--range", "0:1:101",
    ],
    "ion_IV_eta0.7_Q_vs_r": [
        "--spectrum", "trapped_ion", "--eta", "0.7", "--class", "IV", "--sweep-var", "r", "--range", R_GRID,
    ],
    "harmonic_vs_alpha_r1": [
        "--spectrum", "harmonic", "--class", "I", "--r", "1", "--sweep-var", "alpha", "--range", "0:3.5:351",
    ],
    "harmonic_vs_r_alpha1.5": [
        "--spectrum", "harmonic", "--class", "I", "--alpha", "1.5", "--sweep-var", "r", "--range", "0.01:3:300",
    ],
    "hydrogen_I_alpha0.5": [
        "--spectrum", "hydrogen", "--class", "I", "--alpha", "0.5", "--sweep-var", "r", "--range", R_GRID,
    ],
    "hydrogen_I_alpha1.5": [
        "--spectrum", "hydrogen", "--class", "I", "--alpha", "1.5", "--sweep-var", "r", "--range", R_GRID,
    ],
    "square_well_II_alpha0.1": [
        "--spectrum", "square_well", "--class", "II", "--alpha", "0.1", "--sweep-var", "r", "--range", R_GRID,
    ],
    "poschl_teller5_II_alpha4": [
        "--spectrum", "poschl_teller", "--nu", "5", "--class", "II", "--alpha", "4",
        "--sweep-var", "r", "--range", R_GRID,
    ],
    "ion_II_eta0.1_alpha1.5": [
        "--spectrum", "trapped_ion", "--eta", "0.1", "--class", "II", "--alpha", "1.5",
        "--sweep-var", "r", "--range", R_GRID,
    ],
    "ion_III_eta0.3_alpha1.5": [
        "--spectrum", "trapped_ion", "--eta", "0.3", "--class", "III", "--alpha", "1.5",
        "--sweep-var", "r", "--range", R_GRID,
    ],
    "square_well_III_alpha1.5": [
        "--spectrum", "square_well", "--class", "III", "--alpha", "1.5", "--sweep-var", "r", "--range", R_GRID,
    ],
    "poschl_teller20_III_alpha1.5": [
        "--spectrum", "poschl_teller", "--nu", "20", "--class", "III", "--alpha", "1.5",
        "--sweep-var", "r", "--range", R_GRID,
    ],
    "hydrogen_IV_alpha1.5": [
        "--spectrum", "hydrogen", "--class", "IV", "--alpha", "1.5", "--sweep-var", "r", "--range", R_GRID,
    ],
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out", default="results/figures")
    ap.add_argument("--force-truncate", type=int, default=None)
    ap.add_argument("--jobs", type=int, default=4)
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, flags in FIGURES.items():
        extra = ["--jobs", str(args.jobs), "--output", str(out / f"{name}.csv")]
        if args.force_truncate is not None:
            extra += ["--force-truncate", str(args.force_truncate)]
        code = cli(["sweep", *flags, *extra])
        print(f"{name}: exit {code}")


if __name__ == "__main__":
    main()
