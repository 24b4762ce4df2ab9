"""Metrics of the bridge-node toy network against published reference values.

    python scripts/bridge_calibration.py --out results/bridge_calibration.csv
"""
import argparse

from dircomm.calibration import calibrate, write_report

REFERENCE = {("A", "Q"): 0.4703, ("A", "Q_d"): 0.5318, ("A", "Q_LR"): (0.4574, 0.4465)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/bridge_calibration.csv")
    ap.add_argument("--tolerance", type=float, default=1e-3)
    args = ap.parse_args()
    print(write_report(calibrate(REFERENCE, args.tolerance), args.out), end="")


if __name__ == "__main__":
    main()
