"""Relative thermal correction for Au (Drude vs plasma) at 300 K over 0.5-6.5 um."""
import argparse
import sys

import numpy as np

from thermal_casimir.analysis import CurveSpec, Quantity, curve
from thermal_casimir.materials import material


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=61)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)
    seps = tuple(np.linspace(0.5, 6.5, args.points))
    models = {"drude": material("au-drude"), "plasma": material("au-plasma"),
              "ideal": material("ideal-metal")}
    tab = curve(CurveSpec(Quantity.RELATIVE_THERMAL_CORRECTION, models, seps, 300.0, threads=args.threads))
    print("a_um,drude_pct,plasma_pct,ideal_pct")
    for i, a in enumerate(tab.separations):
        print(f"{a:.3f}," + ",".join(f"{100 * tab.columns[n][i]:.5f}" for n in models))
    return 0


if __name__ == "__main__":
    sys.exit(main())
