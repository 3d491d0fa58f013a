"""Fused-silica relative thermal correction with and without dc conductivity."""
import sys

import numpy as np

from thermal_casimir.analysis import CurveSpec, Quantity, curve
from thermal_casimir.materials import material


def main():
    seps = tuple(np.linspace(0.5, 5.0, 19))
    models = {"no_sigma": material("silica"), "sigma": material("silica-conductive")}
    tab = curve(CurveSpec(Quantity.RELATIVE_THERMAL_CORRECTION, models, seps, 300.0))
    print("a_um,no_sigma_pct,sigma_pct")
    for i, a in enumerate(tab.separations):
        print(f"{a:.3f},{100 * tab.columns['no_sigma'][i]:.4f},{100 * tab.columns['sigma'][i]:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
