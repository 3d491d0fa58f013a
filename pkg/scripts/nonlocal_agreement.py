"""Nonlocal Drude-like pressures against the local plasma and Drude models at 300 K."""
import sys

import numpy as np

from thermal_casimir.lifshitz import pressure_matsubara
from thermal_casimir.materials import material
from thermal_casimir.units import EvaluationPoint


def main():
    names = ["au-plasma", "au-drude", "au-nonlocal-eq18", "au-nonlocal-eq20"]
    ms = {n: material(n) for n in names}
    print("a_um," + ",".join(names) + ",eq20_over_plasma")
    for a in np.linspace(0.2, 1.0, 9):
        pt = EvaluationPoint(a, 300.0)
        p = {n: pressure_matsubara(pt, ms[n]).pressure for n in names}
        print(f"{a:.2f}," + ",".join(f"{p[n]:.6e}" for n in names)
              + f",{p['au-nonlocal-eq20'] / p['au-plasma']:.5f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
