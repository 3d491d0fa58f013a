"""Low-temperature Casimir entropy and Nernst classification for the standard models."""
import sys

import numpy as np

from thermal_casimir.entropy import entropy_curve
from thermal_casimir.materials import material

CASES = [
    ("au-plasma", np.linspace(1.0, 50.0, 50)),
    ("au-drude-perfect", np.linspace(1.0, 50.0, 50)),
    ("au-drude", np.geomspace(1e-5, 50.0, 40)),     # impurity plateau sits below ~1 K
    ("silica", np.linspace(1.0, 50.0, 50)),
    ("silica-conductive-frozen", np.linspace(1.0, 50.0, 50)),
    ("silica-conductive", np.linspace(1.0, 50.0, 50)),
]


def main(a=1.0):
    print("material,S0_kB_per_16pi_a2,tolerance,classification")
    for name, grid in CASES:
        c = entropy_curve(a, material(name), grid)
        unit = c.entropies[-1] / c.in_units(a)[-1]
        print(f"{name},{c.limit_estimate / unit:.6f},{c.tolerance / unit:.2e},{c.classification.value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
