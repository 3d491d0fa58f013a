"""Real-frequency (propagating + evanescent) pressure against the Matsubara sum."""
import sys

from thermal_casimir.lifshitz import pressure_matsubara
from thermal_casimir.materials import material
from thermal_casimir.realfreq import pressure_real_frequency
from thermal_casimir.units import EvaluationPoint


def main():
    m = material("au-drude")
    print("a_um,matsubara,real_total,propagating,evanescent,rel_diff")
    for a in (0.2, 0.5):
        pt = EvaluationPoint(a, 300.0)
        ref = pressure_matsubara(pt, m).pressure
        rf = pressure_real_frequency(pt, m)
        print(f"{a},{ref:.8e},{rf.total:.8e},{rf.propagating:.6e},{rf.evanescent:.6e},{rf.total / ref - 1:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
