"""Depolarizing CX noise at zero angles: energy drift versus noise level and versus CX count.

Run with ``python demos/noise_scan.py``.
"""

from __future__ import annotations

from tbvqe.ansatz import AnsatzSpec, Family, InitialStateKind, build_ansatz
from tbvqe.benchmarks import theta0_energies

P_VALUES = (0.0, 0.005, 0.01, 0.02)


def main() -> None:
    fams = sorted((f for f in Family if f is not Family.GENERIC), key=lambda f: build_ansatz(AnsatzSpec(f, 2)).n_cx)
    print(f"{'family':<18} {'N_CX':>5} " + " ".join(f"{'p=' + format(p, 'g'):>10}" for p in P_VALUES))
    for fam in fams:
        row = theta0_energies(2, fam, P_VALUES, set_name="set1", init=InitialStateKind.FM)
        print(f"{fam.value:<18} {row['N_CX']:>5} " + " ".join(f"{row[f'E_p{p:g}']:>10.5f}" for p in P_VALUES))
    print("(the p = 0 column is the classical energy of the initial state)")


if __name__ == "__main__":
    main()
