"""Two-site walkthrough: Hamiltonian, exact reference, then VQE with two ansatz families.

Run with ``python demos/two_site_walkthrough.py``.
"""

from __future__ import annotations

from tbvqe.ansatz import AnsatzSpec, Family, InitialStateKind
from tbvqe.benchmarks import benchmark_model
from tbvqe.exact import diagonalize
from tbvqe.model import build_qubit_hamiltonian
from tbvqe.vqe import ExperimentConfig, run_vqe


def main() -> None:
    model = benchmark_model("set2")
    h = build_qubit_hamiltonian(model)
    print(f"qubit Hamiltonian: {len(h)} Pauli terms on {h.width} qubits")

    spec = diagonalize(model, sector=model.n_electrons)
    print(f"exact ground energy (N = 2): {spec.ground_energy:.8f}, degenerate: {spec.is_degenerate}")

    for family in (Family.SIMPLIFIED_YAB_S, Family.SIMPLIFIED_YAB_SD):
        cfg = ExperimentConfig(model=model, ansatz=AnsatzSpec(family, model.n_sites), init=InitialStateKind.FM,
                               method="slsqp_style", theta_init="uniform", config_id=family.value)
        r = run_vqe(cfg)
        print(f"{family.value:<18} N_p={r.N_p:<3} N_CX={r.N_CX:<4} E={r.E:+.6f} dE={r.dE_percent:.3g}% "
              f"F={r.F:.4f} N_it={r.N_it}")


if __name__ == "__main__":
    main()
