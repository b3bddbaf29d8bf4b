"""Command-line entry point: ``tbvqe`` or ``python -m tbvqe``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .ansatz import AnsatzSpec, Family, build_ansatz
from .benchmarks import TABLES, reproduce
from .exact import diagonalize
from .model import CoulombConvention, ModelParams, PenaltyParams, build_qubit_hamiltonian, uniform_field
from .optim import METHODS
from .vqe import SuiteSpec, load_config, run_suite, run_vqe, write_results

SPIN_GLYPH = {(0, 0): "__", (1, 0): "up", (0, 1): "dn", (1, 1): "ud"}


def _add_model_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model (ignored when --config is given)")
    g.add_argument("--config", type=Path, help="INI experiment config; its [model] section is used")
    g.add_argument("--n-sites", type=int, default=2)
    g.add_argument("--n-electrons", type=int, help="defaults to half filling")
    g.add_argument("-t", type=float, default=1.0)
    g.add_argument("-J", type=float, default=0.0)
    g.add_argument("--u-c", type=float, default=0.0)
    g.add_argument("--b", help="JSON list of per-site 3-vectors; default unit z on every site")
    g.add_argument("--convention", choices=[c.value for c in CoulombConvention], default="literal")


def _model_from_args(args) -> tuple[ModelParams, CoulombConvention, PenaltyParams | None]:
    if args.config is not None:
        cfg = load_config(args.config)
        return cfg.model, cfg.convention, cfg.penalty
    n = args.n_sites
    b = json.loads(args.b) if args.b else uniform_field(n)
    p = ModelParams(n, args.n_electrons if args.n_electrons is not None else n, t=args.t, J=args.J,
                    U_c=args.u_c, B=tuple(tuple(v) for v in b))
    return p, CoulombConvention(args.convention), None


def _occupation_label(index: int, n_sites: int) -> str:
    cells = []
    for i in range(n_sites):
        up, dn = (index >> i) & 1, (index >> (i + n_sites)) & 1
        cells.append(SPIN_GLYPH[(up, dn)])
    return " ".join(cells)


def cmd_build_hamiltonian(args) -> int:
    p, conv, pen = _model_from_args(args)
    if args.penalty is not None:
        pen = PenaltyParams(args.penalty, p.n_electrons)
    h = build_qubit_hamiltonian(p, conv, pen)
    print(f"# {len(h)} terms on {h.width} qubits, convention={conv.value}")
    print(h.render(args.precision))
    return 0


def cmd_exact_diag(args) -> int:
    p, conv, _ = _model_from_args(args)
    sector = None if args.all_sectors else (args.sector if args.sector is not None else p.n_electrons)
    spec = diagonalize(p, conv, sector)
    print(f"sector: {'all' if sector is None else f'N = {sector}'}   convention: {conv.value}")
    print(f"ground energy: {spec.ground_energy:.12g}   degeneracy: {spec.degeneracy}")
    print("lowest levels: " + ", ".join(f"{e:.8g}" for e in spec.eigenvalues[: args.levels]))
    psi = spec.ground_state
    order = np.argsort(-np.abs(psi))
    print("ground-state amplitudes (site by site, up/dn/ud/__):")
    for idx in order[: args.amplitudes]:
        if abs(psi[idx]) < 1e-8:
            break
        print(f"  {psi[idx].real:+.6f}{psi[idx].imag:+.6f}j  |{_occupation_label(int(idx), p.n_sites)}>")
    return 0


def cmd_count_gates(args) -> int:
    families = [Family(args.family)] if args.family else list(Family)
    sites = args.n_sites or [2, 3, 4]
    print(f"{'family':<20} {'N_s':>4} {'N_p':>6} {'N_CX':>8}")
    for fam in families:
        for n in sites:
            a = build_ansatz(AnsatzSpec(fam, n, args.reps))
            print(f"{fam.value:<20} {n:>4} {a.n_params:>6} {a.n_cx:>8}")
            if args.dump:
                print(a.circuit.dump())
    return 0


def _print_result(r) -> None:
    print(f"{r.config_id}: E = {r.E:.10g}  E_dd = {r.E_dd:.10g}  dE = {r.dE_percent:.6g} %  F = {r.F:.6f}")
    print(f"  N_p = {r.N_p}  N_CX = {r.N_CX}  N_it = {r.N_it}  T = {r.T_calc_s:.2f} s  ({r.termination})")
    if r.error:
        print(f"  error: {r.error}")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    r = run_vqe(cfg)
    _print_result(r)
    if args.out:
        write_results([r], args.out)
    return 0


def cmd_suite(args) -> int:
    paths = []
    for p in args.configs:
        paths += sorted(p.glob("*.ini")) if p.is_dir() else [p]
    configs = tuple(load_config(p) for p in paths)
    suite = SuiteSpec("cli", configs, {"all": tuple(c.config_id for c in configs)})
    res = run_suite(suite, args.parallel)
    for r in res.runs:
        _print_result(r)
    avg = res.averages["all"]
    print(f"mean over {int(avg['n_runs'])} runs: dE = {avg['dE_percent']:.6g} %  F = {avg['F']:.6f}  "
          f"N_it = {avg['N_it']:.0f}  errors = {int(avg['n_errors'])}")
    if args.out:
        write_results(res.runs, args.out)
    return 0


def cmd_reproduce(args) -> int:
    opts = {"parallelism": args.parallel}
    if args.optimizers:
        opts["methods"] = args.optimizers
    if args.families:
        opts["families"] = [Family(f) for f in args.families]
    if args.sites:
        opts["sites"] = args.sites
    if args.full:
        opts["full"] = True
    rep = reproduce(args.table, args.out_dir, **opts)
    print(rep.text)
    print(f"\nwritten to {Path(args.out_dir).resolve()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tbvqe", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-hamiltonian", help="print the qubit Hamiltonian as a Pauli sum")
    _add_model_args(p)
    p.add_argument("--penalty", type=float, help="particle-number penalty strength E_f")
    p.add_argument("--precision", type=int, default=12)
    p.set_defaults(func=cmd_build_hamiltonian)

    p = sub.add_parser("exact-diag", help="exact ground state and low spectrum")
    _add_model_args(p)
    p.add_argument("--sector", type=int, help="electron number (default: the model's n_electrons)")
    p.add_argument("--all-sectors", action="store_true")
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--amplitudes", type=int, default=8)
    p.set_defaults(func=cmd_exact_diag)

    p = sub.add_parser("count-gates", help="N_p and CX counts of the ansatz families")
    p.add_argument("--family", choices=[f.value for f in Family])
    p.add_argument("--n-sites", type=int, nargs="*")
    p.add_argument("--reps", type=int)
    p.add_argument("--dump", action="store_true", help="print the circuits gate by gate")
    p.set_defaults(func=cmd_count_gates)

    p = sub.add_parser("run", help="run one VQE experiment from an INI config")
    p.add_argument("config", type=Path)
    p.add_argument("--out", type=Path, help="CSV path (a JSON sidecar is written next to it)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("suite", help="run a collection of INI configs (files or directories)")
    p.add_argument("configs", type=Path, nargs="+")
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("reproduce", help="regenerate one of the benchmark tables")
    p.add_argument("table", choices=TABLES)
    p.add_argument("--out-dir", type=Path, default=Path("results"))
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--optimizers", nargs="*", choices=METHODS)
    p.add_argument("--families", nargs="*", choices=[f.value for f in Family])
    p.add_argument("--sites", type=int, nargs="*")
    p.add_argument("--full", action="store_true", help="include the long four-site SD circuits")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
