"""VQE driver, experiment configuration and suites."""

from __future__ import annotations

import configparser
import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ansatz import (CLUSTER_FAMILIES, AnsatzSpec, Family, InitialStateKind, build_ansatz,
                     initial_occupations, prepare_initial)
from .circuit import Circuit
from .exact import diagonalize, reference_fidelity
from .model import (CoulombConvention, ModelParams, PenaltyParams, build_qubit_hamiltonian,
                    number_pauli)
from .optim import METHODS, SHOT_FD_STEP, Budget, Objective, minimize
from .simulate import (DenseObservable, NoiseModel, StatevectorProgram, estimate_energy, expectation,
                       run_density, run_statevector)

NO_OPTIMIZER = "none"


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelParams
    ansatz: AnsatzSpec
    init: InitialStateKind = InitialStateKind.AFM
    method: str = "slsqp_style"
    budget: Budget = field(default_factory=Budget)
    convention: CoulombConvention = CoulombConvention.LITERAL
    penalty: PenaltyParams | None = None
    backend: str = "exact"
    shots: int = 0
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 0
    theta_init: str = "zeros"
    theta_scale: float = 0.1
    init_occupied: tuple[int, ...] | None = None
    config_id: str = "run"
    label: str = "reconstruction"

    def __post_init__(self):
        object.__setattr__(self, "init", InitialStateKind(self.init))
        object.__setattr__(self, "convention", CoulombConvention(self.convention))
        if self.method not in METHODS + (NO_OPTIMIZER,):
            raise ValueError(f"unknown optimizer {self.method!r}")
        if self.ansatz.n_sites != self.model.n_sites:
            raise ValueError("ansatz and model disagree on n_sites")
        if self.ansatz.family is Family.GENERIC and self.penalty is None:
            raise ValueError("the Generic family needs a particle-number penalty")
        if self.backend not in ("exact", "shots"):
            raise ValueError("backend must be 'exact' or 'shots'")
        if self.backend == "shots":
            if self.shots <= 0:
                raise ValueError("shot backend needs shots > 0")
            if self.noise.p_cx > 0:
                raise ValueError("shot sampling runs on the noiseless statevector only")
        if self.theta_init not in ("zeros", "uniform"):
            raise ValueError("theta_init must be 'zeros' or 'uniform'")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["init"] = self.init.value
        d["convention"] = self.convention.value
        d["ansatz"]["family"] = self.ansatz.family.value
        return d


@dataclass
class RunResult:
    config_id: str
    family: str
    optimizer: str
    n_sites: int
    N_p: int
    N_CX: int
    E: float
    E_dd: float
    dE_percent: float
    F: float
    N_it: int
    T_calc_s: float
    seed: int
    termination: str
    F_ideal: float = float("nan")
    n_expect: float = float("nan")
    degenerate: bool = False
    theta: list[float] = field(default_factory=list, repr=False)
    config: dict = field(default_factory=dict, repr=False)
    error: str = ""

    CSV_FIELDS = ("config_id", "family", "optimizer", "n_sites", "N_p", "N_CX", "E", "E_dd",
                  "dE_percent", "F", "N_it", "T_calc_s", "seed", "termination")

    def csv_row(self) -> list[str]:
        return [_fmt(getattr(self, k)) for k in self.CSV_FIELDS]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def initial_theta(cfg: ExperimentConfig, n_params: int) -> np.ndarray:
    if cfg.theta_init == "zeros":
        return np.zeros(n_params)
    rng = np.random.default_rng(cfg.seed)
    return rng.uniform(-cfg.theta_scale, cfg.theta_scale, n_params)


class EnergyObjective:
    """theta -> energy for one configuration (the full circuit starts from |0>)."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        m = cfg.model
        self.ansatz = build_ansatz(cfg.ansatz)
        init = prepare_initial(cfg.init, m.n_sites, m.n_electrons, cfg.init_occupied)
        self.circuit = Circuit(init.width).extend(init).extend(self.ansatz.circuit)
        self.hamiltonian = build_qubit_hamiltonian(m, cfg.convention, cfg.penalty)
        self.dense = DenseObservable(self.hamiltonian)
        self.program = StatevectorProgram(self.circuit)
        self._shot_calls = 0

    def state(self, theta, noisy: bool = True):
        if noisy and self.cfg.noise.p_cx > 0:
            return run_density(self.circuit.bind(theta), noise=self.cfg.noise)
        return self.program.run(theta)

    def __call__(self, theta) -> float:
        if self.cfg.backend == "shots":
            self._shot_calls += 1
            mean, _ = estimate_energy(self.hamiltonian, self.circuit.bind(theta), self.cfg.shots,
                                      seed=self.cfg.seed * 1_000_003 + self._shot_calls)
            return mean
        return self.dense(self.state(theta))


def run_vqe(cfg: ExperimentConfig) -> RunResult:
    t0 = time.perf_counter()
    m = cfg.model
    energy = EnergyObjective(cfg)
    spectrum = diagonalize(m, cfg.convention, sector=m.n_electrons)
    theta0 = initial_theta(cfg, energy.ansatz.n_params)
    obj = Objective(energy, energy.ansatz.n_params)
    budget = cfg.budget
    if cfg.backend == "shots" and budget.fd_step is None:
        budget = replace(budget, fd_step=SHOT_FD_STEP)
    if cfg.method == NO_OPTIMIZER:
        obj(theta0)
        theta, reason = theta0, "not optimized"
    else:
        res = minimize(cfg.method, obj, theta0, budget)
        theta, reason = res.x, res.termination
    # report the exact energy at theta* even when optimizing on shots
    final = energy.state(theta)
    e = energy.dense(final)
    pure = energy.state(theta, noisy=False)
    f_state, degenerate = reference_fidelity(final, spectrum)
    f_ideal, _ = reference_fidelity(pure, spectrum)
    n_exp = expectation(number_pauli(m.n_modes), final)
    e_dd = spectrum.ground_energy
    if e_dd != 0:
        de = abs(e - e_dd) / abs(e_dd) * 100
    else:  # relative deviation undefined for a zero reference
        de = 0.0 if abs(e) < 1e-12 else float("inf")
    if (cfg.noise.p_cx == 0 and cfg.backend == "exact" and cfg.ansatz.family in CLUSTER_FAMILIES
            and e < e_dd - 1e-9):
        raise AssertionError(f"variational bound violated: {e} < {e_dd}")
    return RunResult(
        config_id=cfg.config_id, family=cfg.ansatz.family.value, optimizer=cfg.method,
        n_sites=m.n_sites, N_p=energy.ansatz.n_params, N_CX=energy.ansatz.n_cx,
        E=e, E_dd=e_dd, dE_percent=de, F=f_state, N_it=obj.count,
        T_calc_s=time.perf_counter() - t0, seed=cfg.seed, termination=reason,
        F_ideal=f_ideal, n_expect=n_exp, degenerate=degenerate,
        theta=[float(x) for x in theta], config=cfg.to_dict(),
    )


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    configs: tuple[ExperimentConfig, ...]
    groups: dict[str, tuple[str, ...]]

    def __post_init__(self):
        ids = {c.config_id for c in self.configs}
        if len(ids) != len(self.configs):
            raise ValueError("config ids must be unique")
        for g, members in self.groups.items():
            if not members:
                raise ValueError(f"group {g!r} is empty")
            missing = set(members) - ids
            if missing:
                raise ValueError(f"group {g!r} references unknown configs {sorted(missing)}")


@dataclass
class SuiteResult:
    runs: list[RunResult]
    averages: dict[str, dict[str, float]]


AVERAGED = ("dE_percent", "F", "N_it", "T_calc_s")


def _safe_run(cfg: ExperimentConfig) -> RunResult:
    try:
        return run_vqe(cfg)
    except Exception as exc:  # keep the suite going, report the failure in the row
        nan = float("nan")
        return RunResult(cfg.config_id, cfg.ansatz.family.value, cfg.method, cfg.model.n_sites,
                         0, 0, nan, nan, nan, nan, 0, 0.0, cfg.seed, "error", error=repr(exc),
                         config=cfg.to_dict())


def run_suite(suite: SuiteSpec, parallelism: int = 1) -> SuiteResult:
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            runs = list(pool.map(_safe_run, suite.configs))
    else:
        runs = [_safe_run(c) for c in suite.configs]
    by_id = {r.config_id: r for r in runs}
    averages = {}
    for g, members in suite.groups.items():
        rows = [by_id[i] for i in members]
        averages[g] = {k: float(np.mean([getattr(r, k) for r in rows])) for k in AVERAGED}
        averages[g]["n_runs"] = len(rows)
        averages[g]["n_errors"] = sum(1 for r in rows if r.error)
    return SuiteResult(runs, averages)


def write_results(runs: Sequence[RunResult], csv_path: str | Path) -> None:
    """CSV with one row per run plus a JSON sidecar echoing every config."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with csv_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RunResult.CSV_FIELDS)
        for r in runs:
            w.writerow(r.csv_row())
    side = [{**{k: _json_num(getattr(r, k)) for k in RunResult.CSV_FIELDS},
             "F_ideal": _json_num(r.F_ideal), "n_expect": _json_num(r.n_expect),
             "degenerate": r.degenerate, "error": r.error,
             "theta": [_json_num(x) for x in r.theta], "config": _json_tree(r.config)} for r in runs]
    csv_path.with_suffix(".json").write_text(json.dumps(side, indent=1))


def _json_num(v):
    if isinstance(v, float):
        return float(f"{v:.12g}") if np.isfinite(v) else str(v)
    return v


def _json_tree(d):
    if isinstance(d, dict):
        return {k: _json_tree(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [_json_tree(v) for v in d]
    return _json_num(d)


# ---- config files ---------------------------------------------------------

def load_config(path: str | Path, config_id: str | None = None) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";",))
    if not cp.read(path):
        raise FileNotFoundError(path)
    return config_from_parser(cp, config_id or Path(path).stem)


def config_from_parser(cp: configparser.ConfigParser, config_id: str) -> ExperimentConfig:
    md = cp["model"]
    n_sites = md.getint("n_sites")
    b = json.loads(md.get("b", "null")) or [[0.0, 0.0, 1.0]] * n_sites
    model = ModelParams(n_sites=n_sites, n_electrons=md.getint("n_electrons", n_sites),
                        t=md.getfloat("t", 1.0), J=md.getfloat("J", 0.0), U_c=md.getfloat("u_c", 0.0),
                        B=tuple(tuple(v) for v in b))
    an = cp["ansatz"] if cp.has_section("ansatz") else {}
    reps = an.get("reps") if an else None
    spec = AnsatzSpec(Family(an.get("family", "SimplifiedYAB_SD") if an else "SimplifiedYAB_SD"), n_sites,
                      int(reps) if reps else None)
    it = cp["init"] if cp.has_section("init") else {}
    occ = it.get("occupied") if it else None
    op = cp["optimizer"] if cp.has_section("optimizer") else None
    budget = Budget()
    method = "slsqp_style"
    theta_init = "zeros"
    if op is not None:
        method = op.get("method", method)
        budget = Budget(max_evals=op.getint("max_evals", budget.max_evals),
                        ftol=op.getfloat("ftol", budget.ftol), xtol=op.getfloat("xtol", budget.xtol),
                        fd_step=op.getfloat("fd_step", fallback=None), gtol=op.getfloat("gtol", budget.gtol))
        theta_init = op.get("theta_init", theta_init)
    bk = cp["backend"] if cp.has_section("backend") else None
    backend, shots, p_cx, seed = "exact", 0, 0.0, 0
    if bk is not None:
        backend = bk.get("mode", backend)
        shots = bk.getint("shots", 0)
        p_cx = bk.getfloat("noise_p_cx", 0.0)
        seed = bk.getint("seed", 0)
    penalty = None
    if cp.has_section("penalty"):
        pn = cp["penalty"]
        penalty = PenaltyParams(pn.getfloat("e_f"), pn.getint("n_e_target", model.n_electrons))
    return ExperimentConfig(
        model=model, ansatz=spec, init=InitialStateKind(it.get("kind", "AFM") if it else "AFM"),
        method=method, budget=budget, convention=CoulombConvention(md.get("coulomb_convention", "literal")),
        penalty=penalty, backend=backend, shots=shots, noise=NoiseModel(p_cx, seed), seed=seed,
        theta_init=theta_init, init_occupied=tuple(json.loads(occ)) if occ else None,
        config_id=config_id,
    )


def config_to_ini(cfg: ExperimentConfig) -> str:
    cp = configparser.ConfigParser()
    m = cfg.model
    cp["model"] = {"n_sites": m.n_sites, "n_electrons": m.n_electrons, "t": m.t, "J": m.J, "u_c": m.U_c,
                   "b": json.dumps([list(v) for v in m.B]), "coulomb_convention": cfg.convention.value}
    cp["ansatz"] = {"family": cfg.ansatz.family.value}
    if cfg.ansatz.reps is not None:
        cp["ansatz"]["reps"] = str(cfg.ansatz.reps)
    cp["init"] = {"kind": cfg.init.value}
    if cfg.init_occupied is not None:
        cp["init"]["occupied"] = json.dumps(list(cfg.init_occupied))
    b = cfg.budget
    cp["optimizer"] = {"method": cfg.method, "max_evals": b.max_evals, "ftol": b.ftol, "xtol": b.xtol,
                       "gtol": b.gtol, "theta_init": cfg.theta_init}
    if b.fd_step is not None:
        cp["optimizer"]["fd_step"] = str(b.fd_step)
    cp["backend"] = {"mode": cfg.backend, "shots": cfg.shots, "noise_p_cx": cfg.noise.p_cx, "seed": cfg.seed}
    if cfg.penalty is not None:
        cp["penalty"] = {"e_f": cfg.penalty.E_f, "n_e_target": cfg.penalty.n_e}
    buf = io.StringIO()
    buf.write(f"# label: {cfg.label}\n")
    cp.write(buf)
    return buf.getvalue()


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **kw)


def initial_state_energy(cfg: ExperimentConfig) -> float:
    """Energy of the prepared initial state (no ansatz, no noise)."""
    m = cfg.model
    init = prepare_initial(cfg.init, m.n_sites, m.n_electrons, cfg.init_occupied)
    h = DenseObservable(build_qubit_hamiltonian(m, cfg.convention))
    return h(run_statevector(init))


def describe_initial(cfg: ExperimentConfig) -> list[list[int]]:
    m = cfg.model
    return initial_occupations(cfg.init, m.n_sites, m.n_electrons, cfg.init_occupied)


def iter_ids(runs: Iterable[RunResult]) -> list[str]:
    return [r.config_id for r in runs]
