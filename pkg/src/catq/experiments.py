"""Experiment configuration and the suites behind ``catq run`` / ``catq verify``.

Each suite returns an :class:`Outcome`: JSON-ready results, named checks of a
value against a tolerance, and optional CSV tables.  Nothing here touches
the filesystem except loading a matrix file named by the config.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .dynamics import QhPropagator, evolve_a, evolve_b
from .errors import ConfigError
from .matrix_io import load_hamiltonian
from .maximization import build_max_pair, dominant_set, oracle_maximize
from .models import (
    OscillatorSpec,
    RandomSpec,
    oscillator_hamiltonian,
    oscillator_metric,
    oscillator_qq_relations,
    random_nonnormal,
    triangular_demo,
)
from .observables import reality_sweep_series
from .probability import GridWavefunction, coherent_state, continuity_residual
from .qmetric import build_q, decompose_h, inner_q, q_adjoint
from .spectral import eigendecompose, spectral_residual

KINDS = ("reality_sweep", "max_bound", "oracle_compare", "oscillator", "continuity", "demo")
SOURCES = ("random", "file", "oscillator", "triangular")

CONFIG_KEYS = {"kind", "hamiltonian", "t_a", "t_b", "hbar", "seed", "tolerances", "params", "output_path"}
SOURCE_KEYS = {
    "random": {"source", "dim", "cond_target", "im_upper", "im_spread", "n_pinned"},
    "file": {"source", "path"},
    "oscillator": {"source", "mass", "omega", "grid_max", "n_points"},
    "triangular": {"source"},
}

DEFAULT_TOLERANCES = {
    "reality_sweep": {"max_imag_residual": 1e-9, "negative_control_min": 1e-2},
    "max_bound": {"saturation_rel": 1e-10, "overlap_drift": 1e-10},
    "oracle_compare": {"oracle_excess_rel": 1e-9, "oracle_gap_rel": 1e-3},
    "oscillator": {"residual_q": 1e-3, "residual_p": 1e-3, "residual_h": 1e-3},
    "continuity": {"continuity_residual": 1e-3, "probability_drift": 1e-8},
    "demo": {"q_error": 1e-12, "q_adjoint_error": 1e-12, "h_qa_norm": 1e-12},
}

DEFAULT_PARAMS = {
    "reality_sweep": {"n_observables": 32, "n_times": 16},
    "max_bound": {"n_times": 11},
    "oracle_compare": {"restarts": 64, "iters": 4000},
    "oscillator": {"n_check": 8, "metric": "bilinear"},
    "continuity": {"q0": 1.0, "p0": 0.5, "dt": 1e-3, "steps": 1000},
    "demo": {},
}


def _complex(value, name) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a number or [re, im]")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        return complex(value[0], value[1])
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return _complex([value["re"], value["im"]], name)
    raise ConfigError(f"{name} must be a number, [re, im] or {{\"re\": .., \"im\": ..}}, got {value!r}")


def _real(value, name) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def _int(value, name) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


@dataclass
class ExperimentConfig:
    kind: str
    hamiltonian: dict
    output_path: str
    t_a: float = 0.0
    t_b: float = 1.0
    hbar: float = 1.0
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: str = ".") -> ExperimentConfig:
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("kind", "output_path"):
            if key not in raw:
                raise ConfigError(f"missing required key {key!r}")
        kind = raw["kind"]
        if kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")
        if not isinstance(raw["output_path"], str) or not raw["output_path"]:
            raise ConfigError("output_path must be a non-empty string")
        ham = raw.get("hamiltonian", {"source": "triangular"} if kind == "demo" else None)
        if ham is None:
            raise ConfigError("missing required key 'hamiltonian'")
        if not isinstance(ham, dict) or ham.get("source") not in SOURCES:
            raise ConfigError(f"hamiltonian.source must be one of {SOURCES}")
        extra = set(ham) - SOURCE_KEYS[ham["source"]]
        if extra:
            raise ConfigError(f"unknown hamiltonian keys for source {ham['source']!r}: {sorted(extra)}")
        ham = dict(ham)
        if ham["source"] == "file":
            if not isinstance(ham.get("path"), str):
                raise ConfigError("hamiltonian.path must be a string")
            path = ham["path"] if os.path.isabs(ham["path"]) else os.path.join(base_dir, ham["path"])
            if not os.path.isfile(path):
                raise ConfigError(f"hamiltonian file not found: {ham['path']}")
            ham["_resolved_path"] = path
        if ham["source"] == "random" and "dim" not in ham:
            raise ConfigError("random hamiltonian needs 'dim'")

        t_a = _real(raw.get("t_a", 0.0), "t_a")
        t_b = _real(raw.get("t_b", 1.0), "t_b")
        if not t_b > t_a:
            raise ConfigError(f"t_b must exceed t_a (got t_a={t_a}, t_b={t_b})")
        hbar = _real(raw.get("hbar", 1.0), "hbar")
        if not hbar > 0:
            raise ConfigError("hbar must be positive")
        seed = _int(raw.get("seed", 0), "seed")

        tolerances = raw.get("tolerances", {})
        if not isinstance(tolerances, dict):
            raise ConfigError("tolerances must be an object")
        bad = set(tolerances) - set(DEFAULT_TOLERANCES[kind])
        if bad:
            raise ConfigError(f"unknown tolerances for {kind}: {sorted(bad)}")
        tolerances = {k: _real(v, f"tolerances.{k}") for k, v in tolerances.items()}

        params = raw.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("params must be an object")
        bad = set(params) - set(DEFAULT_PARAMS[kind])
        if bad:
            raise ConfigError(f"unknown params for {kind}: {sorted(bad)}")

        return cls(
            kind=kind,
            hamiltonian=ham,
            output_path=raw["output_path"],
            t_a=t_a,
            t_b=t_b,
            hbar=hbar,
            seed=seed,
            tolerances=tolerances,
            params=dict(params),
        )

    def echo(self) -> dict:
        ham = {k: v for k, v in self.hamiltonian.items() if not k.startswith("_")}
        return {
            "kind": self.kind,
            "hamiltonian": ham,
            "t_a": self.t_a,
            "t_b": self.t_b,
            "hbar": self.hbar,
            "seed": self.seed,
            "tolerances": self.effective_tolerances(),
            "params": self.effective_params(),
        }

    def effective_tolerances(self) -> dict:
        return {**DEFAULT_TOLERANCES[self.kind], **self.tolerances}

    def effective_params(self) -> dict:
        return {**DEFAULT_PARAMS[self.kind], **self.params}


@dataclass
class Outcome:
    results: dict
    checks: dict
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks.values())


def _check(value: float, tol: float, direction: str = "le") -> dict:
    ok = bool(value <= tol) if direction == "le" else bool(value >= tol)
    return {"value": float(value), "tolerance": float(tol), "relation": "<=" if direction == "le" else ">=", "pass": ok}


def oscillator_spec_from(ham: dict, hbar: float) -> OscillatorSpec:
    return OscillatorSpec(
        mass=_complex(ham.get("mass", 1.0), "mass"),
        omega=_complex(ham.get("omega", 1.0), "omega"),
        hbar=hbar,
        grid_max=_real(ham.get("grid_max", 8.0), "grid_max"),
        n_points=_int(ham.get("n_points", 256), "n_points"),
    )


def build_hamiltonian(ham: dict, seed: int, hbar: float = 1.0) -> np.ndarray:
    src = ham["source"]
    if src == "random":
        try:
            spec = RandomSpec(
                dim=_int(ham["dim"], "dim"),
                seed=seed,
                im_upper=_real(ham.get("im_upper", 0.5), "im_upper"),
                im_spread=_real(ham.get("im_spread", 1.0), "im_spread"),
                cond_target=_real(ham.get("cond_target", 10.0), "cond_target"),
                n_pinned=_int(ham.get("n_pinned", 1), "n_pinned"),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return random_nonnormal(spec)
    if src == "file":
        return load_hamiltonian(ham.get("_resolved_path", ham["path"]))
    if src == "triangular":
        return triangular_demo()[0]
    try:
        return oscillator_hamiltonian(oscillator_spec_from(ham, hbar))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _cjson(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def suite_reality_sweep(h, cfg: ExperimentConfig) -> Outcome:
    p, tol = cfg.effective_params(), cfg.effective_tolerances()
    s = eigendecompose(h)
    m = build_q(s)
    times, series = reality_sweep_series(s, m, int(p["n_observables"]), int(p["n_times"]), cfg.seed, cfg.t_a, cfg.t_b, cfg.hbar)
    _, neg = reality_sweep_series(s, m, int(p["n_observables"]), int(p["n_times"]), cfg.seed, cfg.t_a, cfg.t_b, cfg.hbar, q_hermitian=False)
    worst = float(series.max())
    neg_worst = float(neg.max())
    rows = [{"t": float(t), "max_imag_residual": float(r), "negative_control": float(nr)} for t, r, nr in zip(times, series, neg)]
    return Outcome(
        results={"dim": s.dim, "max_imag_residual": worst, "negative_control_residual": neg_worst, "cond_p": s.cond_p},
        checks={
            "max_imag_residual": _check(worst, tol["max_imag_residual"]),
            "negative_control_min": _check(neg_worst, tol["negative_control_min"], "ge"),
        },
        tables={"reality_sweep.csv": rows},
    )


def suite_max_bound(h, cfg: ExperimentConfig) -> Outcome:
    p, tol = cfg.effective_params(), cfg.effective_tolerances()
    s = eigendecompose(h)
    m = build_q(s)
    sol, _, _ = build_max_pair(s, m, cfg.t_a, cfg.t_b, cfg.hbar)
    bound = math.exp(sol.bound_b * sol.duration / cfg.hbar)
    bd = sol.boundary_data(s.dim)
    times = np.linspace(cfg.t_a, cfg.t_b, int(p["n_times"]))
    overlaps = [inner_q(m, evolve_b(s, m, bd, float(t)), evolve_a(s, bd, float(t))) for t in times]
    drift = max(abs(z - overlaps[0]) for z in overlaps) / max(1.0, abs(overlaps[0]))
    rows = [
        {"t": float(t), "overlap_re": z.real, "overlap_im": z.imag, "attained": abs(z), "bound": bound}
        for t, z in zip(times, overlaps)
    ]
    sat = abs(sol.attained - bound) / bound
    return Outcome(
        results={
            "dim": s.dim,
            "dominant_set": list(sol.dominant_set),
            "bound_b": sol.bound_b,
            "bound": bound,
            "attained": sol.attained,
            "overlap": _cjson(overlaps[0]),
        },
        checks={"saturation_rel": _check(sat, tol["saturation_rel"]), "overlap_drift": _check(drift, tol["overlap_drift"])},
        tables={"max_bound.csv": rows},
    )


def suite_oracle_compare(h, cfg: ExperimentConfig) -> Outcome:
    p, tol = cfg.effective_params(), cfg.effective_tolerances()
    s = eigendecompose(h)
    m = build_q(s)
    sol, _, _ = build_max_pair(s, m, cfg.t_a, cfg.t_b, cfg.hbar)
    orc = oracle_maximize(s, m, cfg.t_a, cfg.t_b, cfg.hbar, restarts=int(p["restarts"]), iters=int(p["iters"]), seed=cfg.seed, h=h)
    analytic = sol.attained
    excess = max(0.0, (orc.best_value - analytic) / analytic)
    gap = max(0.0, (analytic - orc.best_value) / analytic)
    rows = [{"restart": i, "value": float(v), "iterations": int(n)} for i, (v, n) in enumerate(zip(orc.values, orc.iterations))]
    return Outcome(
        results={"dim": s.dim, "analytic": analytic, "oracle_best": orc.best_value, "oracle_converged": orc.converged},
        checks={"oracle_excess_rel": _check(excess, tol["oracle_excess_rel"]), "oracle_gap_rel": _check(gap, tol["oracle_gap_rel"])},
        tables={"oracle_restarts.csv": rows},
    )


def suite_oscillator(h, cfg: ExperimentConfig) -> Outcome:
    p, tol = cfg.effective_params(), cfg.effective_tolerances()
    if cfg.hamiltonian["source"] != "oscillator":
        raise ConfigError("kind 'oscillator' needs hamiltonian.source = 'oscillator'")
    spec = oscillator_spec_from(cfg.hamiltonian, cfg.hbar)
    s = eigendecompose(h)
    if p["metric"] == "bilinear":
        m = oscillator_metric(s)
    elif p["metric"] == "euclidean":
        m = build_q(s)
    else:
        raise ConfigError("params.metric must be 'bilinear' or 'euclidean'")
    rel = oscillator_qq_relations(spec, s, m, int(p["n_check"]))
    idx, b = dominant_set(s.eigenvalues)
    ground = int(np.argmin(s.eigenvalues.real))
    order = np.argsort(s.eigenvalues.real, kind="stable")[:16]
    exact = spec.exact_eigenvalues(16)
    rows = [
        {"n": n, "lambda_re": s.eigenvalues[k].real, "lambda_im": s.eigenvalues[k].imag, "exact_re": e.real, "exact_im": e.imag}
        for n, (k, e) in enumerate(zip(order, exact))
    ]
    checks = {name: _check(getattr(rel, name), tol[name]) for name in ("residual_q", "residual_p", "residual_h")}
    checks["dominant_is_ground"] = {"value": list(idx), "expected": [ground], "pass": list(idx) == [ground]}
    return Outcome(
        results={**rel._asdict(), "theta": spec.theta, "dominant_set": list(idx), "bound_b": b, "metric": p["metric"]},
        checks=checks,
        tables={"oscillator_spectrum.csv": rows},
    )


def suite_continuity(h, cfg: ExperimentConfig) -> Outcome:
    p, tol = cfg.effective_params(), cfg.effective_tolerances()
    if cfg.hamiltonian["source"] != "oscillator":
        raise ConfigError("kind 'continuity' needs hamiltonian.source = 'oscillator'")
    spec = oscillator_spec_from(cfg.hamiltonian, cfg.hbar)
    if spec.mass.imag != 0 or spec.omega.imag != 0 or spec.mass.real <= 0:
        raise ConfigError("continuity runs need real positive mass and real omega")
    mass, omega = spec.mass.real, spec.omega.real
    dt, steps = float(p["dt"]), int(p["steps"])
    grid = spec.grid
    prop = QhPropagator(h, cfg.hbar).matrix(dt)
    psi = coherent_state(grid, float(p["q0"]), float(p["p0"]), mass, omega, cfg.hbar)
    wf = GridWavefunction(psi, grid[0], spec.dq, cfg.t_a, mass, cfg.hbar)
    p0 = wf.total_probability()
    rows = []
    first = None
    worst = 0.0
    for k in range(1, steps + 1):
        nxt = GridWavefunction(prop @ wf.samples, wf.q_min, wf.dq, cfg.t_a + k * dt, mass, cfg.hbar)
        r = continuity_residual(wf, nxt)
        first = r if first is None else first
        worst = max(worst, r)
        rows.append({"step": k, "t": nxt.t, "continuity_residual": r, "total_probability": nxt.total_probability()})
        wf = nxt
    drift = abs(wf.total_probability() - p0)
    return Outcome(
        results={"n_points": spec.n_points, "dq": spec.dq, "continuity_residual_first": first, "continuity_residual_max": worst, "probability_drift": drift},
        checks={"continuity_residual": _check(first, tol["continuity_residual"]), "probability_drift": _check(drift, tol["probability_drift"])},
        tables={"continuity.csv": rows},
    )


def suite_demo(h, cfg: ExperimentConfig) -> Outcome:
    tol = cfg.effective_tolerances()
    s = eigendecompose(h)
    m = build_q(s)
    h_adj = q_adjoint(m, h)
    h_qh, h_qa = decompose_h(m, h)
    results: dict[str, Any] = {
        "H": [[_cjson(z) for z in row] for row in h],
        "eigenvalues": [_cjson(z) for z in s.eigenvalues],
        "Q": [[_cjson(z) for z in row] for row in m.q],
        "h_qa_norm": float(np.linalg.norm(h_qa)),
        "spectral_residual": spectral_residual(h, s),
    }
    checks = {"q_adjoint_error": _check(float(np.abs(h_adj - h).max()), tol["q_adjoint_error"]), "h_qa_norm": _check(results["h_qa_norm"], tol["h_qa_norm"])}
    if cfg.hamiltonian["source"] == "triangular":
        checks["q_error"] = _check(float(np.abs(m.q - triangular_demo()[1]).max()), tol["q_error"])
    return Outcome(results=results, checks=checks)


SUITES = {
    "reality_sweep": suite_reality_sweep,
    "max_bound": suite_max_bound,
    "oracle_compare": suite_oracle_compare,
    "oscillator": suite_oscillator,
    "continuity": suite_continuity,
    "demo": suite_demo,
}


def run_suite(cfg: ExperimentConfig) -> Outcome:
    h = build_hamiltonian(cfg.hamiltonian, cfg.seed, cfg.hbar)
    return SUITES[cfg.kind](h, cfg)
