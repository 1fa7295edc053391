"""Command-line entry point.

Exit status: 0 when every check passes, 1 on a numerical tolerance failure
(the summary is still written), 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__, _backend
from .errors import CatqError, ConfigError, MatrixParseError
from .experiments import ExperimentConfig, Outcome, build_hamiltonian, run_suite, suite_demo

log = logging.getLogger("catq")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(rows: list[dict]) -> str:
    """Rows of scalars to CSV; complex values become ``<name>_re``/``<name>_im`` columns."""
    flat = []
    for row in rows:
        out = {}
        for k, v in row.items():
            if isinstance(v, (complex, np.complexfloating)):
                out[f"{k}_re"], out[f"{k}_im"] = float(v.real), float(v.imag)
            else:
                out[k] = v
        flat.append(out)
    buf = io.StringIO()
    if flat:
        writer = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
        writer.writeheader()
        for row in flat:
            writer.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for k, v in row.items()})
    return buf.getvalue()


def write_outputs(out_dir: str, summary: dict, tables: dict, summary_name: str = "summary.json"):
    for name, rows in tables.items():
        _atomic_write(os.path.join(out_dir, name), csv_text(rows))
    _atomic_write(os.path.join(out_dir, "metadata.json"), dumps({"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"), "version": __version__, "backend": _backend.BACKEND}))
    _atomic_write(os.path.join(out_dir, summary_name), dumps(summary))


def _summary(echo: dict, outcome: Outcome | None, error: str | None = None) -> dict:
    if outcome is None:
        return {"config": echo, "status": "error", "error": error, "results": {}, "checks": {}}
    return {"config": echo, "status": "pass" if outcome.passed else "fail", "results": outcome.results, "checks": outcome.checks}


def _execute(cfg: ExperimentConfig) -> tuple[dict, dict, int]:
    try:
        outcome = run_suite(cfg)
    except (ConfigError, MatrixParseError):
        raise
    except (CatqError, np.linalg.LinAlgError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return _summary(cfg.echo(), None, f"{type(exc).__name__}: {exc}"), {}, EXIT_NUMERIC
    summary = _summary(cfg.echo(), outcome)
    return summary, outcome.tables, EXIT_OK if outcome.passed else EXIT_NUMERIC


def cmd_run(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    env_seed = os.environ.get("CATQ_SEED")
    if env_seed is not None and isinstance(raw, dict):
        try:
            raw["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"CATQ_SEED must be an integer, got {env_seed!r}") from None
    cfg = ExperimentConfig.from_dict(raw, base_dir=os.path.dirname(os.path.abspath(args.config)))
    summary, tables, code = _execute(cfg)
    out_dir = cfg.output_path
    if not os.path.isabs(out_dir):
        out_dir = os.path.join(os.path.dirname(os.path.abspath(args.config)), out_dir)
    write_outputs(out_dir, summary, tables)
    print(f"{cfg.kind}: {summary['status']} -> {os.path.join(out_dir, 'summary.json')}")
    for name, c in summary["checks"].items():
        print(f"  {name}: {c.get('value')!r} {'ok' if c['pass'] else 'FAILED'}")
    return code


def _fmt(z: complex) -> str:
    z = complex(z)
    re = 0.0 if abs(z.real) < 5e-13 else z.real
    im = 0.0 if abs(z.imag) < 5e-13 else z.imag
    return f"{re:g}" if im == 0 else f"{re:g}{im:+g}i"


def cmd_demo(args) -> int:
    cfg = ExperimentConfig.from_dict({"kind": "demo", "output_path": args.output or "."})
    h = build_hamiltonian(cfg.hamiltonian, cfg.seed)
    outcome = suite_demo(h, cfg)
    q = np.array([[complex(z["re"], z["im"]) for z in row] for row in outcome.results["Q"]])
    print("H = [[1, 1], [0, 2]]")
    print("eigenvalues =", ", ".join(_fmt(complex(z["re"], z["im"])) for z in outcome.results["eigenvalues"]))
    print("Q = [" + ", ".join("[" + ", ".join(_fmt(z) for z in row) + "]" for row in q) + "]")
    print(f"h_qa norm = {outcome.results['h_qa_norm']:.3g}")
    if args.output:
        write_outputs(args.output, _summary(cfg.echo(), outcome), outcome.tables)
    return EXIT_OK if outcome.passed else EXIT_NUMERIC


def cmd_verify(args) -> int:
    seed = args.seed
    if seed is None:
        env_seed = os.environ.get("CATQ_SEED")
        try:
            seed = int(env_seed) if env_seed is not None else 0
        except ValueError:
            raise ConfigError(f"CATQ_SEED must be an integer, got {env_seed!r}") from None
    if args.dim < 2:
        raise ConfigError("--dim must be at least 2")
    if not args.t > 0:
        raise ConfigError("--t must be positive")
    suites = {}
    tables = {}
    code = EXIT_OK
    for kind in ("reality_sweep", "max_bound", "oracle_compare"):
        cfg = ExperimentConfig.from_dict(
            {
                "kind": kind,
                "hamiltonian": {"source": "random", "dim": args.dim},
                "t_a": 0.0,
                "t_b": args.t,
                "seed": seed,
                "output_path": args.output,
            }
        )
        summary, suite_tables, suite_code = _execute(cfg)
        suites[kind] = summary
        tables.update(suite_tables)
        code = max(code, suite_code)
        print(f"{kind}: {summary['status']}")
    combined = {
        "verify": {"dim": args.dim, "seed": seed, "t": args.t},
        "status": "pass" if code == EXIT_OK else "fail",
        "suites": suites,
    }
    write_outputs(args.output, combined, tables)
    print(f"verify: {combined['status']} -> {os.path.join(args.output, 'summary.json')}")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catq", description="Metric inner products and the maximization principle for non-normal Hamiltonians.")
    parser.add_argument("--version", action="version", version=f"catq {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a JSON config (CATQ_SEED overrides its seed)")
    p_run.add_argument("config", help="path to the JSON config")
    p_run.set_defaults(func=cmd_run)

    p_demo = sub.add_parser("demo", help="show the metric of the 2x2 triangular example")
    p_demo.add_argument("--output", default=None, help="also write summary.json to this directory")
    p_demo.set_defaults(func=cmd_demo)

    p_ver = sub.add_parser("verify", help="reality sweep + max bound + oracle comparison on a random Hamiltonian")
    p_ver.add_argument("--dim", type=int, default=4, help="matrix dimension (default 4)")
    p_ver.add_argument("--seed", type=int, default=None, help="seed (default: CATQ_SEED or 0)")
    p_ver.add_argument("--t", type=float, default=1.0, help="duration T = t_b - t_a (default 1)")
    p_ver.add_argument("--output", default="catq-verify", help="output directory (default ./catq-verify)")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, MatrixParseError) as exc:
        print(f"catq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
