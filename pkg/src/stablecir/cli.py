"""Command-line front end: simulate, estimate, laplace, experiment, oracle-check.

Exit status 0 on success, 1 on invalid input (one line on stderr starting with
"error:"), 2 on a numerical fault. Outputs are written to a temporary file and
renamed into place, so a failed run never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile

from .experiments import ExperimentConfig, run_experiment
from .inference import mle_b
from .model import ModelParams, NumericalFault, ValidationError
from .simulate import path_sidecar, path_to_rows, read_path, simulate_path
from .transforms import joint_laplace, laplace_V, laplace_Y, oracle_suite, stationary_laplace

__all__ = ["main", "run"]

CONFIG_VERSION = 1

log = logging.getLogger("stablecir")

_SCHEMAS = {
    "simulate": ({"version", "params", "T", "n_steps"}, {"seed", "kappa"}),
    "estimate": ({"version", "path"}, {"params", "method", "b_true", "kappa"}),
    "laplace": ({"version", "params", "kind"}, {"lambda", "t", "u", "v", "route"}),
    "experiment": ({"version", "params", "T_grid", "dt", "n_reps"}, {"base_seed", "method", "kappa"}),
    "oracle-check": ({"version"}, {"rtol", "residual_tol"}),
}


def _load_config(path, command) -> dict:
    if path is None:
        if command == "oracle-check":
            return {"version": CONFIG_VERSION}
        raise ValidationError("--config is required")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object")
    required, optional = _SCHEMAS[command]
    unknown = set(data) - required - optional
    if unknown:
        raise ValidationError(f"unknown config field(s): {sorted(unknown)}")
    missing = required - set(data)
    if missing:
        raise ValidationError(f"missing config field(s): {sorted(missing)}")
    if data["version"] != CONFIG_VERSION:
        raise ValidationError(f"unsupported config version {data['version']!r}")
    data["_dir"] = os.path.dirname(os.path.abspath(path))
    return data


def _number(data, key, default=None):
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{key} must be a number, got {value!r}")
    return value


def _json_default(x):
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def _clean(obj):
    # JSON has no inf/nan; emit them as strings
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _dumps(obj) -> str:
    # repr of a float is its shortest round-trip form
    return json.dumps(_clean(obj), indent=2, default=_json_default) + "\n"


def _write_atomic(target, text: str):
    target = os.path.abspath(target)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-", suffix=os.path.basename(target))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(out, text: str):
    if out is None:
        sys.stdout.write(text)
    else:
        _write_atomic(out, text)


def _as_csv(record: dict) -> str:
    flat = {k: v for k, v in record.items() if not isinstance(v, dict)}
    keys = list(flat)
    vals = [format(v, ".17g") if isinstance(v, float) else str(v) for v in flat.values()]
    return ",".join(keys) + "\n" + ",".join(vals) + "\n"


# --- subcommands -----------------------------------------------------------------

def _cmd_simulate(cfg, args):
    p = ModelParams.from_dict(cfg["params"])
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ValidationError(f"seed must be a nonnegative integer, got {seed!r}")
    n_steps = cfg["n_steps"]
    if isinstance(n_steps, bool) or not isinstance(n_steps, int) or n_steps < 1:
        raise ValidationError(f"n_steps must be a positive integer, got {n_steps!r}")
    T = _number(cfg, "T")
    kappa = _number(cfg, "kappa", 6.0)
    if args.out is None:
        raise ValidationError("simulate needs --out <file.csv>")
    path = simulate_path(p, T, n_steps, seed, kappa=kappa)
    buf = "".join(",".join(row) + "\n" for row in path_to_rows(path))
    stem, _ = os.path.splitext(args.out)
    _write_atomic(args.out, buf)
    _write_atomic(stem + ".json", _dumps(path_sidecar(path)))


def _cmd_estimate(cfg, args):
    csv_path = cfg["path"]
    if not isinstance(csv_path, str):
        raise ValidationError("path must be a string")
    if not os.path.isabs(csv_path):
        csv_path = os.path.join(cfg["_dir"], csv_path)
    if not os.path.exists(csv_path):
        raise ValidationError(f"path file {csv_path} does not exist")
    path = read_path(csv_path)
    p = ModelParams.from_dict(cfg["params"]) if "params" in cfg else path.params_used
    if p is None:
        raise ValidationError("no parameters: give params in the config or a JSON sidecar")
    b_true = cfg.get("b_true")
    if b_true is not None:
        b_true = _number(cfg, "b_true")
    method = cfg.get("method", "full")
    if method not in ("full", "path"):
        raise ValidationError(f"method must be 'full' or 'path', got {method!r}")
    kw = {"kappa": _number(cfg, "kappa")} if "kappa" in cfg else {}
    report = mle_b(path, method, p, b_true, **kw).to_dict()
    _emit(args.out, _as_csv(report) if args.format == "csv" else _dumps(report))


def _cmd_laplace(cfg, args):
    p = ModelParams.from_dict(cfg["params"])
    kind = cfg["kind"]
    query = {k: v for k, v in cfg.items() if k not in ("_dir", "version")}
    if kind == "Y":
        res = laplace_Y(p, _number(cfg, "lambda"), _number(cfg, "t"), route=cfg.get("route", "ode"))
    elif kind == "joint":
        res = joint_laplace(p, _number(cfg, "u"), _number(cfg, "v"), _number(cfg, "t"))
    elif kind == "stationary":
        res = stationary_laplace(p, _number(cfg, "lambda"))
    elif kind == "V":
        res = laplace_V(p, _number(cfg, "u"))
    else:
        raise ValidationError(f"kind must be one of Y, joint, stationary, V; got {kind!r}")
    out = {"query": query, "value": res.value, "diagnostics": res.diagnostics}
    _emit(args.out, _as_csv({"kind": kind, "value": res.value}) if args.format == "csv" else _dumps(out))


def _cmd_experiment(cfg, args):
    data = {k: v for k, v in cfg.items() if k != "_dir"}
    if args.seed is not None:
        data["base_seed"] = args.seed
    config = ExperimentConfig.from_dict(data)
    if args.workers < 1:
        raise ValidationError("--workers must be >= 1")
    if args.out is None:
        raise ValidationError("experiment needs --out <stem>")
    result = run_experiment(config, workers=args.workers)
    log.info("%d rows in %.2f s on %d worker(s)", len(result.rows), result.runtime["seconds"], args.workers)
    stem, ext = os.path.splitext(args.out)
    if ext not in (".csv", ".json"):
        stem = args.out
    if args.format in (None, "csv"):
        _write_atomic(stem + ".csv", result.to_csv())
    if args.format in (None, "json"):
        _write_atomic(stem + ".json", _dumps(result.summary_dict()))


def _cmd_oracle_check(cfg, args):
    rows = oracle_suite(_number(cfg, "rtol", 1e-8), _number(cfg, "residual_tol", 1e-7))
    lines = [f"{'kind':<14}{'case':<26}{'point':>24}{'error':>12}  result"]
    for r in rows:
        point = r["point"]
        pt = ",".join(f"{x:.4g}" for x in point) if isinstance(point, list) else f"{point:.6g}"
        lines.append(f"{r['kind']:<14}{r['case']:<26}{pt:>24}{r['error']:>12.2e}  "
                     f"{'pass' if r['passed'] else 'FAIL'}")
    n_fail = sum(not r["passed"] for r in rows)
    lines.append(f"{len(rows) - n_fail}/{len(rows)} passed")
    _emit(args.out, "\n".join(lines) + "\n")
    if n_fail:
        raise NumericalFault(f"{n_fail} oracle comparison(s) failed")


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "laplace": _cmd_laplace,
    "experiment": _cmd_experiment,
    "oracle-check": _cmd_oracle_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stablecir", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--format", choices=("csv", "json"))
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is not None and args.seed < 0:
            raise ValidationError("--seed must be nonnegative")
        logging.basicConfig(level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
                            format="%(levelname)s %(message)s", stream=sys.stderr)
        cfg = _load_config(args.config, args.command)
        log.info("running %s with config %s", args.command, args.config)
        _COMMANDS[args.command](cfg, args)
    except ValidationError as exc:
        print(f"error: {' '.join(str(exc).split())}", file=sys.stderr)
        return 1
    except (NumericalFault, ArithmeticError) as exc:
        print(f"numeric-fault: {' '.join(str(exc).split())}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
