"""``qmacro`` command line.

Verbs: ``size``, ``nrf``, ``times``, ``sweep``, ``plotdata``, ``verify``.
Reports are JSON (or CSV for grids), carry the config hash, truncation
certificate and library version, and contain no timestamps, so a fixed
config and seed reproduce them byte for byte.

Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 numerical
or truncation failure, 4 capacity exceeded.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from pathlib import Path

import numpy as np

from . import __version__, fock
from .branch_size import (
    PANELS,
    c_delta,
    ellipse_csv,
    ellipse_data,
    figure_ellipses,
    gaussian_cat_size,
)
from .config import DEFAULT_TOL, Tolerances
from .errors import QMacroError, ValidationError
from .fisher import nrf_measure
from .operators import check_hermitian, check_unitary
from .speed_limits import (
    fubini_study_ratio,
    frowis_gap,
    nrf_time_ratio,
    qfi,
    rate_bound_check,
    speed_limit_report,
)
from .superposition import (
    GAUSSIAN_CATS,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    NamedState,
    Space,
    StateName,
    _jsonable,
    build_superposition,
    named_state,
)

SCHEMA_VERSION = 1
NAMED = [s.value for s in StateName]
DEFAULT_FOCK_DIM = 40


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: complex as {re, im}, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    obj = _jsonable(obj)
    if isinstance(obj, dict):
        return _clean(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


_NOT_CONFIG = {"config", "out", "json", "csv", "func", "workers"}


def effective_config(args: argparse.Namespace) -> dict:
    return {k: _clean(v) for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def envelope(verb: str, args, result, truncation=None) -> dict:
    cfg = effective_config(args)
    return {
        "schema": f"qmacro.{verb}/{SCHEMA_VERSION}",
        "version": __version__,
        "config": cfg,
        "config_hash": config_hash(cfg),
        "truncation": truncation,
        "result": result,
    }


def emit(text: str, args) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _tol(args) -> Tolerances:
    return DEFAULT_TOL if args.tolerance is None else DEFAULT_TOL.with_num(args.tolerance)


# --------------------------------------------------------------------------
# state and operator construction
# --------------------------------------------------------------------------


def load_complex(path: str) -> np.ndarray:
    """CSV of interleaved real/imaginary parts, row-major; a vector or a
    square matrix is inferred from the entry count."""
    flat = np.loadtxt(path, delimiter=",", ndmin=1).ravel()
    if flat.size % 2:
        raise ValidationError(f"{path}: odd number of entries, expected real/imag pairs")
    z = flat[0::2] + 1j * flat[1::2]
    d = math.isqrt(z.size)
    if d * d == z.size and d > 1:
        return z.reshape(d, d)
    return z


def _kv(spec: str) -> tuple[str, dict]:
    """``name:key=value,key=value`` -> (name, params)."""
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        k, _, v = item.partition("=")
        try:
            params[k.strip()] = complex(v.replace(" ", "")) if "j" in v else float(v)
        except ValueError as exc:
            raise ValidationError(f"bad parameter {item!r} in {spec!r}") from exc
    return name.strip().lower(), params


def make_vector(spec: str, dim: int | None, tol: Tolerances) -> np.ndarray:
    """Single-mode pure state: zero, one, plus, minus, vacuum,
    coherent:alpha=..., fock:n=..., or a CSV file path."""
    if Path(spec).suffix == ".csv":
        return load_complex(spec)
    name, p = _kv(spec)
    s = 1 / math.sqrt(2)
    qubit = {"zero": [1, 0], "one": [0, 1], "plus": [s, s], "minus": [s, -s]}
    if name in qubit:
        return np.array(qubit[name], dtype=complex)
    d = dim or DEFAULT_FOCK_DIM
    if name == "vacuum":
        return fock.basis_state(d, 0)
    if name == "coherent":
        return fock.coherent_state(d, p.get("alpha", 1.0), tol)
    if name == "fock":
        return fock.basis_state(d, int(np.real(p.get("n", 1))))
    raise ValidationError(f"unknown state {spec!r}")


def make_operator(spec: str, dim: int | None, tol: Tolerances, unitary: bool) -> np.ndarray:
    """Single-mode operator by name (sigmax, sigmay, sigmaz, hadamard,
    number, parity, quadrature:theta=, displacement:beta=, squeeze:xi=,
    phase:theta=) or a CSV file path."""
    if Path(spec).suffix == ".csv":
        m = load_complex(spec)
        if m.ndim != 2:
            raise ValidationError(f"{spec}: expected a square matrix")
        return check_unitary(m, tol) if unitary else check_hermitian(m, tol)
    name, p = _kv(spec)
    qubit = {"sigmax": PAULI_X, "sigmay": PAULI_Y, "sigmaz": PAULI_Z,
             "hadamard": (PAULI_X + PAULI_Z) / math.sqrt(2)}
    if name in qubit:
        return qubit[name]
    d = dim or DEFAULT_FOCK_DIM
    if name == "number":
        return fock.number(d)
    if name == "parity":
        return fock.parity(d)
    if name == "quadrature":
        return fock.quadrature(d, float(np.real(p.get("theta", 0.0))))
    if name == "displacement":
        return fock.displacement_operator(d, p.get("beta", 1.0), tol)
    if name == "squeeze":
        return fock.squeeze_operator(d, p.get("xi", 0.5), tol)
    if name == "phase":
        return np.diag(np.exp(-1j * float(np.real(p.get("theta", 0.0))) * np.arange(d)))
    raise ValidationError(f"unknown operator {spec!r}")


def make_state(args, tol: Tolerances):
    """Named superposition, or ``custom`` built from --phi and --unitary."""
    if args.state == "custom":
        if not args.phi or not args.unitary:
            raise ValidationError("custom states need --phi and --unitary")
        phi = make_vector(args.phi, args.truncation, tol)
        U = make_operator(args.unitary, len(phi), tol, unitary=True)
        space = Space.SPIN if len(phi) == 2 else Space.FOCK
        return build_superposition(phi, U, args.modes, space, tol, name="custom",
                                   params={"phi": args.phi, "unitary": args.unitary})
    if args.state not in NAMED:
        raise ValidationError(f"unknown state {args.state!r}; choose from {NAMED + ['custom']}")
    spec = NamedState(args.state, args.modes, args.alpha, args.xi, args.n, args.truncation)
    return named_state(spec, tol)


# --------------------------------------------------------------------------
# verbs
# --------------------------------------------------------------------------


def cmd_size(args) -> int:
    tol = _tol(args)
    state = make_state(args, tol)
    result = {"size": c_delta(state, args.delta, oracle=args.oracle, tol=tol).to_dict()}
    if state.name in {s.value for s in GAUSSIAN_CATS}:
        result["adjudication"] = gaussian_cat_size(state.name, args.alpha, args.xi, args.modes,
                                                   tol=tol).to_dict()
    emit(dumps(envelope("size", args, result, state.describe()["truncation"])), args)
    return 0


def _nrf_result(state, args, tol) -> dict:
    r = nrf_measure(state, args.algebra, independent=args.independent, tol=tol)
    out = {"nrf": r.to_dict()}
    if not args.no_time_check and not args.independent:
        tr = nrf_time_ratio(state, args.algebra, args.delta, tol)
        out["time_ratio"] = tr.to_dict()
        out["time_ratio_deviation"] = abs(tr.ratio - r.nrf)
    return out


def cmd_nrf(args) -> int:
    tol = _tol(args)
    state = make_state(args, tol)
    emit(dumps(envelope("nrf", args, _nrf_result(state, args, tol),
                        state.describe()["truncation"])), args)
    return 0


def cmd_times(args) -> int:
    tol = _tol(args)
    if Path(args.state).suffix == ".csv":
        rho = load_complex(args.state)
    else:
        rho = make_vector(args.state, args.truncation, tol)
    H = make_operator(args.hamiltonian, rho.shape[0], tol, unitary=False)
    rep = speed_limit_report(rho, H, args.delta, tol)
    result = {"speed_limit": rep.to_dict()}
    f = qfi(rho, H, tol)
    if f > tol.num:
        ts = np.linspace(0.0, math.pi / math.sqrt(f), 33)
        result["frowis_min_gap"] = min(frowis_gap(rho, H, float(t), tol) for t in ts)
    if rho.ndim == 1 and f > tol.num:
        if args.delta < 0.5:
            result["rate_bound"] = rate_bound_check(rho, H, args.delta, args.modes, tol).to_dict()
        result["fubini_study"] = fubini_study_ratio(rho, H, tol=tol).to_dict()
    trunc = None
    if rho.shape[0] > 2:
        trunc = {"dim": rho.shape[0], "tail_mass": fock.tail_mass(rho if rho.ndim == 1 else np.diag(rho))}
    emit(dumps(envelope("times", args, result, trunc)), args)
    return 0


def parse_grid(items: list[str] | None) -> dict[str, list[float]]:
    """``name=start:stop:num`` (inclusive linspace) or ``name=v1,v2,...``."""
    grid: dict[str, list[float]] = {}
    for item in items or []:
        name, _, spec = item.partition("=")
        if not spec:
            raise ValidationError(f"grid entry {item!r} needs name=values")
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValidationError(f"range {spec!r} must be start:stop:num")
            vals = np.linspace(float(parts[0]), float(parts[1]), int(parts[2])).tolist()
        else:
            vals = [float(v) for v in spec.split(",") if v.strip()]
        if not vals:
            raise ValidationError(f"grid {name!r} is empty")
        grid[name.strip()] = [round(v, 12) for v in vals]
    return grid


SWEEP_PARAMS = ("modes", "alpha", "xi", "n", "delta")


def _sweep_point(args, point: dict, tol: Tolerances) -> dict:
    ns = argparse.Namespace(**{**vars(args), **point})
    ns.modes, ns.n = int(ns.modes), int(ns.n)
    row = dict(point)
    try:
        if args.measure == "c_tilde" and ns.state in {s.value for s in GAUSSIAN_CATS}:
            # closed-form overlap; the dense canonical U is not needed here
            g = gaussian_cat_size(ns.state, ns.alpha, ns.xi, ns.modes, tol=tol)
            row.update(z_abs=g.z_abs, value=g.c_tilde, published=g.c_tilde_printed,
                       oracle_relative_deviation=g.oracle_relative_deviation, error="")
            return row
        state = make_state(ns, tol)
        row["z_abs"] = state.z_abs
        if args.measure == "c_tilde":
            row["value"] = -2 * ns.modes * math.log(state.z_abs) if state.z_abs > 0 else math.inf
        elif args.measure == "c_delta":
            rep = c_delta(state, ns.delta, tol=tol)
            row["value"] = rep.c_delta
            row["n_eff"] = rep.n_eff
        else:
            r = nrf_measure(state, args.algebra, tol=tol)
            row["value"] = r.nrf
            row["excitation"] = ns.modes * abs(complex(ns.alpha)) ** 2
        row["error"] = ""
    except QMacroError as exc:
        row["value"] = None
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def fit_exponent(rows: list[dict], key: str = "excitation") -> float | None:
    pts = [(r[key], r["value"]) for r in rows
           if not r["error"] and r.get(key, 0) > 0 and r["value"] and r["value"] > 0]
    if len(pts) < 2:
        return None
    x, y = np.log(np.array(pts)).T
    return float(np.polyfit(x, y, 1)[0])


def cmd_sweep(args) -> int:
    tol = _tol(args)
    grid = parse_grid(args.grid)
    unknown = set(grid) - set(SWEEP_PARAMS)
    if unknown:
        raise ValidationError(f"cannot sweep {sorted(unknown)}; choose from {SWEEP_PARAMS}")
    if not grid:
        raise ValidationError("sweep needs at least one --grid")
    names = list(grid)
    points = [dict(zip(names, vals)) for vals in product(*(grid[n] for n in names))]
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        rows = list(pool.map(lambda p: _sweep_point(args, p, tol), points))
    exponent = fit_exponent(rows) if args.measure == "nrf" else None
    if args.json:
        result = {"rows": rows, "fitted_exponent_vs_excitation": exponent}
        emit(dumps(envelope("sweep", args, result)), args)
        return 0
    cols = names + [c for c in ("z_abs", "value", "published", "oracle_relative_deviation",
                                "n_eff", "excitation") if any(c in r for r in rows)] + ["error"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow(["" if r.get(c) is None else (f"{r[c]:.12g}" if isinstance(r.get(c), float) else r[c])
                    for c in cols])
    if exponent is not None:
        buf.write(f"# fitted exponent of value vs N|alpha|^2: {exponent:.10g}\n")
    buf.write(f"# config_hash {config_hash(effective_config(args))} version {__version__}\n")
    emit(buf.getvalue(), args)
    return 0


def cmd_plotdata(args) -> int:
    tol = _tol(args)
    if args.kind == "ellipses":
        if args.panel:
            recs = ellipse_data(PANELS[args.panel], args.alpha, args.xi)
        else:
            recs = figure_ellipses(args.alpha, args.xi)
        text = ellipse_csv(recs)
        if args.json:
            text = dumps(envelope("plotdata", args, {"ellipses": [r.__dict__ for r in recs]}))
        else:
            text += f"# config_hash {config_hash(effective_config(args))} version {__version__}\n"
        emit(text, args)
        return 0
    # curves: computed and published C~ against xi for the four squeezed cats
    xis = parse_grid(args.grid).get("xi") or np.linspace(0.0, 1.0, 11).round(12).tolist()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["state", "xi", "c_tilde", "c_tilde_published", "ratio"])
    for name in GAUSSIAN_CATS:
        for xi in xis:
            g = gaussian_cat_size(name, args.alpha, xi, args.modes, tol=tol)
            w.writerow([name.value, f"{xi:.12g}", f"{g.c_tilde:.12g}", f"{g.c_tilde_printed:.12g}",
                        f"{g.ratio_printed:.12g}"])
    buf.write(f"# config_hash {config_hash(effective_config(args))} version {__version__}\n")
    emit(buf.getvalue(), args)
    return 0


def cmd_verify(args) -> int:
    from .verification import criterion_9, run_all

    tol = _tol(args)
    only = [int(k) for k in args.only.split(",")] if args.only else None

    def run_once():
        res = run_all(args.seed, tol, only)
        return res, dumps([r.to_dict() for r in res]).encode()

    results, first = run_once()
    if only is None or 9 in only:
        # the first run is compared against a fresh second run
        runs = iter([first])
        results.append(criterion_9(args.seed, tol, runner=lambda: next(runs, None) or run_once()[1]))
    body = envelope("verify", args, [r.to_dict() for r in results])
    if args.json:
        emit(dumps(body), args)
    else:
        lines = "".join(r.line() + "\n" for r in results)
        lines += f"# seed {args.seed} config_hash {body['config_hash']} version {__version__}\n"
        emit(lines, args)
        if args.out:
            Path(args.out).with_suffix(".json").write_text(dumps(body))
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", help="JSON run configuration (flags given explicitly take precedence)")
    g.add_argument("--out", help="write output here instead of stdout")
    g.add_argument("--seed", type=int, default=7)
    g.add_argument("--truncation", type=int, default=None, help="Fock truncation per mode")
    g.add_argument("--tolerance", type=float, default=None, help="numerical tolerance override")
    fmt = g.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--csv", action="store_true", help="CSV output (grid verbs)")
    return p


def _state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", default="ghz", help=f"one of {NAMED} or 'custom'")
    p.add_argument("--modes", type=int, default=2, help="number of modes N")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--n", type=int, default=2, help="Fock level of the FockGHZ branch")
    p.add_argument("--phi", help="custom single-mode state (name or CSV)")
    p.add_argument("--unitary", help="custom single-mode unitary (name:params or CSV)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qmacro", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"qmacro {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("size", parents=[common], help="branch-distinguishability size")
    _state_args(p)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--oracle", action="store_true", help="also scan explicit reduced states")
    p.set_defaults(func=cmd_size)

    p = sub.add_parser("nrf", parents=[common], help="relative Fisher size")
    _state_args(p)
    p.add_argument("--algebra", default="qubit", choices=["qubit", "qubit_bloch", "h3", "h4", "sl2"])
    p.add_argument("--independent", action="store_true", help="per-mode independent coefficients")
    p.add_argument("--delta", type=float, default=0.1, help="precision for the time-ratio cross-check")
    p.add_argument("--no-time-check", action="store_true")
    p.set_defaults(func=cmd_nrf)

    p = sub.add_parser("times", parents=[common], help="distinguishability times of one system")
    p.add_argument("--state", default="plus", help="state name or CSV (vector or density matrix)")
    p.add_argument("--hamiltonian", default="sigmaz", help="operator name or CSV")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--modes", type=int, default=1, help="N used by the size-growth rate bound")
    p.set_defaults(func=cmd_times)

    p = sub.add_parser("sweep", parents=[common], help="grid of sizes, one CSV row per point")
    _state_args(p)
    p.add_argument("--measure", default="c_tilde", choices=["c_tilde", "c_delta", "nrf"])
    p.add_argument("--algebra", default="h3", choices=["qubit", "qubit_bloch", "h3", "h4", "sl2"])
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--grid", action="append", help="name=start:stop:num or name=v1,v2 (repeatable)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plotdata", parents=[common], help="phase-space ellipses or size curves")
    p.add_argument("--kind", default="ellipses", choices=["ellipses", "curves"])
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--xi", type=float, default=0.3)
    p.add_argument("--modes", type=int, default=2)
    p.add_argument("--panel", choices=sorted(PANELS))
    p.add_argument("--grid", action="append", help="xi=start:stop:num for curves")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_verify)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Load --config and install its entries as defaults of the chosen verb."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValidationError("config must be a JSON object")
    verb = cfg.pop("verb", None)
    verbs = parser._subparsers._group_actions[0].choices  # noqa: SLF001
    if not any(a in verbs for a in argv):
        if verb is None:
            raise ValidationError("config names no verb and none was given")
        argv = [verb] + argv
    verb = next(a for a in argv if a in verbs)
    sp = verbs[verb]
    dests = {a.dest for a in sp._actions}  # noqa: SLF001
    bad = set(cfg) - dests
    if bad:
        raise ValidationError(f"unknown config keys for {verb}: {sorted(bad)}")
    if "grid" in cfg and isinstance(cfg["grid"], dict):
        cfg["grid"] = [f"{k}={','.join(str(v) for v in vals)}" if isinstance(vals, list) else f"{k}={vals}"
                       for k, vals in cfg["grid"].items()]
    sp.set_defaults(**cfg)
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except QMacroError as exc:
        print(f"qmacro: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"qmacro: error: {exc}", file=sys.stderr)
        return ValidationError.exit_code


if __name__ == "__main__":
    sys.exit(main())
