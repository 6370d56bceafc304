"""``toeplitz-spectra`` command line.

Every command writes one deterministic JSON document (floats at 17
significant digits, sorted keys, ``"schema": "toeplitz-spectra/1"``) or a
CSV table. Exit codes: 0 ok, 1 other failure, 2 configuration/input error,
3 root on the unit circle or unbalanced split, 4 multiple inside root,
5 singular Hankel correction.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from urllib.parse import parse_qsl

import numpy as np

from . import __version__
from .band_inverse import decay_certificate, diagonal_maxima, hankel_norm_scan, invert_band
from .errors import ConfigError, SymbolError, ToeplitzSpectraError
from .regular_symbol import approx_at_degree, approx_by_square_modulus, neumann_decay_report
from .secular_eigen import localize, locate_eigenvalues, weyl_statistic
from .symbols import Symbol, TrigPoly, builtin, symbol_from_json
from .toeplitz_core import (build, dense_inverse, hermitian_eigenvalues, levinson_predictor,
                            matrix_to_csv, verify_predictor_moments)

SCHEMA = "toeplitz-spectra/1"
COMMANDS = ("fourier", "invert-band", "decay-report", "eig-locate", "weyl", "predictor",
            "regular-decay")
DEFAULT_TOL = {"invert-band": 1e-8, "eig-locate": 1e-8, "predictor": 1e-9, "regular-decay": None}


@dataclass
class RunConfig:
    command: str
    symbol: str
    n: list = field(default_factory=lambda: [16])
    out: str | None = None
    format: str = "json"
    tol: float | None = None
    seed: int = 0
    m: int | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.n or any(int(v) < 1 for v in self.n):
            raise ConfigError("every N must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if self.m is not None and self.m < 0:
            raise ConfigError("degree m must be >= 0")
        return self


# ----------------------------------------------------------------------------
# parsing


def parse_n(text) -> list:
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        vals = text
    else:
        vals = [v for v in str(text).replace(" ", "").split(",") if v]
    try:
        return [int(v) for v in vals]
    except (TypeError, ValueError):
        raise ConfigError(f"bad N value {text!r}") from None


def load_symbol(source: str) -> Symbol:
    """``builtin:name?k=v&...``, an inline JSON object, or a JSON file path."""
    try:
        if source.startswith("builtin:"):
            name, _, query = source[len("builtin:"):].partition("?")
            params = {k: float(v) for k, v in parse_qsl(query, strict_parsing=bool(query))}
            return builtin(name, **params)
        if source.lstrip().startswith("{"):
            return symbol_from_json(source)
        path = Path(source)
        if not path.is_file():
            raise ConfigError(f"symbol file {source!r} not found")
        return symbol_from_json(path.read_text())
    except SymbolError as exc:
        raise ConfigError(f"bad symbol: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"bad symbol argument {source!r}: {exc}") from None


def load_config(path: str) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(obj) - known)
    if unknown:
        raise ConfigError(f"unknown config fields {unknown}")
    return obj


# ----------------------------------------------------------------------------
# deterministic output


def _fmt(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent=0) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    pad, nxt = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{nxt}{json.dumps(str(k))}: {dumps(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(nxt + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([float(obj.real), float(obj.imag)])
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    return json.dumps(str(obj))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(float(v)).strip('"') if isinstance(v, (float, np.floating)) else v
                    for v in row])
    return buf.getvalue()


def _single_n(cfg, what):
    if len(cfg.n) != 1:
        raise ConfigError(f"{what} output needs a single N")
    return cfg.n[0]


# ----------------------------------------------------------------------------
# commands; each returns (json payload, csv text or None)


def cmd_fourier(cfg, f):
    N = _single_n(cfg, "fourier")
    c = f.fourier_coefficients(N)
    ks = range(-N, N + 1)
    rows = [(k, float(v.real), float(v.imag)) for k, v in zip(ks, c)]
    payload = {"N": N, "coefficients": [{"k": k, "re": re, "im": im} for k, re, im in rows]}
    return payload, _csv(["k", "re", "im"], rows)


def _band_symbol(f):
    if not isinstance(f, TrigPoly):
        raise ConfigError("this command needs a band (trig-poly) symbol")
    return f


def cmd_invert_band(cfg, f):
    f = _band_symbol(f)
    tol = cfg.tol or DEFAULT_TOL["invert-band"]
    runs, last = [], None
    for N in cfg.n:
        inv = invert_band(f, N)
        A = inv.dense()
        T = build(f, N).dense()
        diff = float(np.abs(A - dense_inverse(T)).max())
        resid = float(np.abs(T @ A - np.eye(N + 1)).max())
        runs.append({"N": N, "max_abs_diff": diff, "identity_residual": resid,
                     "rho_theory": inv.rho_theory, "sigma_min": inv.sigma_min,
                     "pass": diff <= tol and resid <= tol})
        last = A
    payload = runs[0] if len(runs) == 1 else {"runs": runs}
    payload = dict(payload, tol=tol)
    return payload, matrix_to_csv(last) if len(cfg.n) == 1 else None


def cmd_decay_report(cfg, f):
    f = _band_symbol(f)
    reports, rows = [], []
    for N in cfg.n:
        inv = invert_band(f, N)
        rep = decay_certificate(inv, inv.fac.roots, N)
        reports.append(rep.to_json())
        rows = [(d, float(m)) for d, m in enumerate(diagonal_maxima(inv.dense()))]
    payload = reports[0] if len(reports) == 1 else {"reports": reports}
    if len(cfg.n) > 1:
        scan, slope = hankel_norm_scan(f, cfg.n)
        payload["hankel_norms"] = [{"N": N, "norm": v} for N, v in scan]
        payload["hankel_slope"] = slope
    return payload, _csv(["d", "max_abs"], rows) if len(cfg.n) == 1 else None


def _eigs(f, N, use_secular):
    dense = hermitian_eigenvalues(build(f, N))
    if not use_secular:
        return dense, dense, []
    res = locate_eigenvalues(f, N, return_details=True)
    return res.eigenvalues, dense, res.diagnostics


def cmd_eig_locate(cfg, f):
    tol = cfg.tol or DEFAULT_TOL["eig-locate"]
    secular = isinstance(f, TrigPoly) and f.is_even and f.degree > 0
    runs, rows = [], []
    for N in cfg.n:
        eigs, dense, diag = _eigs(f, N, secular)
        run = {"N": N, "method": "secular" if secular else "dense", "diagnostics": diag,
               "count": len(eigs)}
        if len(eigs) == N + 1:
            rep = localize(eigs, f, N)
            run.update(rep.to_json())
            run["max_abs_diff_dense"] = float(np.abs(eigs - dense).max())
            run["pass"] = bool(rep.passed and run["max_abs_diff_dense"] <= tol)
            rows = [(int(k), float(e), float(t), float(d))
                    for k, e, t, d in zip(rep.k, rep.eigenvalues, rep.theta, dense)]
        else:
            run.update({"eigenvalues": eigs.tolist(), "pass": False})
        runs.append(run)
    payload = runs[0] if len(runs) == 1 else {"runs": runs}
    payload = dict(payload, tol=tol)
    return payload, _csv(["k", "eigenvalue", "theta", "dense"], rows) if len(cfg.n) == 1 else None


def cmd_weyl(cfg, f):
    stats = []
    for N in cfg.n:
        eigs = hermitian_eigenvalues(build(f, N))
        stats.append({"N": N, **weyl_statistic(eigs, f, N),
                      "min_gap": float(eigs[0] - f.sample_min_max()[0])})
    names = ("x", "x2", "cos", "abs")
    decreasing = {h: all(b[h] <= 1.1 * a[h] + 1e-12 for a, b in zip(stats, stats[1:]))
                  for h in names}
    payload = {"statistics": stats, "decreasing": decreasing}
    rows = [(s["N"],) + tuple(s[h] for h in names) for s in stats]
    return payload, _csv(["N", *names], rows)


def cmd_predictor(cfg, f):
    tol = cfg.tol or DEFAULT_TOL["predictor"]
    degrees = [cfg.m] if cfg.m is not None else cfg.n
    runs, rows = [], []
    for M in degrees:
        P = levinson_predictor(f, M)
        err = verify_predictor_moments(f, P)
        roots = P.roots()
        runs.append({"M": M, "beta": [[float(b.real), float(b.imag)] for b in P.beta],
                     "moment_error": err,
                     "min_root_modulus": float(np.abs(roots).min()) if len(roots) else "inf",
                     "pass": err <= tol})
        rows = [(u, float(b.real), float(b.imag)) for u, b in enumerate(P.beta)]
    payload = runs[0] if len(runs) == 1 else {"runs": runs}
    payload = dict(payload, tol=tol)
    return payload, _csv(["u", "re", "im"], rows) if len(degrees) == 1 else None


def cmd_regular_decay(cfg, f):
    runs = []
    for N in cfg.n:
        if cfg.tol is not None:
            ap = approx_by_square_modulus(f, cfg.tol)
        else:
            ap = approx_at_degree(f, 8 if cfg.m is None else cfg.m)
        rep = neumann_decay_report(f, N, approx=ap)
        runs.append({"N": N, **rep.to_json()})
    payload = runs[0] if len(runs) == 1 else {"runs": runs}
    return payload, None


HANDLERS = {
    "fourier": cmd_fourier,
    "invert-band": cmd_invert_band,
    "decay-report": cmd_decay_report,
    "eig-locate": cmd_eig_locate,
    "weyl": cmd_weyl,
    "predictor": cmd_predictor,
    "regular-decay": cmd_regular_decay,
}


# ----------------------------------------------------------------------------
# entry point


def build_parser():
    p = argparse.ArgumentParser(prog="toeplitz-spectra",
                                description="Toeplitz inverses, decay and eigenvalue location.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--symbol", help="path to symbol JSON, inline JSON, or builtin:name?k=v")
        s.add_argument("--n", help="order N or comma-separated list")
        s.add_argument("--m", type=int, help="predictor / approximant degree")
        s.add_argument("--out", help="output file (default stdout)")
        s.add_argument("--format", choices=("json", "csv"))
        s.add_argument("--tol", type=float)
        s.add_argument("--seed", type=int)
        s.add_argument("--config", help="JSON file with RunConfig fields")
    return p


def make_config(args) -> RunConfig:
    base = load_config(args.config) if args.config else {}
    if "command" in base and base["command"] != args.command:
        raise ConfigError(f"config command {base['command']!r} differs from {args.command!r}")
    merged = dict(base, command=args.command)
    for key in ("symbol", "out", "format", "tol", "seed", "m"):
        val = getattr(args, key)
        if val is not None:
            merged[key] = val
    if args.n is not None:
        merged["n"] = args.n
    if "n" in merged:
        merged["n"] = parse_n(merged["n"])
    if not merged.get("symbol"):
        raise ConfigError("a symbol is required (--symbol or config)")
    try:
        cfg = RunConfig(**merged)
        if cfg.tol is not None:
            cfg.tol = float(cfg.tol)
        cfg.seed = int(cfg.seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config: {exc}") from None
    return cfg.validate()


def run(cfg: RunConfig) -> str:
    np.random.seed(cfg.seed)
    f = load_symbol(cfg.symbol)
    payload, table = HANDLERS[cfg.command](cfg, f)
    if cfg.format == "csv":
        if table is None:
            raise ConfigError(f"{cfg.command} has no CSV form for this request")
        return table
    doc = {"schema": SCHEMA, "command": cfg.command, "symbol": f.to_json(), "seed": cfg.seed,
           "result": payload}
    return dumps(doc) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        text = run(cfg)
    except ToeplitzSpectraError as exc:
        print(f"toeplitz-spectra: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - report, do not crash with a traceback
        print(f"toeplitz-spectra: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
