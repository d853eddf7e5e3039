"""Command-line front end.

Exit codes: 0 success / identities verified, 1 verification failed,
2 usage error, 3 numerical failure.

Parameters may also come from a ``key=value`` file given with
``--config``; keys are the flag names without the leading dashes
(``half-width=8``), ``#`` starts a comment, and flags on the command line
override file values.

CSV layouts (floats are written with ``%.17g``):

    spectrum  index,re,im,residual,pairing_defect
    reality   index,re,im,max_im,pairing_defect
    sectors   j,k,lambda_j,lambda_k,A,B,C,D,lhs,rhs1,rhs2,residual
              (prefixed by a nu column when --nu-list is given)
    perturb   level,E0_re,E0_im,rs1_re,rs1_im,fd1_re,fd1_im,rs2_re,rs2_im,
              fd2_re,fd2_im,rs1_discrepancy,rs2_discrepancy,truncation
    sweep     gamma,index,re,im
    susy      key,value
    probe-invertibility  points,min_abs_eigenvalue
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import analysis
from .cptmodel import build_family, build_family_unchecked, verify_all
from .eigen import eig_general
from .errors import CPTLabError, NumericalError, NonRealCoefficient, ParityViolation
from .exactalg import Poly, parse_poly, parse_rational
from .lattice import MODES, discretize_H, make_grid

COMMANDS = (
    "verify",
    "spectrum",
    "reality",
    "sectors",
    "perturb",
    "sweep",
    "susy",
    "probe-invertibility",
)

# flag -> (converter name, default, help)
OPTIONS: dict[str, tuple[str, Any, str]] = {
    "n": ("int", 1, "monomial index n (sigma = mu x^2n, alpha = nu x^(2n-1))"),
    "mu": ("rational", "1", "monomial coefficient mu"),
    "nu": ("rational", "1", "monomial coefficient nu"),
    "omega": ("rational", "0", "integration constant omega"),
    "sigma": ("poly", None, "sigma coefficients, e.g. 0,0,1 for x^2 (overrides --n/--mu)"),
    "alpha": ("poly", None, "alpha coefficients, e.g. 0,1 for x"),
    "override-sigma-pot": ("poly", None, "replace the derived Sigma (negative controls)"),
    "override-d": ("poly", None, "replace the derived D (negative controls)"),
    "half-width": ("float", 6.0, "grid half width L"),
    "points": ("int", 401, "number of grid points N (odd)"),
    "mode": ("str", "direct", "discretization of H: direct or product"),
    "m": ("int", 4, "number of eigenvalues / states reported"),
    "gamma": ("floatlist", None, "comma-separated gamma values (sweep)"),
    "nu-list": ("floatlist", None, "comma-separated nu values (sectors)"),
    "levels": ("int", 3, "number of levels (perturb)"),
    "fd-step": ("float", 1e-3, "finite-difference step in gamma (perturb)"),
    "truncation": ("int", None, "levels kept in the second-order sum (perturb)"),
    "im-threshold": ("float", 1e-6, "flag threshold on max |Im E| (sweep)"),
    "select": ("str", "largest", "sector basis: largest or smallest |Lambda|"),
    "refinements": ("int", 3, "grid doublings (probe-invertibility)"),
    "format": ("str", None, "csv or json"),
    "output": ("str", None, "write the report here instead of stdout"),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.values[name.replace("_", "-")]
        except KeyError:
            raise AttributeError(name) from None


# argument handling ----------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cptlab",
        description="CPT-symmetric Hamiltonians from C = d/dx + w(x): symbolic checks and spectra.",
        epilog="Polynomials: comma-separated coefficients, lowest power first; "
        "append '+i:' and imaginary coefficients for complex ones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--config", default=None, help="key=value parameter file")
        for name, (_, default, help_) in OPTIONS.items():
            p.add_argument(f"--{name}", dest=name, default=None,
                           help=f"{help_} (default: {default})")
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"--config {path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in OPTIONS:
                raise UsageError(f"--config {path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _convert(name: str, text: Optional[str], exact: bool):
    kind = OPTIONS[name][0]
    if text is None:
        return None
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "str":
            return text
        if kind == "rational":
            value = parse_rational(text, exact=exact)
            return value if exact else float(value)
        if kind == "poly":
            return parse_poly(text, exact=exact)
        if kind == "floatlist":
            vals = [float(t) for t in text.split(",") if t.strip()]
            if not vals:
                raise ValueError("empty list")
            return vals
    except ValueError as exc:
        raise UsageError(f"argument --{name}: {exc}") from None
    raise AssertionError(kind)


def parse_args(argv) -> RunConfig:
    """Parse and validate; raises UsageError naming the offending flag."""
    parser = _build_parser()
    buf = io.StringIO()
    try:
        stderr, sys.stderr = sys.stderr, buf
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        msg = buf.getvalue().strip().splitlines()
        if exc.code == 0:
            raise
        raise UsageError(msg[-1] if msg else "invalid arguments") from None
    finally:
        sys.stderr = stderr
    raw = {}
    if ns.config:
        try:
            raw.update(_read_config(ns.config))
        except OSError as exc:
            raise UsageError(f"--config: {exc}") from None
    for name in OPTIONS:
        value = getattr(ns, name)
        if value is not None:
            raw[name] = value
    exact = ns.command == "verify"
    values = {}
    for name, (_, default, _) in OPTIONS.items():
        text = raw.get(name, None if default is None else str(default))
        values[name] = _convert(name, text, exact)
    if values["format"] is None:
        values["format"] = "json" if ns.command in ("verify", "susy") else "csv"
    _validate(ns.command, values)
    return RunConfig(ns.command, values)


def _validate(command: str, v: dict) -> None:
    if v["format"] not in ("csv", "json"):
        raise UsageError("argument --format: must be csv or json")
    if v["mode"] not in MODES:
        raise UsageError(f"argument --mode: must be one of {', '.join(MODES)}")
    if v["select"] not in ("largest", "smallest"):
        raise UsageError("argument --select: must be largest or smallest")
    n = v["points"]
    if n < 3 or n % 2 == 0:
        raise UsageError(f"argument --points: must be odd and >= 3, got {n}")
    if not v["half-width"] > 0:
        raise UsageError("argument --half-width: must be positive")
    if v["n"] < 1:
        raise UsageError("argument --n: must be >= 1")
    if v["m"] < 1:
        raise UsageError("argument --m: must be >= 1")
    if not v["fd-step"] > 0:
        raise UsageError("argument --fd-step: must be positive")
    if (v["sigma"] is None) != (v["alpha"] is None):
        raise UsageError("argument --sigma/--alpha: give both or neither")
    if command == "sweep":
        if v["gamma"] is None:
            raise UsageError("argument --gamma: required for sweep")
        g = v["gamma"]
        if any(b <= a for a, b in zip(g, g[1:])):
            raise UsageError("argument --gamma: values must be strictly increasing")
    if command in ("reality", "sectors", "perturb", "sweep") and v["mu"] == 0:
        raise UsageError("argument --mu: must be nonzero")


# output ---------------------------------------------------------------------

def fmt(x) -> str:
    return "%.17g" % x


def _plain(obj):
    """Convert numpy values and complex numbers into JSON-ready Python objects."""
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, complex):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def _json(obj) -> str:
    return json.dumps(_plain(obj), indent=2)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


# commands -------------------------------------------------------------------

def _spec(cfg: RunConfig, checked: bool = True):
    v = cfg.values
    overrides = {}
    if v["override-sigma-pot"] is not None:
        overrides["SigmaPot"] = v["override-sigma-pot"]
    if v["override-d"] is not None:
        overrides["D"] = v["override-d"]
    if v["sigma"] is not None:
        sigma, alpha = v["sigma"], v["alpha"]
    else:
        sigma = Poly.monomial(v["mu"], 2 * v["n"])
        alpha = Poly.monomial(v["nu"], 2 * v["n"] - 1)
    if overrides or not checked:
        return build_family_unchecked(sigma, alpha, v["omega"], **overrides)
    return build_family(sigma, alpha, v["omega"])


def _grid(cfg: RunConfig):
    return make_grid(cfg.values["half-width"], cfg.values["points"])


def cmd_verify(cfg: RunConfig, err) -> tuple[str, int]:
    try:
        spec = _spec(cfg)
    except (ParityViolation, NonRealCoefficient) as exc:
        print(f"warning: {exc}; verifying the unchecked operator", file=err)
        spec = _spec(cfg, checked=False)
    results = verify_all(spec)
    ok = all(r.holds for r in results.values())
    report: dict[str, Any] = {name: r.holds for name, r in results.items()}
    if not ok:
        report["residuals"] = {name: str(r.residual) for name, r in results.items() if not r.holds}
        for name, r in results.items():
            if not r.holds:
                print(f"{name} residual: {r.residual}", file=err)
    if cfg.format == "csv":
        body = _csv(["identity", "holds", "residual"],
                    [(n, str(r.holds).lower(), str(r.residual)) for n, r in results.items()])
    else:
        body = _json(report) + "\n"
    return body, 0 if ok else 1


def cmd_spectrum(cfg: RunConfig, err) -> tuple[str, int]:
    spec = _spec(cfg)
    h = discretize_H(spec, _grid(cfg), cfg.mode)
    m = min(cfg.m, h.shape[0])
    s = eig_general(h, want_vectors=True, vector_count=m)
    w = s.eigenvalues
    res = np.linalg.norm(h @ s.right_vectors - s.right_vectors * w[:m], axis=0)
    pair = np.abs(w[:m].conj()[:, None] - w[None, :]).min(axis=1)
    if cfg.format == "json":
        body = _json({
            "eigenvalues": [complex(z) for z in w[:m]],
            "residuals": res,
            "residual_max": s.residual_max,
            "pairing_defect": pair,
            "full_pairing_defect": analysis.conjugation_pairing_defect(w),
        }) + "\n"
    else:
        body = _csv(["index", "re", "im", "residual", "pairing_defect"],
                    [(i, float(w[i].real), float(w[i].imag), float(res[i]), float(pair[i]))
                     for i in range(m)])
    return body, 0


def cmd_reality(cfg: RunConfig, err) -> tuple[str, int]:
    r = analysis.reality_report(cfg.mu, cfg.nu, cfg.omega, _grid(cfg), cfg.mode, cfg.m)
    if cfg.format == "json":
        body = _json({
            "mu": r.mu, "nu": r.nu, "omega": r.omega,
            "half_width": r.half_width, "n_points": r.n_points, "mode": r.mode,
            "eigenvalues": [complex(z) for z in r.eigenvalues],
            "max_im": r.max_im, "pairing_defect": r.pairing_defect,
        }) + "\n"
    else:
        body = _csv(["index", "re", "im", "max_im", "pairing_defect"],
                    [(i, float(z.real), float(z.imag), r.max_im, r.pairing_defect)
                     for i, z in enumerate(r.eigenvalues)])
    return body, 0


_SECTOR_COLUMNS = ["j", "k", "lambda_j", "lambda_k", "A", "B", "C", "D",
                   "lhs", "rhs1", "rhs2", "residual"]


def cmd_sectors(cfg: RunConfig, err) -> tuple[str, int]:
    nus = cfg.values["nu-list"]
    multi = nus is not None
    nus = nus if multi else [float(cfg.nu)]
    grid = _grid(cfg)
    reports = [analysis.sector_analysis(cfg.mu, nu, grid, cfg.m, cfg.omega, cfg.select) for nu in nus]
    if cfg.format == "json":
        body = _json([{
            "nu": r.nu,
            "Lambda": r.Lambda,
            "identity_residual": r.identity_residual,
            "cross_norm": r.cross_norm,
            "same_norm": r.same_norm,
            "guarded_pairs": r.guarded_pairs,
            "ratio_max_error": r.ratio_max_error,
            "ratio_checks": [[c.j, c.k, c.lambda_j, c.lambda_k, c.A, c.B, c.C, c.D,
                              c.lhs, c.rhs1, c.rhs2, c.residual] for c in r.ratio_checks],
        } for r in reports]) + "\n"
        return body, 0
    rows = []
    for r in reports:
        print(f"nu={fmt(r.nu)} identity_residual={fmt(r.identity_residual)} "
              f"cross_norm={fmt(r.cross_norm)} same_norm={fmt(r.same_norm)} "
              f"guarded_pairs={r.guarded_pairs}", file=err)
        for c in r.ratio_checks:
            row = (c.j, c.k, c.lambda_j, c.lambda_k, c.A, c.B, c.C, c.D,
                   c.lhs, c.rhs1, c.rhs2, c.residual)
            rows.append(((r.nu,) + row) if multi else row)
    header = (["nu"] + _SECTOR_COLUMNS) if multi else _SECTOR_COLUMNS
    return _csv(header, rows), 0


def cmd_perturb(cfg: RunConfig, err) -> tuple[str, int]:
    reps = analysis.perturbation_report(
        cfg.mu, cfg.nu, _grid(cfg), cfg.levels, cfg.values["fd-step"], cfg.truncation
    )
    if cfg.format == "json":
        body = _json([{
            "level": r.level, "E0": r.E0, "rs1": r.rs1, "rs2": r.rs2,
            "fd1": r.fd1, "fd2": r.fd2,
            "rs1_discrepancy": r.rs1_discrepancy, "rs2_discrepancy": r.rs2_discrepancy,
            "truncation": r.truncation, "biorthogonal_norm": r.biorthogonal_norm,
        } for r in reps]) + "\n"
        return body, 0
    header = ["level", "E0_re", "E0_im", "rs1_re", "rs1_im", "fd1_re", "fd1_im",
              "rs2_re", "rs2_im", "fd2_re", "fd2_im", "rs1_discrepancy",
              "rs2_discrepancy", "truncation"]
    rows = [(r.level, r.E0.real, r.E0.imag, r.rs1.real, r.rs1.imag, r.fd1.real, r.fd1.imag,
             r.rs2.real, r.rs2.imag, r.fd2.real, r.fd2.imag, r.rs1_discrepancy,
             r.rs2_discrepancy, r.truncation) for r in reps]
    return _csv(header, rows), 0


def cmd_sweep(cfg: RunConfig, err) -> tuple[str, int]:
    r = analysis.gamma_sweep(cfg.mu, cfg.nu, _grid(cfg), cfg.gamma, cfg.m,
                             cfg.values["im-threshold"])
    if cfg.format == "json":
        body = _json({
            "gamma": r.gamma,
            "eigenvalues": [[complex(z) for z in row] for row in r.eigenvalues],
            "max_im": r.max_im, "flagged": r.flagged, "im_threshold": r.im_threshold,
        }) + "\n"
        return body, 0
    rows = [(g, i, float(z.real), float(z.imag))
            for g, row in zip(r.gamma, r.eigenvalues) for i, z in enumerate(row)]
    return _csv(["gamma", "index", "re", "im"], rows), 0


def cmd_susy(cfg: RunConfig, err) -> tuple[str, int]:
    r = analysis.susy_check(_spec(cfg), _grid(cfg))
    if r.inverse_singular:
        print("SingularMatrix: F_h is not invertible on this grid", file=err)
    report = {
        "isospectrality_defect": r.isospectrality_defect,
        "inverse_charge_residual": r.inverse_charge_residual,
        "inverse_singular": r.inverse_singular,
        "condition_indicator": r.condition_indicator,
        "min_abs_eigenvalue_F": r.min_abs_eigenvalue_F,
        "structural": r.structural,
    }
    if cfg.format == "json":
        return _json(report) + "\n", 0
    flat = [(k, v) for k, v in report.items() if k != "structural"]
    flat += [(f"structural.{k}", v) for k, v in r.structural.items()]
    rows = [(k, "" if v is None else (str(v).lower() if isinstance(v, bool) else fmt(v)))
            for k, v in flat]
    return _csv(["key", "value"], rows), 0


def cmd_probe(cfg: RunConfig, err) -> tuple[str, int]:
    n0 = cfg.points
    pts = [(n0 - 1) * 2**i + 1 for i in range(cfg.refinements)]
    values = analysis.invertibility_probe(cfg.mu, cfg.nu, cfg.values["half-width"], pts)
    if cfg.format == "json":
        return _json({"points": [p for p, _ in values],
                      "min_abs_eigenvalue": [v for _, v in values]}) + "\n", 0
    return _csv(["points", "min_abs_eigenvalue"], [(p, float(v)) for p, v in values]), 0


HANDLERS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "reality": cmd_reality,
    "sectors": cmd_sectors,
    "perturb": cmd_perturb,
    "sweep": cmd_sweep,
    "susy": cmd_susy,
    "probe-invertibility": cmd_probe,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        body, code = HANDLERS[cfg.command](cfg, err)
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=err)
        return 3
    except CPTLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
    else:
        out.write(body)
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"cptlab: usage error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
