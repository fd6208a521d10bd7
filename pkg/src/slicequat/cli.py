"""Command-line front end.

    slicequat eval poly.json --at 1,0,2,0
    slicequat divisor poly.json
    slicequat jensen --rho 1 --measure octahedral6 --nodes 128 f.json
    slicequat blaschke --a 0.3,0.1,0,0 --rho 1
    slicequat suite --seed 42

Exit status: 0 when every check passes, 2 when a check fails, 1 on bad
input. Options may also come from a ``key=value`` file given with
``--config``; command-line flags take precedence.
"""
import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import calculus, quadrature
from .blaschke import boundary_table, evaluate_product, factorize, jensen
from .errors import SliceQuatError
from .quaternion import ImaginaryUnit, Quaternion
from .slicefunc import SemiRegular, SlicePolynomial, StemPolynomial, trace
from .suite import run_suite
from .zeros import divisor_of_poly, divisor_semiregular

COMMANDS = ("eval", "mvf", "poisson", "jensen", "divisor", "factor", "blaschke", "laplacian", "rotavg", "suite")
MEASURES = ("antipodal_pair", "octahedral6", "random_symmetrized")
FORMATS = ("json", "csv")
NEEDS_INPUT = {"eval", "mvf", "poisson", "jensen", "divisor", "factor", "laplacian", "rotavg"}

DEFAULT_NODES = {"mvf": 64, "poisson": 128, "jensen": 128}
DEFAULT_TOLS = {"mvf": 1e-9, "poisson": 1e-8, "jensen": 1e-8, "factor": 1e-8, "blaschke": 1e-9}


class InputError(Exception):
    """Malformed input; reported with exit status 1."""


@dataclass
class RunConfig:
    command: str
    input_path: str = None
    seed: int = 42
    nodes: int = None
    measure: str = "octahedral6"
    step_h: float = 1e-4
    output_format: str = None
    tolerance_overrides: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    output_path: str = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"command: unknown command {self.command!r}")
        if self.nodes is None:
            self.nodes = DEFAULT_NODES.get(self.command, 64)
        if self.output_format is None:
            self.output_format = "csv" if self.command == "blaschke" else "json"
        if self.nodes < 8:
            raise InputError(f"nodes: must be at least 8, got {self.nodes}")
        if not 0.0 < self.step_h <= 0.1:
            raise InputError(f"step_h: must lie in (0, 0.1], got {self.step_h}")
        if self.measure not in MEASURES:
            raise InputError(f"measure: unknown kind {self.measure!r}")
        if self.output_format not in FORMATS:
            raise InputError(f"output_format: expected json or csv, got {self.output_format!r}")
        if self.command in NEEDS_INPUT and not self.input_path:
            raise InputError(f"input_path: the {self.command} command needs an input file")

    def tol(self, key):
        return float(self.tolerance_overrides.get(key, DEFAULT_TOLS[key]))

    def mu(self):
        return quadrature.SphereMeasure.from_kind(self.measure, 16, self.seed)


# ---------------------------------------------------------------------------
# parsing


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{where}: expected a number, got {json.dumps(v)}")
    if not math.isfinite(v):
        raise InputError(f"{where}: not finite")
    return float(v)


def _quat_entry(v, where):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return [_number(v, where), 0.0, 0.0, 0.0]
    if not isinstance(v, list) or len(v) != 4:
        raise InputError(f"{where}: expected a number or [w,x,y,z]")
    return [_number(x, f"{where}[{i}]") for i, x in enumerate(v)]


def _poly(data, where):
    if not isinstance(data, list):
        raise InputError(f"{where}: expected a list of coefficients")
    return SlicePolynomial([_quat_entry(c, f"{where}[{k}]") for k, c in enumerate(data)])


def _stem(data, where):
    if not isinstance(data, list) or not data:
        raise InputError(f"{where}: expected a nested list c[j][k] = [w,x,y,z]")
    rows = []
    for j, row in enumerate(data):
        if not isinstance(row, list) or len(row) != len(data[0]):
            raise InputError(f"{where}[{j}]: rows must be lists of equal length")
        rows.append([_quat_entry(c, f"{where}[{j}][{k}]") for k, c in enumerate(row)])
    return StemPolynomial(rows)


def parse_function(data):
    """Polynomial list, ``{"denom", "numer"}`` or ``{"stem"}`` object."""
    if isinstance(data, list):
        return _poly(data, "coefficients")
    if isinstance(data, dict):
        keys = set(data)
        if keys == {"denom", "numer"}:
            g = _poly(data["denom"], "denom")
            if g.is_zero():
                raise InputError("denom: the zero polynomial is not allowed")
            return SemiRegular(g, _poly(data["numer"], "numer"))
        if keys == {"stem"}:
            return _stem(data["stem"], "stem")
        raise InputError(f"top level: unexpected keys {sorted(keys)}; expected denom/numer or stem")
    raise InputError("top level: expected a list or an object")


def load_function(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return parse_function(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def parse_floats(text, n, name):
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != n:
        raise InputError(f"{name}: expected {n} comma-separated numbers, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise InputError(f"{name}: not a number list: {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise InputError(f"{name}: not finite")
    return vals


def parse_quaternion(text, name):
    return Quaternion(*parse_floats(text, 4, name))


def parse_unit(text, name):
    v = parse_floats(text, 3, name)
    if not any(v):
        raise InputError(f"{name}: the zero vector is not an imaginary unit")
    return ImaginaryUnit(*v)


def read_config_file(path):
    """``key=value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        if not k:
            raise InputError(f"{path}:{n}: empty key")
        out[k] = v
    return out


# ---------------------------------------------------------------------------
# commands


def _need(cfg, key):
    if cfg.params.get(key) is None:
        raise InputError(f"{key}: required for the {cfg.command} command")
    return cfg.params[key]


def _float_param(cfg, key):
    v = _need(cfg, key)
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise InputError(f"{key}: not a number: {v!r}") from None
    if not math.isfinite(v):
        raise InputError(f"{key}: not finite")
    return v


def _poly_only(f, cmd):
    if not isinstance(f, SlicePolynomial):
        raise InputError(f"input: the {cmd} command needs a polynomial")
    return f


def cmd_eval(cfg, f):
    q = parse_quaternion(_need(cfg, "at"), "at")
    return {"at": q.to_json(), "value": f(q).to_json()}, True


def cmd_mvf(cfg, f):
    if isinstance(f, StemPolynomial):
        f = f.evaluator()
    I = parse_unit(cfg.params.get("I") or "1,0,0", "I")
    rep = quadrature.mean_value_report(
        f, _float_param(cfg, "a"), _float_param(cfg, "b"), I, _float_param(cfg, "r"),
        cfg.mu(), quadrature.CircleRule(cfg.nodes), cfg.tol("mvf"),
    )
    return rep.to_json(), rep.passed


def cmd_poisson(cfg, f):
    rep = quadrature.poisson_report(
        quadrature.RealPart(f), _float_param(cfg, "a"), _float_param(cfg, "R"),
        cfg.mu(), quadrature.CircleRule(cfg.nodes), cfg.tol("poisson"),
    )
    return rep.to_json(), rep.passed


def _semiregular(f, cmd):
    if isinstance(f, StemPolynomial):
        raise InputError(f"input: the {cmd} command needs a polynomial or a semi-regular quotient")
    return SemiRegular.from_poly(f) if isinstance(f, SlicePolynomial) else f


def cmd_jensen(cfg, f):
    F = _semiregular(f, "jensen")
    rep = jensen(F, _float_param(cfg, "rho"), cfg.mu(), quadrature.CircleRule(cfg.nodes))
    tol = cfg.tol("jensen")
    ok = rep.gap >= -tol and (not rep.equality_expected or rep.gap <= tol)
    out = rep.to_json()
    out["tol"] = tol
    out["pass"] = ok
    return out, ok


def cmd_divisor(cfg, f):
    if isinstance(f, SemiRegular):
        return divisor_semiregular(f).to_json(), True
    return divisor_of_poly(_poly_only(f, "divisor")).to_json(), True


def cmd_factor(cfg, f):
    F = _semiregular(f, "factor")
    rho = _float_param(cfg, "rho")
    f0, factors = factorize(F, rho)
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(20):
        v = rng.standard_normal(4)
        q = Quaternion(*(v / np.linalg.norm(v) * rho * rng.uniform() ** 0.25))
        direct = F(q)
        err = (evaluate_product(f0, factors, q) - direct).norm() / max(direct.norm(), 1e-300)
        worst = max(worst, err)
    tol = cfg.tol("factor")
    out = {
        "f0": f0.to_json(),
        "factors": [b.to_json() for b in factors],
        "max_rel_error": worst,
        "tol": tol,
        "pass": worst <= tol,
    }
    return out, worst <= tol


def cmd_blaschke(cfg, _f):
    a = parse_quaternion(_need(cfg, "a"), "a")
    rho = _float_param(cfg, "rho")
    n = int(cfg.params.get("points") or 32)
    rows = boundary_table(a, rho, n, cfg.seed)
    tol = cfg.tol("blaschke")
    table = [
        {
            "unit_x": float(r[0]), "unit_y": float(r[1]), "unit_z": float(r[2]),
            "theta": float(r[3]), "modulus": float(r[4]), "defect": float(r[5]),
            "pass": bool(r[5] <= tol),
        }
        for r in rows
    ]
    return table, all(r["pass"] for r in table)


def cmd_laplacian(cfg, f):
    q = parse_quaternion(_need(cfg, "at"), "at")
    op = cfg.params.get("operator") or "lapstar"
    if op not in calculus.OPERATORS:
        raise InputError(f"operator: expected one of {', '.join(calculus.OPERATORS)}")
    if isinstance(f, SemiRegular):
        raise InputError("input: the laplacian command needs a polynomial or a stem")
    target = f
    if cfg.params.get("numeric"):
        sp = f if isinstance(f, StemPolynomial) else StemPolynomial.from_slice_poly(f)
        target = sp.evaluator(declared_holomorphic=False)
    rep = calculus.differential_report(op, target, q, cfg.step_h)
    return rep.to_json(), True


def cmd_rotavg(cfg, f):
    f = _poly_only(f, "rotavg")
    avg = calculus.rotation_average(f)
    half = trace(f) * 0.5
    ok = bool(np.array_equal(avg.coeffs, half.coeffs))
    return {"rotation_average": avg.to_json(), "half_trace": half.to_json(), "pass": ok}, ok


def cmd_suite(cfg, _f):
    only = cfg.params.get("only")
    only = {s.strip() for s in only.split(",")} if only else None
    try:
        rows = run_suite(cfg.seed, cfg.tolerance_overrides, only)
    except KeyError as exc:
        raise InputError(f"tolerance: {exc.args[0]}") from None
    out = [r.to_json() for r in rows]
    return out, all(r["pass"] for r in out)


HANDLERS = {
    "eval": cmd_eval,
    "mvf": cmd_mvf,
    "poisson": cmd_poisson,
    "jensen": cmd_jensen,
    "divisor": cmd_divisor,
    "factor": cmd_factor,
    "blaschke": cmd_blaschke,
    "laplacian": cmd_laplacian,
    "rotavg": cmd_rotavg,
    "suite": cmd_suite,
}


# ---------------------------------------------------------------------------
# output


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _is_flat(v):
    return isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v)


def to_json_text(v, indent=0):
    """JSON with flat lists kept on one line."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {to_json_text(x, indent + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list) and v and not _is_flat(v):
        items = [inner + to_json_text(x, indent + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(v, allow_nan=False, separators=(", ", ": "))


def render(report, fmt):
    """Serialize a report; floats use the shortest round-trip form."""
    if fmt == "json":
        return to_json_text(report) + "\n"
    rows = report if isinstance(report, list) else [report]
    if rows and not isinstance(rows[0], dict):
        rows = [{"value": r} for r in rows]
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c, "")) for c in cols])
    return buf.getvalue()


def run(cfg, stdout=None):
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    f = load_function(cfg.input_path) if cfg.command in NEEDS_INPUT else None
    try:
        report, ok = HANDLERS[cfg.command](cfg, f)
    except (SliceQuatError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{cfg.command}: {exc}") from None
    text = render(report, cfg.output_format)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit status 1, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(
        prog="slicequat",
        description="Slice regular quaternionic functions: evaluation and verification.",
        allow_abbrev=False,
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="JSON input file")
    p.add_argument("--config", help="key=value file; flags override its entries")
    p.add_argument("--seed", type=int)
    p.add_argument("--nodes", type=int, help="circle quadrature nodes")
    p.add_argument("--measure", choices=MEASURES)
    p.add_argument("--h", "--step-h", dest="step_h", type=float, help="finite-difference step")
    p.add_argument("--output-format", "--format", dest="output_format", choices=FORMATS)
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="tolerance override, repeatable")
    p.add_argument("--at", help="point w,x,y,z")
    p.add_argument("--a", help="center: real for mvf/poisson, w,x,y,z for blaschke")
    p.add_argument("--b", help="slice imaginary part (mvf)")
    p.add_argument("--I", help="imaginary unit x,y,z (mvf)")
    p.add_argument("--r", help="circle radius (mvf)")
    p.add_argument("--R", help="sphere radius (poisson)")
    p.add_argument("--rho", help="ball radius")
    p.add_argument("--points", help="boundary samples (blaschke)")
    p.add_argument("--operator", help="differential operator (laplacian)")
    p.add_argument("--numeric", action="store_true", default=None, help="force finite differences (laplacian)")
    p.add_argument("--only", help="comma-separated criterion ids (suite)")
    return p


PARAM_KEYS = ("at", "a", "b", "I", "r", "R", "rho", "points", "operator", "numeric", "only")


def _parse_tols(items, where):
    out = {}
    for item in items:
        if "=" not in item:
            raise InputError(f"{where}: expected KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise InputError(f"{where}: tolerance {k.strip()!r} is not a number") from None
    return out


def config_from_args(ns):
    file_vals = read_config_file(ns.config) if ns.config else {}

    def pick(name, conv, flag):
        if flag is not None:
            return flag
        if name in file_vals:
            try:
                return conv(file_vals[name])
            except ValueError:
                raise InputError(f"{ns.config}: {name}: cannot parse {file_vals[name]!r}") from None
        return None

    tols = _parse_tols([f"{k[4:]}={v}" for k, v in file_vals.items() if k.startswith("tol.")], ns.config or "config")
    tols.update(_parse_tols(ns.tol, "--tol"))
    params = {}
    for k in PARAM_KEYS:
        v = getattr(ns, k)
        params[k] = v if v is not None else file_vals.get(k)
    if isinstance(params["numeric"], str):
        params["numeric"] = params["numeric"].lower() in ("1", "true", "yes")
    kw = {
        "seed": pick("seed", int, ns.seed),
        "nodes": pick("nodes", int, ns.nodes),
        "measure": pick("measure", str, ns.measure),
        "step_h": pick("step_h", float, ns.step_h),
        "output_format": pick("output_format", str, ns.output_format),
    }
    kw = {k: v for k, v in kw.items() if v is not None}
    return RunConfig(
        command=ns.command,
        input_path=ns.input or file_vals.get("input_path"),
        tolerance_overrides=tols,
        params=params,
        output_path=ns.output or file_vals.get("output_path"),
        **kw,
    )


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        return run(config_from_args(ns))
    except InputError as exc:
        print(f"slicequat: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
