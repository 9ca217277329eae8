"""Command-line front end.

    orthoconv eval   --family meixner-pollaczek --lambda 1 --phi 1.2 --n 3 --x 0.3
    orthoconv quad   --operator uq-su2-xpa --N 4 --p 1.1 --q 0.6 --nodes 5
    orthoconv coeff  --kind racah-uq-su11 --k1 1 --k2 1.5 --k3 .7 --j12 1 --j23 2 --j 2 --q .5
    orthoconv verify --identity T4_10 --samples 200 --seed 42 --format json
    orthoconv list

Family, operator and coefficient parameters are plain flags named after the
constructor fields; complex values are written re+imi. Exit status is 0 on
success, 1 when a verification fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import inspect
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

from . import __version__, coupling
from . import polynomials as poly
from . import spectral
from .numerics import NumericsError
from .verify import (
    DEFAULT_RANGES,
    IdentityReport,
    SampleConfig,
    list_identities,
    verify,
)

__all__ = ["run", "main", "write_report", "render_report", "parse_number", "UsageError"]

REPORT_DIR_ENV = "ORTHOCONV_REPORT_DIR"

FAMILIES = {
    "meixner-pollaczek": poly.MeixnerPollaczek,
    "continuous-hahn": poly.ContinuousHahn,
    "hahn": poly.Hahn,
    "jacobi": poly.Jacobi,
    "laguerre": poly.Laguerre,
    "meixner": poly.Meixner,
    "krawtchouk": poly.Krawtchouk,
    "charlier": poly.Charlier,
    "hermite": poly.Hermite,
    "racah": poly.Racah,
    "askey-wilson": poly.AskeyWilson,
    "al-salam-chihara": poly.AlSalamChihara,
    "q-hahn": poly.QHahn,
    "q-racah": poly.QRacah,
    "dual-q-krawtchouk": poly.DualQKrawtchouk,
}

OPERATORS = {
    "su11-xphi": spectral.Su11Xphi,
    "uq-su11-ysa": spectral.UqSu11YsA,
    "uq-su2-xpa": spectral.UqSu2XpA,
}

COEFFICIENTS = {
    "cgc-su11": coupling.cgc_su11,
    "cgc-uq-su11": coupling.cgc_uq_su11,
    "racah-su11": coupling.racah_su11,
    "racah-uq-su11": coupling.racah_uq_su11,
    "cgc-uq-su2-n0": coupling.cgc_uq_su2_n0,
    "overlap-uq-su2": coupling.eigenbasis_overlap_uq_su2,
    "linearisation": coupling.linearisation_coeffs,
}

# flag spellings that differ from the field name
_ALIASES = {"lam": "lambda"}


class UsageError(Exception):
    """Bad flags or parameter values; exit status 2."""


# ---------------------------------------------------------------------------
# numbers


def parse_number(text: str, kind: str = "float"):
    """Parse an int, a float or a complex literal such as ``0.5-1.25i``."""
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
    except ValueError:
        raise UsageError(f"not a valid {kind}: {text!r}") from None
    s = text.strip().replace(" ", "")
    if not s.endswith(("i", "j")):
        try:
            return complex(float(s), 0.0)
        except ValueError:
            raise UsageError(f"not a valid complex number: {text!r}") from None
    try:
        return complex(s[:-1] + "j")
    except ValueError:
        raise UsageError(f"not a valid complex number: {text!r}") from None


def _fmt(x: float) -> str:
    # 17 significant digits round-trip every double
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def _display(value) -> str:
    """Shortest round-trip text for terminal output."""
    if isinstance(value, complex):
        if value.imag == 0:
            return repr(value.real)
        sign = "+" if value.imag >= 0 or math.isnan(value.imag) else "-"
        return f"{value.real!r}{sign}{abs(value.imag)!r}i"
    return repr(float(value))


def _json_text(obj, indent: int = 0) -> str:
    # json.dumps would print shortest repr; reports want fixed 17 digits
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, complex):
        return _json_text({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json_text(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_json_text(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _json_text(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# ---------------------------------------------------------------------------
# reports


def _report_doc(report: IdentityReport) -> dict:
    cfg = report.config
    return {
        "tool_version": __version__,
        "identity": report.identity,
        "seed": cfg.seed,
        "count": cfg.count,
        "tolerance": cfg.tolerance,
        "degree_caps": {"classical": cfg.classical_cap, "q": cfg.q_cap},
        "ranges": {k: list(cfg.range(k)) for k in sorted(DEFAULT_RANGES)},
        "samples": [
            {
                "index": s.index,
                "params": s.parameters,
                "lhs": s.lhs,
                "rhs": s.rhs,
                "residual": s.scaled_residual,
                "error": s.error,
            }
            for s in report.samples
        ],
        "max_residual": report.max_scaled_residual,
        "pass": report.passed,
    }


def _csv_text(reports: Sequence[IdentityReport]) -> str:
    names: list[str] = []
    for r in reports:
        for s in r.samples:
            for k in s.parameters:
                if k not in names:
                    names.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["identity", "index"] + [f"param_{k}" for k in names]
               + ["lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "error"])
    for r in reports:
        for s in r.samples:
            row = [r.identity, s.index]
            for k in names:
                v = s.parameters.get(k, "")
                row.append(_fmt(v) if isinstance(v, float) else v)
            for z in (s.lhs, s.rhs):
                row += ["", ""] if z is None else [_fmt(z.real), _fmt(z.imag)]
            row += [_fmt(s.scaled_residual), s.error or ""]
            w.writerow(row)
    return buf.getvalue()


def _md_text(reports: Sequence[IdentityReport]) -> str:
    lines = ["| identity | samples | errors | max scaled residual | tolerance | pass |", "|---|---|---|---|---|---|"]
    for r in reports:
        errors = sum(1 for s in r.samples if s.error)
        lines.append(
            f"| {r.identity} | {len(r.samples)} | {errors} | {r.max_scaled_residual:.3e} "
            f"| {r.config.tolerance:.1e} | {'yes' if r.passed else 'no'} |"
        )
    return "\n".join(lines) + "\n"


def render_report(report, fmt: str = "json") -> str:
    """Serialise one report, or a list of them, as json, csv or md."""
    reports = list(report) if isinstance(report, (list, tuple)) else [report]
    if fmt == "json":
        if isinstance(report, (list, tuple)):
            doc = {
                "tool_version": __version__,
                "reports": [_report_doc(r) for r in reports],
                "pass": all(r.passed for r in reports),
            }
        else:
            doc = _report_doc(report)
        return _json_text(doc) + "\n"
    if fmt == "csv":
        return _csv_text(reports)
    if fmt == "md":
        return _md_text(reports)
    raise UsageError(f"unknown format {fmt!r}")


def write_report(report, path: str, fmt: str = "json") -> None:
    """Write ``render_report(report, fmt)`` to ``path``."""
    text = render_report(report, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# parameter flags


def _kind_of(annotation) -> str:
    text = annotation if isinstance(annotation, str) else getattr(annotation, "__name__", str(annotation))
    if "complex" in text:
        return "complex"
    if text == "int":
        return "int"
    return "float"


def _fields_of(target) -> list[tuple[str, str]]:
    if dataclasses.is_dataclass(target):
        return [(f.name, _kind_of(f.type)) for f in dataclasses.fields(target) if f.init]
    sig = inspect.signature(target)
    return [(p.name, _kind_of(p.annotation)) for p in sig.parameters.values()]


def _parse_params(extra: Sequence[str], fields: list[tuple[str, str]], what: str) -> dict:
    flag_to_field = {"--" + _ALIASES.get(name, name): (name, kind) for name, kind in fields}
    for name, kind in fields:
        flag_to_field.setdefault("--" + name, (name, kind))
    values = {}
    it = iter(extra)
    for token in it:
        flag, eq, inline = token.partition("=")
        if flag not in flag_to_field:
            known = ", ".join(sorted({"--" + _ALIASES.get(n, n) for n, _ in fields})) or "none"
            raise UsageError(f"unknown parameter {flag} for {what}; expected {known}")
        name, kind = flag_to_field[flag]
        if not eq:
            try:
                inline = next(it)
            except StopIteration:
                raise UsageError(f"{flag} needs a value") from None
        values[name] = parse_number(inline, kind)
    missing = [_ALIASES.get(n, n) for n, _ in fields if n not in values]
    if missing:
        raise UsageError(f"missing parameters for {what}: " + ", ".join("--" + m for m in missing))
    return values


def _build(cls, params: dict, what: str):
    try:
        return cls(**params)
    except (poly.DomainError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid parameters for {what}: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def _cmd_eval(args, extra, out) -> int:
    cls = FAMILIES[args.family]
    family = _build(cls, _parse_params(extra, _fields_of(cls), args.family), args.family)
    x = parse_number(args.x, "complex")
    x = x.real if x.imag == 0 else x
    try:
        value = poly.evaluate(family, args.n, x)
    except poly.DomainError as exc:
        raise UsageError(str(exc)) from None
    out.write(_display(value) + "\n")
    return 0


def _cmd_quad(args, extra, out) -> int:
    if (args.family is None) == (args.operator is None):
        raise UsageError("quad needs exactly one of --family or --operator")
    if args.family is not None:
        cls = FAMILIES[args.family]
        obj = _build(cls, _parse_params(extra, _fields_of(cls), args.family), args.family)
        try:
            J = poly.recurrence(obj)
        except (poly.UnsupportedFamilyError, poly.DomainError) as exc:
            raise UsageError(str(exc)) from None
        source = {"family": args.family}
    else:
        cls = OPERATORS[args.operator]
        obj = _build(cls, _parse_params(extra, _fields_of(cls), args.operator), args.operator)
        J = spectral.representation_operator(obj)
        source = {"operator": args.operator}
    try:
        rule = spectral.gauss_rule(J, args.nodes)
    except spectral.DimensionError as exc:
        raise UsageError(str(exc)) from None
    params = {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "weight"])
        for x, wt in zip(rule.nodes, rule.weights):
            w.writerow([_fmt(float(x)), _fmt(float(wt))])
        text = buf.getvalue()
    else:
        doc = dict(source)
        doc.update(
            tool_version=__version__,
            params=params,
            variable=J.variable_map.description,
            nodes=[float(v) for v in rule.nodes],
            weights=[float(v) for v in rule.weights],
        )
        text = _json_text(doc) + "\n"
    _emit(text, args.out, out)
    return 0


def _cmd_coeff(args, extra, out) -> int:
    fn = COEFFICIENTS[args.kind]
    params = _parse_params(extra, _fields_of(fn), args.kind)
    try:
        value = fn(**params)
    except (poly.DomainError, coupling.ConstraintError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if isinstance(value, (list, tuple)):
        out.write(" ".join(_display(v) for v in value) + "\n")
    else:
        out.write(_display(value) + "\n")
    return 0


def _emit(text: str, path: Optional[str], out) -> None:
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None
    else:
        out.write(text)


def _cmd_verify(args, extra, out) -> int:
    if extra:
        raise UsageError(f"unrecognised arguments: {' '.join(extra)}")
    if (args.identity is None) == (not args.all):
        raise UsageError("verify needs exactly one of --identity or --all")
    try:
        config = SampleConfig(seed=args.seed, count=args.samples, tolerance=args.tol, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    known = [info.id.value for info in list_identities()]
    if args.all:
        reports = [verify(name, config) for name in known]
        payload = reports
        passed = all(r.passed for r in reports)
        stem = "all"
    else:
        if args.identity not in known:
            raise UsageError(f"unknown identity {args.identity!r}; known: {', '.join(known)}")
        payload = verify(args.identity, config)
        passed = payload.passed
        stem = args.identity
    text = render_report(payload, args.format)
    path = args.report
    report_dir = args.report_dir or os.environ.get(REPORT_DIR_ENV)
    if path is None and report_dir:
        path = os.path.join(report_dir, f"{stem}.{args.format}")
    _emit(text, path, out)
    return 0 if passed else 1


def _cmd_list(args, extra, out) -> int:
    if extra:
        raise UsageError(f"unrecognised arguments: {' '.join(extra)}")
    infos = list_identities()
    if args.format == "json":
        doc = [
            {"id": i.id.value, "title": i.title, "kind": i.kind, "summed_side": i.summed_side, "ranges": i.ranges}
            for i in infos
        ]
        out.write(_json_text(doc) + "\n")
    else:
        for i in infos:
            out.write(f"{i.id.value:<16} {i.kind:<10} {i.title}\n")
    return 0


# ---------------------------------------------------------------------------
# entry points


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orthoconv", description="Askey-scheme polynomials, coupling coefficients and identity checks.")
    p.add_argument("--version", action="version", version=f"orthoconv {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate a polynomial; family parameters follow as --name value")
    e.add_argument("--family", required=True, choices=sorted(FAMILIES))
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--x", required=True)

    q = sub.add_parser("quad", help="Gauss rule of a family or representation operator")
    q.add_argument("--family", choices=sorted(FAMILIES))
    q.add_argument("--operator", choices=sorted(OPERATORS))
    q.add_argument("--nodes", type=int, required=True)
    q.add_argument("--out")
    q.add_argument("--format", choices=("json", "csv"), default="json")

    c = sub.add_parser("coeff", help="Clebsch-Gordan, Racah, overlap or linearisation coefficients")
    c.add_argument("--kind", required=True, choices=sorted(COEFFICIENTS))

    v = sub.add_parser("verify", help="check identities on seeded samples")
    v.add_argument("--identity")
    v.add_argument("--all", action="store_true")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--format", choices=("json", "csv", "md"), default="json")
    v.add_argument("--report", help="report path; default is stdout or the report directory")
    v.add_argument("--report-dir", help=f"directory for reports (default ${REPORT_DIR_ENV})")

    ls = sub.add_parser("list", help="the identity catalog")
    ls.add_argument("--format", choices=("text", "json"), default="text")
    return p


_COMMANDS = {"eval": _cmd_eval, "quad": _cmd_quad, "coeff": _cmd_coeff, "verify": _cmd_verify, "list": _cmd_list}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    """Run one command; returns the exit status instead of exiting."""
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _parser()
    try:
        try:
            args, extra = parser.parse_known_args(argv)
        except SystemExit as exc:  # --help and --version
            return int(exc.code or 0)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(_COMMANDS))
        return _COMMANDS[args.command](args, extra, out)
    except UsageError as exc:
        err.write(f"orthoconv: error: {exc}\n")
        return 2
    except (NumericsError, ArithmeticError, OSError) as exc:
        err.write(f"orthoconv: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
