"""Command-line front end: evaluate, verify, grid, report.

Exit codes: 0 finite value / all suites pass, 2 pole-signal, 64 usage error
(unknown function or suite), 65 malformed complex literal, 73 unwritable
output path, 1 verification failure.

Complex literals are accepted as "a+bi" (also "bi", "a") or "a,b";
vector-valued arguments are comma-separated lists of a+bi literals, so
"--a 1,1" is the two-parameter vector (1, 1).
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import re
import sys

from . import bps as bps_mod
from . import rhsolver as rh
from .signals import DomainError, PoleSignal, UnsupportedRegimeError
from .special import (
    barnes_zeta,
    delta_fn,
    lambda_fn,
    log_f,
    log_gamma1,
    log_gamma2,
    quantum_dilog,
    upsilon_fn,
)
from .bernoulli import multi_bernoulli
from .suites import SUITES, run_suite

EX_USAGE = 64
EX_DATAERR = 65
EX_CANTCREAT = 73
EX_SIGNAL = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_complex(text: str) -> complex:
    """Parse "a+bi", "bi", "a", or "a,b"; locale-independent."""
    s = str(text).strip().replace(" ", "")
    if not s:
        raise CliError(f"empty complex literal", EX_DATAERR)
    if "," in s:
        parts = s.split(",")
        if len(parts) != 2:
            raise CliError(f"malformed complex literal {text!r}", EX_DATAERR)
        try:
            return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise CliError(f"malformed complex literal {text!r}", EX_DATAERR) from None
    return _parse_cartesian(s, text)


def _parse_cartesian(s: str, original: str) -> complex:
    s2 = s.replace("I", "i").replace("j", "i")
    s2 = re.sub(r"(^|[+\-*])i", r"\g<1>1i", s2)
    s2 = s2.replace("i", "j")
    try:
        return complex(s2)
    except ValueError:
        raise CliError(f"malformed complex literal {original!r}", EX_DATAERR) from None


def parse_vector(text: str) -> tuple[complex, ...]:
    """Comma-separated a+bi literals (the "a,b" scalar form is not allowed here)."""
    parts = str(text).split(",")
    return tuple(_parse_cartesian(p.strip().replace(" ", ""), p) for p in parts)


# ---------------------------------------------------------------------------
# evaluation registry: name -> (argument spec, evaluator)

# `k` is the optional truncation-order override from the config file: it
# deepens the Gamma_2/F recurrence shift, or sets the Richardson level
# count of the limit evaluators; None means the adaptive default.
EVAL_FUNCTIONS: dict = {
    "bernoulli": (
        [("N", "int"), ("k", "int"), ("x", "complex"), ("a", "vector")],
        lambda a, k: multi_bernoulli(a["N"], a["k"], a["x"], a["a"]),
    ),
    "zeta": (
        [("N", "int"), ("s", "complex"), ("x", "complex"), ("a", "vector")],
        lambda a, k: barnes_zeta(a["N"], a["s"], a["x"], a["a"]),
    ),
    "gamma1": (
        [("x", "complex"), ("a", "complex")],
        lambda a, k: cmath.exp(log_gamma1(a["x"], a["a"])),
    ),
    "gamma2": (
        [("x", "complex"), ("omega1", "complex"), ("omega2", "complex")],
        lambda a, k: cmath.exp(log_gamma2(a["x"], a["omega1"], a["omega2"], extra_shift=k or 0)),
    ),
    "lambda": (
        [("w", "complex"), ("eta", "complex"), ("omega", "complex")],
        lambda a, k: lambda_fn(a["w"], a["eta"], a["omega"]),
    ),
    "f": (
        [("w", "complex"), ("eta", "complex"), ("omega1", "complex"), ("omega2", "complex")],
        lambda a, k: cmath.exp(
            log_f(a["w"], a["eta"], a["omega1"], a["omega2"], extra_shift=k or 0)
        ),
    ),
    "eq": ([("q", "complex"), ("x", "complex")], lambda a, k: quantum_dilog(a["q"], a["x"])),
    "delta": ([("w", "complex"), ("eta", "complex")], lambda a, k: delta_fn(a["w"], a["eta"])),
    "upsilon": (
        [("w", "complex"), ("theta", "complex")],
        lambda a, k: upsilon_fn(a["w"], a["theta"]),
    ),
    "psi_a1": (
        [("z", "complex"), ("t", "complex"), ("tau", "complex"), ("theta", "complex"), ("side", "side")],
        lambda a, k: rh.adjoint_psi_a1(a["z"], a["t"], a["tau"], a["theta"], a["side"]),
    ),
    "psi_general": (
        [("bps", "path"), ("r", "complex"), ("t", "complex"), ("tau", "complex"), ("theta", "vector")],
        lambda a, k: rh.adjoint_general(
            _load_instance(a["bps"]), a["r"], a["t"], a["tau"], a["theta"]
        ),
    ),
    "hamiltonian": (
        [("z", "complex"), ("t", "complex"), ("theta", "complex"), ("side", "side")],
        lambda a, k: rh.hamiltonian_limit(
            a["z"], a["t"], a["theta"], a["side"], **({"levels": k} if k else {})
        ).value,
    ),
    "tau": (
        [("z", "complex"), ("t", "complex"), ("theta", "complex"), ("side", "side")],
        lambda a, k: rh.tau_function_limit(
            a["z"], a["t"], a["theta"], a["side"], **({"levels": k} if k else {})
        ).upsilon,
    ),
}

GRID_FUNCTIONS = ("psi_a1", "psi_general", "hamiltonian", "tau")


def _load_instance(path: str) -> rh.RHInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read bps file {path!r}: {exc}", EX_USAGE) from None
    b, s = bps_mod.structure_from_dict(doc)
    if s is None:
        s = bps_mod.em_splitting(b)
    return rh.RHInstance(
        b, s, bps_mod.canonical_refinement(b), tuple(bps_mod.active_rays(b))
    )


# ---------------------------------------------------------------------------
# config and output


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config {path!r}: {exc}", EX_USAGE) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed config {path!r}: {exc}", EX_DATAERR) from None


def _fmt(x: float, digits: int) -> str:
    if digits >= 17:
        return repr(float(x))  # shortest round-trip form
    return f"{x:.{digits}g}"


def _print_value(name: str, args: dict, value: complex, fmt: str, digits: int) -> None:
    if fmt == "json":
        print(
            json.dumps(
                {
                    "function": name,
                    "args": {k: _jsonable(v) for k, v in args.items()},
                    "value": [value.real, value.imag],
                    "status": "ok",
                },
                sort_keys=True,
            )
        )
    elif fmt == "csv":
        print("value_re,value_im,status")
        print(f"{_fmt(value.real, digits)},{_fmt(value.imag, digits)},ok")
    else:
        sign = "+" if value.imag >= 0 else "-"
        print(f"{name} = {_fmt(value.real, digits)} {sign} {_fmt(abs(value.imag), digits)}i")


def _print_signal(name: str, sig: PoleSignal, fmt: str, digits: int) -> None:
    if fmt == "json":
        print(
            json.dumps(
                {
                    "function": name,
                    "status": sig.kind,
                    "location": [complex(sig.location).real, complex(sig.location).imag],
                    "source": sig.source,
                },
                sort_keys=True,
            )
        )
    elif fmt == "csv":
        print("value_re,value_im,status")
        print(f",,{sig.kind}")
    else:
        print(f"{name}: {sig}")


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


# ---------------------------------------------------------------------------
# commands


def _parse_kv_tokens(tokens: list) -> dict:
    """Accept either "name=value" pairs or "--name value" / "--name=value"."""
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.startswith("--"):
            body = tok[2:]
            if "=" in body:
                k, v = body.split("=", 1)
            else:
                if i + 1 >= len(tokens):
                    raise CliError(f"flag {tok} needs a value", EX_USAGE)
                k, v = body, tokens[i + 1]
                i += 1
        elif "=" in tok:
            k, v = tok.split("=", 1)
        else:
            raise CliError(f"arguments must look like name=value or --name value, got {tok!r}", EX_USAGE)
        out[k] = v
        i += 1
    return out


def cmd_eval(ns, config: dict) -> int:
    name = ns.function
    if name not in EVAL_FUNCTIONS:
        print(f"unknown function {name!r}; choose from {', '.join(EVAL_FUNCTIONS)}", file=sys.stderr)
        return EX_USAGE
    spec, fn = EVAL_FUNCTIONS[name]
    raw = _parse_kv_tokens(ns.args)
    args = {}
    for arg_name, kind in spec:
        if arg_name not in raw:
            if kind == "side":
                args[arg_name] = 1
                continue
            print(f"missing argument --{arg_name} for {name}", file=sys.stderr)
            return EX_USAGE
        text = raw.pop(arg_name)
        if kind == "int":
            try:
                args[arg_name] = int(text)
            except ValueError:
                print(f"argument {arg_name} must be an integer, got {text!r}", file=sys.stderr)
                return EX_USAGE
        elif kind == "side":
            if text not in ("+1", "1", "-1", "+", "-"):
                print(f"side must be +1 or -1, got {text!r}", file=sys.stderr)
                return EX_USAGE
            args[arg_name] = -1 if text in ("-1", "-") else 1
        elif kind == "complex":
            args[arg_name] = parse_complex(text)
        elif kind == "vector":
            args[arg_name] = parse_vector(text)
        else:  # path
            args[arg_name] = text
    if raw:
        print(f"unknown arguments for {name}: {', '.join(sorted(raw))}", file=sys.stderr)
        return EX_USAGE
    trunc = config.get("truncation", {}).get(name)
    try:
        value = fn(args, int(trunc) if trunc is not None else None)
    except PoleSignal as sig:
        _print_signal(name, sig, ns.format, ns.digits)
        return EX_SIGNAL
    except (DomainError, UnsupportedRegimeError) as exc:
        print(f"{name}: {exc}", file=sys.stderr)
        return EX_USAGE
    _print_value(name, args, complex(value), ns.format, ns.digits)
    return 0


def cmd_verify(ns, config: dict) -> int:
    tols = dict(config.get("tolerances", {}))
    names = list(SUITES) if ns.suite == "all" else [ns.suite]
    for n in names:
        if n not in SUITES:
            print(f"unknown suite {n!r}; choose from {', '.join(SUITES)} or 'all'", file=sys.stderr)
            return EX_USAGE
    reports = [
        run_suite(
            n,
            samples=ns.samples,
            seed=ns.seed,
            tol=ns.tol if ns.tol is not None else tols.get(n),
        )
        for n in names
    ]
    doc = reports[0].to_dict() if len(reports) == 1 else {
        "reports": [r.to_dict() for r in reports],
        "pass": all(r.passed for r in reports),
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if ns.out:
        try:
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"cannot write {ns.out!r}: {exc}", file=sys.stderr)
            return EX_CANTCREAT
    print(text)
    return 0 if all(r.passed for r in reports) else 1


def cmd_report(ns, config: dict) -> int:
    ns.suite = "all"
    ns.samples = None
    return cmd_verify(ns, config)


def _grid_points(ns) -> list[complex]:
    def axis(spec: str) -> list[float]:
        parts = spec.split(":")
        if len(parts) != 3:
            raise CliError(f"grid axis must be min:max:n, got {spec!r}", EX_USAGE)
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise CliError("grid axis needs n >= 1", EX_USAGE)
        if n == 1:
            return [lo]
        step = (hi - lo) / (n - 1)
        return [lo + i * step for i in range(n)]

    if ns.annulus:
        parts = ns.annulus.split(":")
        if len(parts) != 4:
            raise CliError("annulus must be rmin:rmax:nr:nphi", EX_USAGE)
        rmin, rmax, nr, nphi = float(parts[0]), float(parts[1]), int(parts[2]), int(parts[3])
        radii = [rmin] if nr == 1 else [rmin + i * (rmax - rmin) / (nr - 1) for i in range(nr)]
        phis = [2 * math.pi * i / nphi for i in range(nphi)]
        return [r * cmath.exp(1j * p) for r in radii for p in phis]
    if not (ns.t_re and ns.t_im):
        raise CliError("grid needs either --annulus or both --t-re and --t-im", EX_USAGE)
    res = axis(ns.t_re)
    ims = axis(ns.t_im)
    return [complex(re, im) for im in ims for re in res]


def cmd_grid(ns, config: dict) -> int:
    name = ns.function
    if name not in GRID_FUNCTIONS:
        print(
            f"unknown grid function {name!r}; choose from {', '.join(GRID_FUNCTIONS)}",
            file=sys.stderr,
        )
        return EX_USAGE
    spec, fn = EVAL_FUNCTIONS[name]
    raw = _parse_kv_tokens(ns.args)
    ns.t_re = raw.pop("t-re", raw.pop("t_re", None))
    ns.t_im = raw.pop("t-im", raw.pop("t_im", None))
    ns.annulus = raw.pop("annulus", None)
    ns.out = raw.pop("out", None)
    fixed = {}
    for arg_name, kind in spec:
        if arg_name == "t":
            continue
        if arg_name not in raw:
            if kind == "side":
                fixed[arg_name] = 1
                continue
            print(f"missing fixed argument {arg_name}=... for {name}", file=sys.stderr)
            return EX_USAGE
        text = raw.pop(arg_name)
        if kind == "side":
            fixed[arg_name] = -1 if text in ("-1", "-") else 1
        elif kind == "complex":
            fixed[arg_name] = parse_complex(text)
        elif kind == "vector":
            fixed[arg_name] = parse_vector(text)
        else:
            fixed[arg_name] = text
    if raw:
        print(f"unknown arguments for {name}: {', '.join(sorted(raw))}", file=sys.stderr)
        return EX_USAGE
    points = _grid_points(ns)
    trunc = config.get("truncation", {}).get(name)
    trunc = int(trunc) if trunc is not None else None
    digits = ns.digits
    rows = ["t_re,t_im,value_re,value_im,status"]
    for t in points:
        args = dict(fixed)
        args["t"] = t
        try:
            v = complex(fn(args, trunc))
            rows.append(
                f"{_fmt(t.real, digits)},{_fmt(t.imag, digits)},"
                f"{_fmt(v.real, digits)},{_fmt(v.imag, digits)},ok"
            )
        except PoleSignal as sig:
            rows.append(f"{_fmt(t.real, digits)},{_fmt(t.imag, digits)},,,{sig.kind}")
        except DomainError as exc:
            status = "excluded-ray" if "excluded ray" in str(exc) else "domain"
            rows.append(f"{_fmt(t.real, digits)},{_fmt(t.imag, digits)},,,{status}")
    text = "\n".join(rows) + "\n"
    if ns.out:
        try:
            with open(ns.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"cannot write {ns.out!r}: {exc}", file=sys.stderr)
            return EX_CANTCREAT
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message, EX_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qrh", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--seed", type=int, default=42, help="seed for verification sampling")
    p.add_argument("--tol", type=float, default=None, help="tolerance override")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--digits", type=int, default=17, help="printed digits (max 17)")
    p.add_argument("--config", default=None, help="JSON config file")
    sub = p.add_subparsers(dest="command")

    pe = sub.add_parser("eval", help="evaluate a registered function")
    pe.add_argument("function")
    pe.add_argument(
        "args",
        nargs=argparse.REMAINDER,
        help="name=value pairs or --name value (complex: a+bi or a,b)",
    )

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite")
    pv.add_argument("--samples", type=int, default=None)
    pv.add_argument("--out", default=None)
    # also accepted after the subcommand; SUPPRESS keeps the global value
    pv.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    pv.add_argument("--tol", type=float, default=argparse.SUPPRESS)

    pg = sub.add_parser("grid", help="evaluate a t-dependent function on a grid")
    pg.add_argument("function")
    pg.add_argument(
        "args",
        nargs=argparse.REMAINDER,
        help="fixed name=value pairs plus --t-re min:max:n --t-im min:max:n "
        "(or --annulus rmin:rmax:nr:nphi) and --out FILE",
    )

    pr = sub.add_parser("report", help="run every suite and emit one JSON report")
    pr.add_argument("--out", default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        config = load_config(ns.config)
        if ns.digits is None or ns.digits > 17:
            ns.digits = 17
        if ns.config:
            ns.seed = ns.seed if ns.seed != 42 else int(config.get("seed", ns.seed))
            if ns.format == "text" and "format" in config:
                ns.format = config["format"]
            if "digits" in config:
                ns.digits = min(17, int(config["digits"]))
        if ns.command == "eval":
            return cmd_eval(ns, config)
        if ns.command == "verify":
            return cmd_verify(ns, config)
        if ns.command == "grid":
            return cmd_grid(ns, config)
        if ns.command == "report":
            return cmd_report(ns, config)
        parser.print_help()
        return EX_USAGE
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
