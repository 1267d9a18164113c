# infinikit/cli.py
"""Command-line front end. Entry script: tools/infinikit.py."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, TextIO

from infinikit import config
from infinikit import dixmier as dx
from infinikit import filters as flt
from infinikit import hyperseq as hs
from infinikit import levi_civita as lc
from infinikit import opcalc as oc
from infinikit.bridge import run_bridge
from infinikit.errors import (
    BadInputError,
    DomainError,
    InfinikitError,
    ModeMismatchError,
    UsageError,
)
from infinikit.expr import MODES, eval_expr, infer_mode, parse
from utils.helpers import dump_doc, inline_or_file, read_text, write_data_file

log = logging.getLogger(__name__)

DIGITS = 12
LOG_FORMAT = "[%(name)s] %(message)s"


@dataclass(frozen=True)
class Command:
    subcommand: str
    options: dict[str, Any] = field(default_factory=dict)
    inputs: tuple[str, ...] = ()


class _ArgParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


# --- Number formatting --------------------------------------------------------------
def fmt(x: Any) -> str:
    if isinstance(x, Fraction):
        return lc.format_rational(x)
    if isinstance(x, float):
        return format(x, f".{DIGITS}g")
    return str(x)


def _int_arg(text: str) -> int:
    """Integers, also written as powers: 2^20."""
    try:
        if "^" in text:
            base, exp = text.split("^", 1)
            return int(base) ** int(exp)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


# --- Parser -------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = _ArgParser(prog="infinikit", description="Exhibitable infinitesimals toolkit.")
    parser.add_argument("--format", choices=("text", "doc"), default="text")
    parser.add_argument("--verbose", "-v", action="store_true", help="log at DEBUG to stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_ArgParser)

    for name in ("eval", "st", "classify"):
        p = sub.add_parser(name)
        p.add_argument("expr")
        p.add_argument("--mode", choices=("auto",) + MODES, default="auto")

    p = sub.add_parser("diff", help="derivative and continuity of a rational polynomial")
    p.add_argument("--f", required=True, help="polynomial in x, e.g. 3*x^2 - x/2")
    p.add_argument("--x0", required=True)
    p.add_argument("--alpha", default="eps", help="infinitesimal step for the continuity check")

    p = sub.add_parser("seq")
    p.add_argument("--expr", required=True)
    p.add_argument("--prefix", default=None, help="{1:0.5, 2:1/4} or a file holding it")
    p.add_argument("--samples", type=int, default=5)

    p = sub.add_parser("compare")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--mode", choices=("auto", "lc", "seq"), default="auto")

    p = sub.add_parser("spectrum")
    p.add_argument("--matrix", required=True)
    p.add_argument("--conjugate", type=int, default=None, metavar="SEED")
    p.add_argument("--tail", default=None)

    p = sub.add_parser("dixmier")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--tail")
    source.add_argument("--tower", action="store_true", help="dyadic-tower oscillating spectrum")
    p.add_argument("--matrix", default=None, help="known leading singular values")
    p.add_argument("--cap", type=_int_arg, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--no-smoothing", action="store_true")
    p.add_argument("--data", default=None, help="write (N, gamma_N) pairs here")

    p = sub.add_parser("bridge")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tail", required=True)
    p.add_argument("--predicates", required=True, help="e.g. gt10,evens,squares")
    p.add_argument("--seed", type=int, default=None, help="conjugation seed; defaults to INFINIKIT_SEED")
    p.add_argument("--horizon", type=_int_arg, default=None)
    return parser


def parse_command(argv: Sequence[str]) -> Command:
    ns = vars(build_parser().parse_args(list(argv)))
    name = ns.pop("subcommand")
    inputs = tuple(v for k, v in ns.items() if k in ("matrix", "expr") and v)
    return Command(name, ns, inputs)


# --- Helpers ------------------------------------------------------------------------
def _value(text: str, mode: str) -> Any:
    tree = parse(text)
    return eval_expr(tree, infer_mode(tree) if mode == "auto" else mode)


def _seq(text: str) -> hs.RateSeq:
    tree = parse(text)
    return eval_expr(tree, "seq")  # type: ignore[return-value]


def _render_value(v: Any) -> str:
    if isinstance(v, lc.LCNumber):
        return lc.format_lc(v)
    if isinstance(v, hs.RateSeq):
        return hs.describe(v, DIGITS)
    if isinstance(v, lc.Polynomial):
        return " ".join(fmt(c) for c in v.coeffs) or "0"
    return fmt(v)


def classify_seq(a: hs.RateSeq) -> str:
    """zero / infinitesimal / appreciable-finite / infinite against the constant 1."""
    if a.is_zero_class():
        return lc.Classification.ZERO.value
    verdict = hs.dominance_compare(a, hs.ONE)
    return {
        hs.DominanceVerdict.LESS: lc.Classification.INFINITESIMAL.value,
        hs.DominanceVerdict.SAME_ORDER: lc.Classification.APPRECIABLE.value,
        hs.DominanceVerdict.GREATER: lc.Classification.INFINITE.value,
    }.get(verdict, verdict.value)


def _resolve_seed(options: dict[str, Any]) -> int | None:
    return options.get("seed") if options.get("seed") is not None else config.seed_from_env()


# --- Subcommands --------------------------------------------------------------------
Result = tuple[str, dict[str, Any]]


def cmd_eval(o: dict[str, Any]) -> Result:
    v = _value(o["expr"], o["mode"])
    return _render_value(v), {"value": _render_value(v), "kind": type(v).__name__}


def cmd_st(o: dict[str, Any]) -> Result:
    v = _value(o["expr"], o["mode"])
    if isinstance(v, lc.LCNumber):
        st: Any = lc.standard_part(v)
    elif isinstance(v, hs.RateSeq):
        st = hs.standard_part_seq(v)
    else:
        raise ModeMismatchError("x", "st")
    return fmt(st), {"standard_part": fmt(st)}


def cmd_classify(o: dict[str, Any]) -> Result:
    v = _value(o["expr"], o["mode"])
    if isinstance(v, lc.LCNumber):
        label = lc.classify(v).value
    elif isinstance(v, hs.RateSeq):
        label = classify_seq(v)
    else:
        raise ModeMismatchError("x", "classify")
    return label, {"classification": label}


def cmd_diff(o: dict[str, Any]) -> Result:
    f = eval_expr(parse(o["f"]), "poly")
    x0 = Fraction(o["x0"])
    alpha = eval_expr(parse(o["alpha"]), "lc")
    d = lc.derivative(f, x0)  # type: ignore[arg-type]
    continuous = lc.continuity_check(f, x0, alpha)  # type: ignore[arg-type]
    lines = [f"derivative {fmt(d)}", f"continuous {str(continuous).lower()}"]
    return "\n".join(lines), {"derivative": fmt(d), "continuous": continuous}


def cmd_seq(o: dict[str, Any]) -> Result:
    a = _seq(o["expr"])
    if o["prefix"]:
        a = a.with_prefix(hs.parse_prefix(inline_or_file(o["prefix"])))
    head = [fmt(float(x)) for x in a.head(o["samples"])]
    label = classify_seq(a)
    st = fmt(hs.standard_part_seq(a)) if hs.converges(a) else "none"
    lines = [
        f"seq {hs.describe(a, DIGITS)}",
        f"rate {hs.format_seq(hs.RateSeq(terms=a.terms[:1]), DIGITS) if a.terms else 'none'}",
        f"class {label}",
        f"st {st}",
        f"head {' '.join(head)}",
    ]
    doc = {"seq": hs.describe(a, DIGITS), "class": label, "st": st, "head": head}
    return "\n".join(lines), doc


def cmd_compare(o: dict[str, Any]) -> Result:
    ta, tb = parse(o["a"]), parse(o["b"])
    mode = o["mode"]
    if mode == "auto":
        modes = {infer_mode(ta), infer_mode(tb)}
        mode = "seq" if "seq" in modes else "lc"
    if mode == "lc":
        verdict = lc.compare(eval_expr(ta, "lc"), eval_expr(tb, "lc")).value  # type: ignore[arg-type]
    else:
        verdict = hs.dominance_compare(eval_expr(ta, "seq"), eval_expr(tb, "seq")).value  # type: ignore[arg-type]
    return verdict, {"mode": mode, "verdict": verdict}


def _load_matrix(path: str) -> oc.OperatorTrunc:
    return oc.parse_matrix(read_text(path))


def cmd_spectrum(o: dict[str, Any]) -> Result:
    t = _load_matrix(o["matrix"])
    if o["conjugate"] is not None:
        t = oc.conjugate(t, oc.random_orthogonal(t.dim, o["conjugate"]))
    tail = _seq(o["tail"]) if o["tail"] else None
    s = oc.spectrum_desc(t, tail)
    doc = {
        "dim": t.dim,
        "values": [float(v) for v in s.values],
        "tail": s.describe_tail(),
        "conjugate_seed": o["conjugate"],
    }
    return oc.format_spectrum(s, DIGITS), doc


def _spectral_input(o: dict[str, Any], cap: int) -> oc.SpectralSequence:
    if o["tower"]:
        return dx.tower_sequence(2 * cap)
    tail = _seq(o["tail"])
    values = oc.spectrum_desc(_load_matrix(o["matrix"])).values if o["matrix"] else ()
    return oc.SpectralSequence(values, tail)


def cmd_dixmier(o: dict[str, Any]) -> Result:
    cap = o["cap"] or config.DIXMIER_CAP
    s = _spectral_input(o, cap)
    est = dx.dixmier_estimate(s, cap, tol=o["tol"], smoothing=not o["no_smoothing"])
    if o["data"]:
        write_data_file(o["data"], list(zip(est.schedule, est.gamma_values)), DIGITS)
    lines = [f"{'N':>8}  gamma_N"]
    lines += [f"{n:>8}  {fmt(g)}" for n, g in zip(est.schedule, est.gamma_values)]
    lines += [
        f"liminf {fmt(est.liminf)}",
        f"limsup {fmt(est.limsup)}",
        f"spread {fmt(est.spread)}",
        f"measurable {str(est.measurable).lower()}",
        f"value {fmt(est.value) if est.value is not None else 'none'}",
        f"proxy {dx.MEASURABILITY_PROXY}",
    ]
    return "\n".join(lines), est.to_doc()


def cmd_bridge(o: dict[str, Any]) -> Result:
    t = _load_matrix(o["matrix"])
    seed = _resolve_seed(o)
    if seed is not None:
        t = oc.conjugate(t, oc.random_orthogonal(t.dim, seed))
    predicates = flt.parse_predicates(o["predicates"])
    report = run_bridge(t, _seq(o["tail"]), predicates, horizon=o["horizon"])
    lines = [f"[{s.label}] {s.name}: {s.result}" for s in report.stages]
    lines += [f"{name} {verdict.value}" for name, verdict in report.queries]
    lines += [
        f"enclosure {report.enclosure} width {report.enclosure.width}",
        f"note {report.exhibitability_note}",
    ]
    doc = report.to_doc()
    doc["seed"] = seed
    return "\n".join(lines), doc


HANDLERS: dict[str, Callable[[dict[str, Any]], Result]] = {
    "eval": cmd_eval,
    "st": cmd_st,
    "classify": cmd_classify,
    "diff": cmd_diff,
    "seq": cmd_seq,
    "compare": cmd_compare,
    "spectrum": cmd_spectrum,
    "dixmier": cmd_dixmier,
    "bridge": cmd_bridge,
}


# --- Entry --------------------------------------------------------------------------
def configure_logging(verbose: bool = False, stream: TextIO | None = None) -> None:
    """One stderr handler on the package logger; replaced on every call."""
    root = logging.getLogger("infinikit")
    for handler in list(root.handlers):
        if getattr(handler, "infinikit_cli", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.infinikit_cli = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else config.LOG_LEVEL)
    root.propagate = False


def dispatch(c: Command) -> tuple[int, str]:
    """Runs one command; returns (exit code, rendered stdout)."""
    if c.subcommand not in HANDLERS:
        raise UsageError(f"unknown subcommand {c.subcommand!r}")
    log.debug("dispatch %s %s", c.subcommand, " ".join(c.inputs))
    text, doc = HANDLERS[c.subcommand](c.options)
    if c.options.get("format") == "doc":
        return 0, dump_doc(doc)
    return 0, text


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        command = parse_command(sys.argv[1:] if argv is None else argv)
        configure_logging(bool(command.options.get("verbose")), err)
        code, text = dispatch(command)
    except (UsageError, DomainError) as exc:
        err.write(f"{exc.reason}: {exc}\n")
        return 2 if isinstance(exc, UsageError) else 1
    except InfinikitError as exc:
        err.write(f"{exc.reason}: {exc}\n")
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        # Fraction("abc") and friends from option values
        err.write(f"{BadInputError.reason}: {exc}\n")
        return 2
    out.write(text + "\n")
    return code
