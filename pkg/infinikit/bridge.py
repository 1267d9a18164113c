# infinikit/bridge.py
"""From a compact operator to an ultrafilter question, stage by stage.

spectrum -> eps (a null sequence) -> H = 1/eps -> *[H] -> filter verdicts ->
dyadic enclosure. Every stage up to *[H] is canonical; the verdicts and the
enclosure depend on an ultrafilter nobody can exhibit, so they are only
decided where the answer set is finite or cofinite.
"""

from __future__ import annotations

import contextlib
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from infinikit import levi_civita as lc
from infinikit.errors import (
    BridgeStageError,
    DegenerateInputError,
    DomainError,
    NotCompactError,
    PreconditionError,
)
from infinikit.filters import (
    DyadicInterval,
    FilterVerdict,
    Predicate,
    dyadic_embed,
    filter_queries,
)
from infinikit.hyperseq import (
    ONE,
    Power,
    RateSeq,
    ZERO,
    converges,
    describe,
    eventual_sign,
    eventually_equal,
    extend,
    infinitesimal_part,
    integer_part,
    monomial,
    neg,
    reciprocal,
    scale,
    standard_part_seq,
    termwise_add,
    termwise_mul,
)
from infinikit.opcalc import OperatorTrunc, SpectralSequence, is_compact_model, spectrum_desc

log = logging.getLogger(__name__)

CANONICAL = "canonical"
CHOICE_DEPENDENT = "choice-dependent"

EXHIBITABILITY_NOTE = (
    "Stages spectrum, infinitesimal, reciprocal and integer_part are canonical and "
    "exhibited. The subset of N defined by the ultrafilter is decided only on "
    "predicates whose answer set is finite or cofinite; every other bit stays "
    "undecided, so the set itself is never exhibited. A single truncation plus a "
    "symbolic tail stands in for the operator family."
)


@contextlib.contextmanager
def _stage(name: str) -> Iterator[None]:
    try:
        yield
    except BridgeStageError:
        raise
    except DomainError as exc:
        log.debug("bridge stage %s failed: %s", name, exc)
        raise BridgeStageError(name, exc) from exc


@dataclass(frozen=True)
class Stage:
    name: str
    label: str
    result: str


@dataclass(frozen=True, eq=False)
class BridgeReport:
    spectral: SpectralSequence | None
    robinson: RateSeq
    H: RateSeq
    H_int: RateSeq
    queries: list[tuple[str, FilterVerdict]]
    enclosure: DyadicInterval
    stages: list[Stage] = field(default_factory=list)
    exhibitability_note: str = EXHIBITABILITY_NOTE

    @property
    def reciprocal_holds(self) -> bool:
        """eps * H is eventually 1."""
        return eventually_equal(termwise_mul(self.robinson, self.H), ONE)

    def to_doc(self, head: int = 8) -> dict[str, object]:
        return {
            "spectral": (
                {
                    "values": [float(v) for v in self.spectral.values],
                    "tail": self.spectral.describe_tail(),
                }
                if self.spectral is not None
                else None
            ),
            "robinson": describe(self.robinson),
            "H": describe(self.H),
            "H_int": describe(self.H_int),
            "H_int_head": [_plain(self.H_int.sample(n)) for n in range(1, head + 1)],
            "queries": [[name, verdict.value] for name, verdict in self.queries],
            "enclosure": {
                "lo": str(self.enclosure.lo),
                "hi": str(self.enclosure.hi),
                "width": str(self.enclosure.width),
                "decided_bits": self.enclosure.decided_bits,
            },
            "stages": [
                {"name": s.name, "label": s.label, "result": s.result} for s in self.stages
            ],
            "exhibitability_note": self.exhibitability_note,
        }


def _plain(value: object) -> object:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, float) and not math.isfinite(value):
        # zero-sample sentinel; JSON has no infinity
        return str(value)
    return value


# --- Stages ------------------------------------------------------------------------
def operator_to_infinitesimal(t: OperatorTrunc, tail: RateSeq) -> RateSeq:
    """Prefix = decreasing singular values of t; classes = tail."""
    spectral = spectrum_desc(t, tail)
    if not is_compact_model(spectral):
        raise NotCompactError(f"tail {describe(tail)} does not tend to 0")
    overrides = [(i, float(v)) for i, v in enumerate(spectral.values, start=1)]
    return tail.with_prefix(overrides)


def _chain(
    eps: RateSeq,
    predicates: Sequence[Predicate],
    stages: list[Stage],
    horizon: int | None,
) -> tuple[RateSeq, RateSeq, list[tuple[str, FilterVerdict]], DyadicInterval]:
    if not predicates:
        raise PreconditionError("the bridge needs at least one predicate")
    with _stage("reciprocal"):
        h = reciprocal(eps)
    stages.append(Stage("reciprocal", CANONICAL, describe(h)))
    with _stage("integer_part"):
        h_int = integer_part(h)
    stages.append(Stage("integer_part", CANONICAL, describe(h_int)))
    with _stage("filter_query"):
        queries = filter_queries(h_int, predicates, horizon)
    stages.append(
        Stage(
            "filter_query",
            CHOICE_DEPENDENT,
            ", ".join(f"{name}={verdict.value}" for name, verdict in queries),
        )
    )
    enclosure = dyadic_embed(verdict for _, verdict in queries)
    stages.append(Stage("dyadic_embed", CHOICE_DEPENDENT, str(enclosure)))
    log.info("bridge: H_int=%s enclosure=%s", describe(h_int), enclosure)
    return h, h_int, queries, enclosure


def run_bridge(
    t: OperatorTrunc,
    tail: RateSeq,
    predicates: Sequence[Predicate],
    *,
    horizon: int | None = None,
) -> BridgeReport:
    """Compact operator truncation + tail -> Robinson infinitesimal -> ultrafilter bits."""
    if not predicates:
        raise PreconditionError("the bridge needs at least one predicate")
    stages: list[Stage] = []
    with _stage("spectrum"):
        spectral = spectrum_desc(t, tail)
    stages.append(Stage("spectrum", CANONICAL, f"{len(spectral)} values, tail {describe(tail)}"))
    with _stage("infinitesimal"):
        eps = operator_to_infinitesimal(t, tail)
    stages.append(Stage("infinitesimal", CANONICAL, describe(eps)))
    h, h_int, queries, enclosure = _chain(eps, predicates, stages, horizon)
    return BridgeReport(spectral, eps, h, h_int, queries, enclosure, stages)


def chain_from_finite(
    x: RateSeq, predicates: Sequence[Predicate], *, horizon: int | None = None
) -> BridgeReport:
    """Start from a finite non-standard x: eps = |x - st(x)|."""
    stages: list[Stage] = []
    with _stage("infinitesimal"):
        st = standard_part_seq(x)
        eps = infinitesimal_part(x)
        sign = eventual_sign(eps)
        if eps.is_zero_class() or sign == 0:
            raise DegenerateInputError(f"{describe(x)} is standard; it has no infinitesimal part")
        if sign is None:
            raise DegenerateInputError(f"x - st(x) changes sign forever: {describe(eps)}")
        if sign < 0:
            eps = neg(eps)
    stages.append(Stage("infinitesimal", CANONICAL, f"st = {st}, eps = {describe(eps)}"))
    h, h_int, queries, enclosure = _chain(eps, predicates, stages, horizon)
    return BridgeReport(None, eps, h, h_int, queries, enclosure, stages)


def realize(a: lc.LCNumber, base: RateSeq | None = None) -> RateSeq:
    """The sequence obtained by putting base (default 1/n) in place of eps."""
    base = monomial(1, -1) if base is None else base
    if eventual_sign(base) != 1 or not converges(base) or standard_part_seq(base) != 0:
        raise PreconditionError(f"base must be a positive null sequence, got {describe(base)}")
    out = ZERO
    for exponent, coeff in a.terms:
        term = extend(Power(exponent), base) if exponent else ONE
        out = termwise_add(out, scale(term, coeff))
    return out
