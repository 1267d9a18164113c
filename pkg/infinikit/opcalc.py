# infinikit/opcalc.py
"""Finite truncations of the noncommutative picture.

A sequence becomes a diagonal operator, orthogonal conjugation moves it
around, and symmetrisation followed by the spectrum gets the sequence back
(in decreasing order).
"""

from __future__ import annotations

import json
import math
import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from infinikit import config
from infinikit.eigen import eigh_sym
from infinikit.errors import (
    BadInputError,
    DimensionMismatchError,
    NoLimitError,
    NonOrthogonalError,
    NoTailError,
    PreconditionError,
)
from infinikit.hyperseq import (
    RateSeq,
    describe,
    eventual_sign,
    scale as scale_seq,
    standard_part_seq,
    termwise_add,
)

ORTHO_TOL = 1e-12
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorTrunc:
    """N x N real truncation of an operator. `label` records where it came from."""

    entries: np.ndarray
    label: str = "user"

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=np.float64, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise BadInputError(f"operator truncation must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise BadInputError("operator truncation needs dim >= 1")
        if m.shape[0] > config.DIM_CAP:
            raise BadInputError(f"dim {m.shape[0]} exceeds the cap {config.DIM_CAP}")
        if not np.all(np.isfinite(m)):
            raise BadInputError("operator truncation has NaN or inf entries")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.entries))))
        return bool(np.max(np.abs(self.entries - self.entries.T)) <= tol * scale)


@dataclass(frozen=True, eq=False)
class SpectralSequence:
    """mu_1 >= mu_2 >= ... >= 0, optionally continued by a symbolic tail."""

    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    tail: RateSeq | None = None

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if v.size and (np.any(v < 0) or np.any(np.diff(v) > 0)):
            raise PreconditionError("spectral values must be nonnegative and nonincreasing")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.tail is not None and eventual_sign(self.tail) not in (0, 1):
            raise PreconditionError(f"tail must be eventually nonnegative: {describe(self.tail)}")

    def __len__(self) -> int:
        return int(self.values.size)

    def terms(self, start: int, stop: int) -> np.ndarray:
        """mu_start..mu_stop (1-based, inclusive); the tail covers indices past the truncation."""
        if stop < start:
            return np.zeros(0)
        known = self.values[start - 1 : min(stop, len(self))]
        if stop <= len(self):
            return known
        if self.tail is None:
            raise NoTailError(
                f"index {stop} is past the truncation ({len(self)}) and there is no tail"
            )
        rest = self.tail.sample_array(max(start, len(self) + 1), stop)
        return np.concatenate([known, rest])

    def scale(self, k: float | Fraction) -> SpectralSequence:
        if k < 0:
            raise PreconditionError("spectral sequences scale by nonnegative factors only")
        tail = scale_seq(self.tail, k) if self.tail is not None else None
        return SpectralSequence(self.values * float(k), tail)

    def describe_tail(self) -> str:
        return describe(self.tail) if self.tail is not None else "none"


def pointwise_sum(s1: SpectralSequence, s2: SpectralSequence) -> SpectralSequence:
    """Termwise sum of two sorted sequences (the proxy for the spectrum of a sum)."""
    n = max(len(s1), len(s2))
    values = s1.terms(1, n) + s2.terms(1, n) if n else np.zeros(0)
    tail = None
    if s1.tail is not None and s2.tail is not None:
        tail = termwise_add(s1.tail, s2.tail)
    return SpectralSequence(values, tail)


def _check_dims(a: OperatorTrunc, b: OperatorTrunc) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")


# --- Operations ----------------------------------------------------------------------
def diag_embed(prefix: Sequence[float] | np.ndarray) -> OperatorTrunc:
    """diag(u_1, ..., u_N)."""
    values = np.asarray([float(x) for x in prefix], dtype=np.float64)
    if values.size == 0:
        raise BadInputError("diag_embed needs a nonempty prefix")
    return OperatorTrunc(np.diag(values), label="diagonal")


def random_orthogonal(dim: int, seed: int) -> OperatorTrunc:
    """Haar-distributed rotation (det +1), deterministic in seed."""
    if dim < 1:
        raise BadInputError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return OperatorTrunc(q, label="orthogonal")


def rotation(theta: float) -> OperatorTrunc:
    c, s = math.cos(theta), math.sin(theta)
    return OperatorTrunc(np.array([[c, -s], [s, c]]), label="orthogonal")


def orthogonality_defect(q: OperatorTrunc) -> float:
    return float(np.max(np.abs(q.entries.T @ q.entries - np.eye(q.dim))))


def conjugate(t: OperatorTrunc, q: OperatorTrunc) -> OperatorTrunc:
    """Q^T T Q."""
    _check_dims(t, q)
    defect = orthogonality_defect(q)
    if defect > ORTHO_TOL * q.dim:
        raise NonOrthogonalError(f"Q^T Q deviates from I by {defect:.3g}")
    return OperatorTrunc(q.entries.T @ t.entries @ q.entries, label="conjugated")


def _abs_eigen(t: OperatorTrunc) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of |T|: |eigenvalues| for symmetric T, else sqrt of those of T^T T."""
    if t.is_symmetric():
        w, v = eigh_sym(t.entries)
        return np.abs(w), v  # type: ignore[return-value]
    w, v = eigh_sym(t.entries.T @ t.entries)
    return np.sqrt(np.clip(w, 0.0, None)), v  # type: ignore[return-value]


def symmetrise(t: OperatorTrunc) -> OperatorTrunc:
    """|T| = (T^T T)^(1/2), symmetric positive semidefinite."""
    mu, v = _abs_eigen(t)
    m = (v * mu) @ v.T
    return OperatorTrunc(0.5 * (m + m.T), label="symmetrised")


def spectrum_desc(t: OperatorTrunc, tail: RateSeq | None = None) -> SpectralSequence:
    """Singular values of T, largest first; ties keep eigensolver order."""
    if t.is_symmetric():
        w, _ = eigh_sym(t.entries, with_vectors=False)
        mu = np.abs(w)
    else:
        w, _ = eigh_sym(t.entries.T @ t.entries, with_vectors=False)
        mu = np.sqrt(np.clip(w, 0.0, None))
    order = np.argsort(-mu, kind="stable")
    values = mu[order]
    assert np.all(values >= 0) and np.all(np.diff(values) <= 0)
    return SpectralSequence(values, tail)


def singular_values(t: OperatorTrunc) -> np.ndarray:
    return spectrum_desc(t).values


def is_compact_model(s: SpectralSequence) -> bool:
    """Compact iff the tail tends to zero; a finite truncation alone says nothing."""
    if s.tail is None:
        raise NoTailError("compactness is a property of the tail; none was given")
    try:
        return standard_part_seq(s.tail) == 0
    except NoLimitError:
        return False


# --- Uncertainty relation in finite dimension ------------------------------------------
@dataclass(frozen=True, eq=False)
class LadderReport:
    """[X, P] = real + i*imag, with its distance from i*hbar*I and its trace."""

    dim: int
    hbar: Fraction
    real: np.ndarray
    imag: np.ndarray
    deviation: float
    trace: complex

    def to_doc(self) -> dict[str, object]:
        return {
            "dim": self.dim,
            "hbar": str(self.hbar),
            "commutator_imag_diagonal": [float(x) for x in np.diag(self.imag)],
            "deviation": self.deviation,
            "trace": [self.trace.real, self.trace.imag],
        }


def ladder_commutator(dim: int, hbar: Fraction | int | str = 1) -> LadderReport:
    """Truncated a, a^dagger; X = sqrt(hbar/2)(a + a^dagger), P = i sqrt(hbar/2)(a^dagger - a)."""
    if dim < 2:
        raise PreconditionError(f"ladder operators need dim >= 2, got {dim}")
    h = Fraction(hbar)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1)
    ad = a.T
    k = math.sqrt(float(h) / 2.0)
    x = k * (a + ad)
    p_imag = k * (ad - a)  # P = i * p_imag
    # [X, P] = i (X p_imag - p_imag X), X and p_imag real
    comm_imag = x @ p_imag - p_imag @ x
    comm_real = np.zeros_like(comm_imag)
    target = float(h) * np.eye(dim)
    deviation = float(np.linalg.norm(comm_imag - target))
    trace = complex(float(np.trace(comm_real)), float(np.trace(comm_imag)))
    return LadderReport(dim, h, comm_real, comm_imag, deviation, trace)


# --- Matrix and spectrum text forms ------------------------------------------------------------
_SPLIT = re.compile(r"[,\s]+")


def parse_matrix(text: str) -> OperatorTrunc:
    """Rows of decimals (comma or whitespace separated, `#` comments) or JSON {dim, entries}."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
            rows = doc["entries"]
            dim = int(doc.get("dim", len(rows)))
        except (ValueError, KeyError, TypeError) as exc:
            raise BadInputError(f"bad matrix document: {exc}") from None
        m = np.asarray(rows, dtype=np.float64)
        if m.shape != (dim, dim):
            raise BadInputError(f"matrix document says dim {dim} but entries have shape {m.shape}")
        return OperatorTrunc(m, label="user")
    rows = []
    for line in stripped.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([float(tok) for tok in _SPLIT.split(line) if tok])
        except ValueError as exc:
            raise BadInputError(f"bad matrix row {line!r}: {exc}") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise BadInputError("matrix text must have N rows of N numbers")
    return OperatorTrunc(np.asarray(rows), label="user")


def format_spectrum(s: SpectralSequence, digits: int = 12) -> str:
    lines = [format(float(v), f".{digits}g") for v in s.values]
    if s.tail is not None:
        lines.append(f"# tail: {describe(s.tail, digits)}")
    return "\n".join(lines)
