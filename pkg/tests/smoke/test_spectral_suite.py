# tests/smoke/test_spectral_suite.py
from fractions import Fraction

import numpy as np
import pytest

from infinikit.dixmier import dixmier_estimate, gamma, scale_check, tower_sequence
from infinikit.eigen import eigh_sym
from infinikit.hyperseq import monomial
from infinikit.opcalc import (
    OperatorTrunc,
    SpectralSequence,
    conjugate,
    diag_embed,
    random_orthogonal,
    spectrum_desc,
    symmetrise,
)

pytestmark = pytest.mark.acceptance

CAP = 2**20


def test_spectrum_is_retrieved_after_conjugation(rng):
    for trial in range(200):
        dim = int(rng.integers(1, 65))
        diagonal = rng.uniform(-1.0, 1.0, size=dim)
        moved = conjugate(diag_embed(diagonal), random_orthogonal(dim, trial))
        recovered = spectrum_desc(moved).values
        expected = np.sort(np.abs(diagonal))[::-1]
        assert np.max(np.abs(recovered - expected)) <= 1e-8, (trial, dim)


def test_symmetrise_is_positive_semidefinite(rng):
    for _ in range(20):
        dim = int(rng.integers(2, 20))
        t = OperatorTrunc(rng.standard_normal((dim, dim)))
        m = symmetrise(t)
        assert m.is_symmetric()
        w, _ = eigh_sym(m.entries, with_vectors=False)
        assert w.min() >= -1e-10 * np.linalg.norm(t.entries)


def test_symmetrise_of_orthogonal_is_identity():
    q = random_orthogonal(6, 3)
    assert np.allclose(symmetrise(q).entries, np.eye(6), atol=1e-12)


def _block_slope(values: np.ndarray, lo: int, hi: int) -> float:
    """Growth of sigma_N per unit of ln N over (2^lo, 2^hi], summed directly."""
    return float(np.sum(values[2**lo : 2**hi]) / ((hi - lo) * np.log(2.0)))


def test_dixmier_targets():
    harmonic = SpectralSequence([], monomial(1, -1))
    est = dixmier_estimate(harmonic, CAP)
    assert est.measurable and est.value == pytest.approx(1.0, rel=0.05)
    assert gamma(harmonic, 10**6) == pytest.approx(1.0418, abs=0.002)
    for c in ("1/2", 2, 5):
        scaled = dixmier_estimate(SpectralSequence([], monomial(c, -1)), CAP)
        assert scaled.value == pytest.approx(float(Fraction(c)), rel=0.05)
    square = dixmier_estimate(SpectralSequence([], monomial(1, -2)), CAP)
    assert square.measurable and abs(square.value) < 0.02


def test_tower_matches_block_oracle():
    tower = tower_sequence(2 * CAP)
    est = dixmier_estimate(tower, CAP)
    oracle = abs(_block_slope(tower.values, 12, 16) - _block_slope(tower.values, 16, 20))
    assert not est.measurable
    assert est.spread > 0.2
    assert abs(est.spread - oracle) < 0.1


def test_scale_discrepancy_separates_tower_from_harmonic():
    harmonic = scale_check(SpectralSequence([], monomial(1, -1)), 2, CAP)
    tower = scale_check(tower_sequence(2 * CAP), 2, CAP)
    assert harmonic.window_max < 0.01 and harmonic.final <= 0.05
    assert tower.window_max > 0.02 or tower.window_max > 5 * harmonic.window_max
