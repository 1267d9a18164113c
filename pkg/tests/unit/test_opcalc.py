# tests/unit/test_opcalc.py
import math

import numpy as np
import pytest

from infinikit.errors import (
    BadInputError,
    DimensionMismatchError,
    NonOrthogonalError,
    NoTailError,
    PreconditionError,
)
from infinikit.hyperseq import LN, N, monomial
from infinikit.opcalc import (
    OperatorTrunc,
    SpectralSequence,
    conjugate,
    diag_embed,
    format_spectrum,
    is_compact_model,
    ladder_commutator,
    orthogonality_defect,
    parse_matrix,
    pointwise_sum,
    random_orthogonal,
    rotation,
    singular_values,
    spectrum_desc,
    symmetrise,
)

HARMONIC = [1.0, 0.5, 1 / 3, 0.25]


def test_diagonal_spectrum_is_sorted_descending():
    s = spectrum_desc(diag_embed([0.25, 1.0, 0.5]))
    assert s.values.tolist() == [1.0, 0.5, 0.25]


def test_conjugation_preserves_spectrum(base_seed):
    t = diag_embed(HARMONIC)
    q = random_orthogonal(4, base_seed)
    moved = conjugate(t, q)
    assert not np.allclose(moved.entries, t.entries)
    assert np.allclose(spectrum_desc(moved).values, HARMONIC, atol=1e-12)


def test_rotation_example():
    t = diag_embed([2.0, 1.0])
    moved = conjugate(t, rotation(math.pi / 4))
    assert np.allclose(moved.entries, [[1.5, -0.5], [-0.5, 1.5]])
    assert np.allclose(spectrum_desc(moved).values, [2.0, 1.0])


def test_random_orthogonal_is_deterministic_rotation():
    q1, q2 = random_orthogonal(5, 11), random_orthogonal(5, 11)
    assert np.array_equal(q1.entries, q2.entries)
    assert orthogonality_defect(q1) < 1e-13
    assert np.linalg.det(q1.entries) == pytest.approx(1.0)


def test_conjugate_checks_inputs():
    with pytest.raises(NonOrthogonalError):
        conjugate(diag_embed([1.0, 2.0]), OperatorTrunc(np.array([[1.0, 1.0], [0.0, 1.0]])))
    with pytest.raises(DimensionMismatchError):
        conjugate(diag_embed([1.0, 2.0]), random_orthogonal(3, 1))


def test_nonsymmetric_truncation_gives_singular_values(rng):
    g = rng.standard_normal((6, 6))
    expected = np.linalg.svd(g, compute_uv=False)
    assert np.allclose(singular_values(OperatorTrunc(g)), expected, atol=1e-10)


def test_symmetrise_negative_diagonal():
    m = symmetrise(diag_embed([-3.0, 2.0]))
    assert np.allclose(m.entries, np.diag([3.0, 2.0]))
    assert m.is_symmetric()


def test_operator_truncation_validation():
    with pytest.raises(BadInputError):
        OperatorTrunc(np.ones((2, 3)))
    with pytest.raises(BadInputError):
        OperatorTrunc(np.array([[np.inf]]))
    with pytest.raises(BadInputError):
        diag_embed([])
    t = diag_embed([1.0])
    with pytest.raises(ValueError):
        t.entries[0, 0] = 2.0


def test_spectral_sequence_tail_extends_terms():
    s = SpectralSequence(HARMONIC, monomial(1, -1))
    assert np.allclose(s.terms(1, 6), [1, 0.5, 1 / 3, 0.25, 0.2, 1 / 6])
    assert s.describe_tail() == "1*n^-1"
    with pytest.raises(NoTailError):
        SpectralSequence(HARMONIC).terms(1, 5)


def test_spectral_sequence_validation():
    with pytest.raises(PreconditionError):
        SpectralSequence([0.5, 1.0])
    with pytest.raises(PreconditionError):
        SpectralSequence([1.0], monomial(-1, -1))
    with pytest.raises(PreconditionError):
        SpectralSequence(HARMONIC).scale(-1)


def test_scale_and_pointwise_sum():
    s = SpectralSequence(HARMONIC, monomial(1, -1))
    doubled = s.scale(2)
    assert np.allclose(doubled.terms(1, 5), [2, 1, 2 / 3, 0.5, 0.4])
    total = pointwise_sum(s, s)
    assert np.allclose(total.terms(1, 5), doubled.terms(1, 5))


def test_compactness_reads_the_tail():
    assert is_compact_model(SpectralSequence(HARMONIC, monomial(1, -1)))
    assert not is_compact_model(SpectralSequence([], LN))
    assert not is_compact_model(SpectralSequence([], N))
    with pytest.raises(NoTailError):
        is_compact_model(SpectralSequence(HARMONIC))


@pytest.mark.parametrize("dim", [2, 4, 9])
def test_ladder_commutator_fails_only_in_the_corner(dim):
    report = ladder_commutator(dim)
    expected = np.ones(dim)
    expected[-1] = -(dim - 1)
    assert np.allclose(np.diag(report.imag), expected)
    assert np.allclose(report.imag - np.diag(np.diag(report.imag)), 0.0)
    assert abs(report.trace) < 1e-12
    assert report.deviation == pytest.approx(dim)


def test_ladder_needs_two_dimensions():
    with pytest.raises(PreconditionError):
        ladder_commutator(1)


def test_parse_matrix_forms():
    text = "# diag\n1, 0\n0 2  # second row\n"
    assert np.array_equal(parse_matrix(text).entries, np.diag([1.0, 2.0]))
    doc = '{"dim": 2, "entries": [[0, 1], [1, 0]]}'
    assert parse_matrix(doc).dim == 2
    with pytest.raises(BadInputError):
        parse_matrix("1 2\n3")
    with pytest.raises(BadInputError):
        parse_matrix('{"dim": 3, "entries": [[1]]}')


def test_format_spectrum():
    s = SpectralSequence([1.0, 0.5], monomial(1, -2))
    assert format_spectrum(s) == "1\n0.5\n# tail: 1*n^-2"
