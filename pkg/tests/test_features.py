import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from trackkit.features import FeatureError, accumulate, cosine_distance, is_unit, normalize


def unit_vectors(dim=8):
    return arrays(
        np.float64, dim, elements=st.floats(-1.0, 1.0, allow_nan=False)
    ).filter(lambda v: np.linalg.norm(v) > 1e-3).map(lambda v: v / np.linalg.norm(v))


class TestNormalize:
    def test_hand_value(self):
        np.testing.assert_allclose(normalize(np.array([3.0, 4.0])), [0.6, 0.8], atol=1e-12)

    def test_unit_vector_unchanged(self):
        e = np.array([0.0, 1.0, 0.0])
        np.testing.assert_allclose(normalize(e), e, atol=1e-15)

    def test_zero_vector_rejected(self):
        with pytest.raises(FeatureError):
            normalize(np.zeros(4))

    @given(unit_vectors())
    def test_output_is_unit(self, v):
        assert is_unit(normalize(v * 7.3))


class TestCosineDistance:
    def test_identical(self):
        f = normalize(np.array([1.0, 2.0, 3.0]))
        assert cosine_distance(f, f) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal(self):
        assert cosine_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0

    def test_antipodal(self):
        f = np.array([1.0, 0.0])
        assert cosine_distance(f, -f) == 2.0

    def test_dim_mismatch(self):
        with pytest.raises(FeatureError):
            cosine_distance(np.ones(3) / np.sqrt(3), np.ones(4) / 2)

    @given(unit_vectors(), unit_vectors())
    def test_symmetric_and_bounded(self, f, g):
        d = cosine_distance(f, g)
        assert -1e-9 <= d <= 2 + 1e-9
        assert d == cosine_distance(g, f)


class TestAccumulate:
    def test_beta_boundaries(self):
        f_track = normalize(np.array([1.0, 1.0]))
        f_new = np.array([0.0, 1.0])
        np.testing.assert_allclose(accumulate(f_track, f_new, 0.0), f_track, atol=1e-12)
        np.testing.assert_allclose(accumulate(f_track, f_new, 1.0), f_new, atol=1e-12)

    def test_hand_value(self):
        out = accumulate(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.4)
        np.testing.assert_allclose(out, [0.832050, 0.554700], atol=1e-6)

    def test_antipodal_half_rejected(self):
        f = np.array([1.0, 0.0])
        with pytest.raises(FeatureError):
            accumulate(f, -f, 0.5)

    def test_beta_out_of_range(self):
        f = np.array([1.0, 0.0])
        with pytest.raises(ValueError):
            accumulate(f, f, 1.5)

    @given(unit_vectors(), unit_vectors(), st.floats(0.0, 1.0))
    def test_output_unit_norm(self, f, g, beta):
        try:
            out = accumulate(f, g, beta)
        except FeatureError:
            return  # near-antipodal blend, legitimately rejected
        assert is_unit(out)

    @given(unit_vectors(), st.floats(0.0, 1.0))
    def test_identical_inputs_fixed_point(self, f, beta):
        np.testing.assert_allclose(accumulate(f, f, beta), f, atol=1e-9)
