"""Mixture validation, density evaluation and model serialization."""

import numpy as np
import pytest

from gmmot import (
    Gaussian,
    InvalidModel,
    ParseError,
    SingularDensity,
    density_at,
    load_model,
    read_model,
    validate_mixture,
    write_model,
)

from conftest import random_mixture


def gauss1d(mean, var):
    return Gaussian([mean], [[var]])


class TestValidate:
    def test_two_component_mixture(self):
        mix = validate_mixture([0.5, 0.5], [gauss1d(0, 1), gauss1d(1, 2)])
        assert mix.size == 2
        assert mix.dim == 1
        np.testing.assert_allclose(mix.weights.sum(), 1.0)

    def test_single_component(self):
        mix = validate_mixture([1.0], [gauss1d(0, 1)])
        assert mix.size == 1

    def test_zero_weight_component_dropped(self):
        mix = validate_mixture(
            [0.5, 0.5, 0.0], [gauss1d(0, 1), gauss1d(1, 1), gauss1d(9, 1)]
        )
        assert mix.size == 2
        assert mix.components[1].mean[0] == 1.0

    def test_order_preserved(self):
        mix = validate_mixture([0.3, 0.7], [gauss1d(5, 1), gauss1d(-5, 1)])
        assert mix.components[0].mean[0] == 5.0

    def test_negative_weight_rejected(self):
        with pytest.raises(InvalidModel):
            validate_mixture([1.2, -0.2], [gauss1d(0, 1), gauss1d(1, 1)])

    def test_bad_weight_sum_rejected(self):
        with pytest.raises(InvalidModel):
            validate_mixture([0.6, 0.6], [gauss1d(0, 1), gauss1d(1, 1)])

    def test_small_weight_drift_renormalized(self):
        mix = validate_mixture([0.5 + 1e-8, 0.5], [gauss1d(0, 1), gauss1d(1, 1)])
        assert mix.weights.sum() == pytest.approx(1.0, abs=1e-15)

    def test_identical_components_not_merged(self):
        g = gauss1d(0, 1)
        mix = validate_mixture([0.5, 0.5], [g, g])
        assert mix.size == 2


class TestDensity:
    def test_standard_normal_peak(self):
        mix = validate_mixture([1.0], [gauss1d(0, 1)])
        assert density_at(mix, [0.0]) == pytest.approx(1 / np.sqrt(2 * np.pi))

    def test_duplicate_components_match_single(self):
        single = validate_mixture([1.0], [gauss1d(0, 1)])
        double = validate_mixture([0.5, 0.5], [gauss1d(0, 1), gauss1d(0, 1)])
        xs = np.linspace(-3, 3, 21)[:, None]
        np.testing.assert_allclose(density_at(double, xs), density_at(single, xs))

    def test_split_pair_at_origin(self):
        mix = validate_mixture([0.5, 0.5], [gauss1d(-1, 1), gauss1d(1, 1)])
        expected = np.exp(-0.5) / np.sqrt(2 * np.pi)
        assert density_at(mix, [0.0]) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.241971, abs=1e-6)

    def test_integrates_to_one(self):
        rng = np.random.default_rng(2)
        mix = random_mixture(rng, 1)
        stds = [np.sqrt(c.cov[0, 0]) for c in mix.components]
        means = [c.mean[0] for c in mix.components]
        lo = min(means) - 8 * max(stds)
        hi = max(means) + 8 * max(stds)
        xs = np.linspace(lo, hi, 20001)
        total = np.trapezoid(density_at(mix, xs[:, None]), xs)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_2d_density(self):
        mix = validate_mixture([1.0], [Gaussian([0.0, 0.0], np.eye(2))])
        assert density_at(mix, [0.0, 0.0]) == pytest.approx(1 / (2 * np.pi))

    def test_singular_component_rejected(self):
        mix = validate_mixture([1.0], [gauss1d(0, 0.0)])
        with pytest.raises(SingularDensity):
            density_at(mix, [0.0])


class TestSerialization:
    def test_canonical_document(self):
        doc = b"""
        {"dim": 1, "weights": [0.5, 0.5],
         "components": [{"mean": [0.5], "cov": [[0.01]]},
                        {"mean": [0.1], "cov": [[0.05]]}]}
        """
        mix = read_model(doc)
        assert mix.size == 2
        assert mix.components[0].mean[0] == 0.5
        assert mix.components[1].cov[0, 0] == 0.05

    def test_missing_weights_field(self):
        with pytest.raises(ParseError):
            read_model(b'{"dim": 1, "components": []}')

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            read_model(b"{not json")

    def test_asymmetric_cov_rejected(self):
        doc = (
            '{"dim": 2, "weights": [1.0], "components": '
            '[{"mean": [0, 0], "cov": [[1.0, 0.5], [0.1, 1.0]]}]}'
        )
        with pytest.raises(ParseError) as err:
            read_model(doc)
        assert "cov" in err.value.location

    def test_tiny_asymmetry_symmetrized(self):
        doc = (
            '{"dim": 2, "weights": [1.0], "components": '
            '[{"mean": [0, 0], "cov": [[1.0, 0.5], [0.5000000001, 1.0]]}]}'
        )
        mix = read_model(doc)
        assert np.array_equal(mix.components[0].cov, mix.components[0].cov.T)

    def test_round_trip_identity(self):
        rng = np.random.default_rng(6)
        for n in (1, 2, 3):
            mix = random_mixture(rng, n)
            back = read_model(write_model(mix))
            np.testing.assert_array_equal(back.weights, mix.weights)
            for a, b in zip(back.components, mix.components):
                np.testing.assert_array_equal(a.mean, b.mean)
                np.testing.assert_array_equal(a.cov, b.cov)

    def test_fixture_round_trip(self, fixtures_dir, tmp_path):
        mix = load_model(fixtures_dir / "one_dim" / "mixture_a.json")
        np.testing.assert_array_equal(mix.weights, [0.5, 0.5])
        assert [c.mean[0] for c in mix.components] == [0.5, 0.1]
        assert [c.cov[0, 0] for c in mix.components] == [0.01, 0.05]
        back = read_model(write_model(mix))
        for a, b in zip(back.components, mix.components):
            np.testing.assert_array_equal(a.mean, b.mean)
            np.testing.assert_array_equal(a.cov, b.cov)

    def test_dim_weights_mismatch(self):
        doc = (
            '{"dim": 1, "weights": [0.5, 0.5], "components": '
            '[{"mean": [0.0], "cov": [[1.0]]}]}'
        )
        with pytest.raises(ParseError):
            read_model(doc)

    def test_non_psd_cov_rejected(self):
        doc = (
            '{"dim": 2, "weights": [1.0], "components": '
            '[{"mean": [0, 0], "cov": [[1.0, 2.0], [2.0, 1.0]]}]}'
        )
        with pytest.raises(ParseError):
            read_model(doc)
