"""
Norm evaluator tests - worked examples for every exact and approximate norm
"""
import math

import numpy as np
import pytest

import analytic
import norms
from models import WeightedD1Spec

SQRT2 = math.sqrt(2.0)


class TestSortedAbsProfile:
    """Shared sorted-prefix kernel"""

    def test_mixed_signs(self):
        profile = norms.sorted_abs_profile([3, -1, 2])
        assert profile.ordered.tolist() == [3.0, 2.0, 1.0]
        assert profile.prefix.tolist() == [3.0, 5.0, 6.0]

    def test_zero_vector(self):
        profile = norms.sorted_abs_profile([0, 0])
        assert profile.ordered.tolist() == [0.0, 0.0]
        assert profile.prefix.tolist() == [0.0, 0.0]

    def test_single_component(self):
        profile = norms.sorted_abs_profile([5])
        assert profile.ordered.tolist() == [5.0]
        assert profile.prefix.tolist() == [5.0]

    def test_input_not_modified(self):
        x = np.array([3.0, -1.0, 2.0])
        norms.sorted_abs_profile(x)
        assert x.tolist() == [3.0, -1.0, 2.0]

    def test_profile_is_read_only(self):
        profile = norms.sorted_abs_profile([1.0, 2.0])
        with pytest.raises(ValueError):
            profile.prefix[0] = 9.0

    @pytest.mark.parametrize("bad", [[], [1.0, float("nan")], [float("inf")], 3.0])
    def test_invalid_vectors_rejected(self, bad):
        with pytest.raises(ValueError):
            norms.sorted_abs_profile(bad)


class TestMinkowski:

    def test_euclidean(self):
        assert norms.lp_norm([3, 4], 2) == pytest.approx(5.0)
        assert norms.d2([3, 4]) == 5.0

    def test_city_block(self):
        assert norms.lp_norm([3, 4], 1) == 7.0
        assert norms.d1([3, -4]) == 7.0

    def test_chessboard(self):
        assert norms.dinf([3, -4]) == 4.0
        assert norms.lp_norm([3, -4], math.inf) == 4.0

    def test_general_p(self):
        assert norms.lp_norm([1, 1], 3) == pytest.approx(2 ** (1 / 3))

    def test_large_p_approaches_dinf(self):
        assert norms.lp_norm([3, -4, 1], 200) == pytest.approx(4.0, rel=1e-2)

    def test_zero_vector_general_p(self):
        assert norms.lp_norm([0.0, 0.0], 3) == 0.0

    @pytest.mark.parametrize("p", [0.5, 0, -1])
    def test_p_below_one_rejected(self, p):
        with pytest.raises(ValueError):
            norms.lp_norm([3, 4], p)

    def test_batched_evaluation(self):
        batch = np.array([[3.0, 4.0], [6.0, 8.0]])
        assert norms.d2(batch).tolist() == [5.0, 10.0]


class TestTCost:

    def test_sum_of_largest(self):
        assert norms.tcost_norm([3, -1, 2], 2) == 5.0

    def test_t1_is_chessboard(self):
        assert norms.tcost_norm([3, -1, 2], 1) == 3.0

    def test_tn_is_city_block(self):
        assert norms.tcost_norm([3, -1, 2], 3) == 6.0

    @pytest.mark.parametrize("t", [0, 4, -1])
    def test_t_out_of_range(self, t):
        with pytest.raises(ValueError):
            norms.tcost_norm([3, -1, 2], t)

    def test_non_integer_t_rejected(self):
        with pytest.raises(ValueError):
            norms.tcost_norm([3, -1, 2], 1.5)


class TestMukherjee:

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_axis_vector(self, n):
        e1 = np.zeros(n)
        e1[0] = 1.0
        assert norms.mukherjee_norm(e1) == 1.0

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_exact_on_diagonal(self, n):
        x = np.ones(n) / math.sqrt(n)
        assert norms.mukherjee_norm(x) == pytest.approx(1.0, abs=1e-14)

    def test_minimum_on_circle_matches_closed_form(self):
        theta = np.linspace(0.0, math.pi / 2, 200_001)
        points = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        minimum = float(np.min(norms.mukherjee_norm(points)))
        assert minimum == pytest.approx(0.9238795, abs=1e-6)
        assert 1.0 - minimum == pytest.approx(0.0761, abs=5e-5)

    def test_mixed_vector(self):
        assert norms.mukherjee_norm([3, -1, 2]) == pytest.approx(5 / SQRT2, rel=1e-15)

    def test_equals_weighted_tcost_with_inverse_sqrt(self):
        x = np.array([0.3, -2.0, 1.1, 0.7])
        w = 1.0 / np.sqrt(np.arange(1, 5))
        assert norms.mukherjee_norm(x) == norms.weighted_tcost_norm(x, w)

    def test_constant_table_is_immutable(self):
        table = norms.inverse_sqrt_table(4)
        with pytest.raises(ValueError):
            table[0] = 2.0


class TestWeightedTCost:

    def test_leading_weight_gives_dinf(self):
        x = [3, -1, 2]
        assert norms.weighted_tcost_norm(x, [1, 0, 0]) == norms.dinf(x)

    def test_trailing_weight_gives_d1(self):
        x = [3, -1, 2]
        assert norms.weighted_tcost_norm(x, [0, 0, 1]) == norms.d1(x)

    def test_inverse_sqrt_weights(self):
        w = [1.0, 1 / SQRT2, 1 / math.sqrt(3)]
        assert norms.weighted_tcost_norm([3, -1, 2], w) == pytest.approx(3.5355339059, rel=1e-10)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            norms.weighted_tcost_norm([3, -1, 2], [1, 1])

    def test_negative_weight(self):
        with pytest.raises(ValueError):
            norms.weighted_tcost_norm([3, -1, 2], [1, -0.5, 1])


class TestBarni:

    def setup_method(self):
        self.optimal = analytic.barni_optimal(2)
        self.spec = self.optimal.spec

    def test_axis_underestimate(self):
        assert norms.barni_norm([1.0, 0.0], self.spec) == pytest.approx(0.960434, abs=1e-6)

    def test_diagonal_is_exact_up_to_delta(self):
        value = norms.barni_norm(np.array([1.0, 1.0]) / SQRT2, self.spec)
        assert value == pytest.approx(self.optimal.delta_star, rel=1e-12)

    def test_peak_overestimate_equals_underestimate(self):
        # maximum on the sphere is attained at x proportional to alpha*
        x = self.optimal.alpha / np.linalg.norm(self.optimal.alpha)
        value = norms.barni_norm(x, self.spec)
        assert value == pytest.approx(1.0396, abs=1e-4)
        assert value - 1.0 == pytest.approx(1.0 - self.optimal.delta_star, abs=1e-12)

    def test_all_ones_is_d1(self):
        x = [3.0, -1.0, 2.0]
        assert norms.barni_norm(x, WeightedD1Spec(weights=[1, 1, 1])) == norms.d1(x)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            norms.barni_norm([1.0, 2.0, 3.0], self.spec)

    def test_norm_property_flag(self):
        assert self.spec.is_norm
        assert not WeightedD1Spec(weights=[1, 2]).is_norm
        assert not WeightedD1Spec(weights=[1, 0]).is_norm

    def test_negative_spec_weight_rejected(self):
        with pytest.raises(ValueError):
            WeightedD1Spec(weights=[1.0, -0.1])


class TestSeolCheun:

    def test_direct_evaluation(self):
        assert norms.seol_cheun_norm([3, 4], 0.9, 0.3) == pytest.approx(5.7)

    def test_degenerate_limits(self):
        x = [3.0, -1.0, 2.0]
        assert norms.seol_cheun_norm(x, 1.0, 1e-300) == pytest.approx(norms.dinf(x))
        assert norms.seol_cheun_norm(x, 1e-300, 1.0) == pytest.approx(norms.d1(x))

    def test_weighted_d1_form(self):
        x = np.array([0.4, -3.0, 1.2, 2.2])
        spec = norms.seol_cheun_spec(4, 0.9, 0.3)
        assert spec.weights.tolist() == pytest.approx([1.2, 0.3, 0.3, 0.3])
        assert norms.weighted_d1_norm(x, spec) == pytest.approx(
            norms.seol_cheun_norm(x, 0.9, 0.3), rel=1e-12
        )

    @pytest.mark.parametrize("a,b", [(0, 1), (1, 0), (-1, 1), (1, -0.2)])
    def test_non_positive_parameters_rejected(self, a, b):
        with pytest.raises(ValueError):
            norms.seol_cheun_norm([3, 4], a, b)

    def test_squared_form(self):
        assert norms.seol_cheun_squared([3, 4], 0.9, 0.3) == pytest.approx(5.7 ** 2)


class TestNormalizedMukherjee:

    def test_unit_delta_is_identity(self):
        x = [0.3, -1.2, 2.0]
        assert norms.normalized_mukherjee_norm(x, 1.0) == norms.mukherjee_norm(x)

    def test_axis_with_delta_star(self):
        delta_star = analytic.barni_optimal(2).delta_star
        assert norms.normalized_mukherjee_norm([1.0, 0.0], delta_star) == pytest.approx(1.041197, abs=1e-6)

    def test_diagonal_with_delta_star(self):
        delta_star = analytic.barni_optimal(2).delta_star
        value = norms.normalized_mukherjee_norm(np.array([1.0, 1.0]) / SQRT2, delta_star)
        assert value == pytest.approx(1.041197, abs=1e-6)

    @pytest.mark.parametrize("delta", [0.0, -0.5, 1.5])
    def test_delta_out_of_range(self, delta):
        with pytest.raises(ValueError):
            norms.normalized_mukherjee_norm([1.0, 0.0], delta)


class TestRosenfeldPfaltz:

    def test_zero(self):
        assert norms.rosenfeld_pfaltz_2d([0, 0]) == 0.0

    def test_three_four(self):
        assert norms.rosenfeld_pfaltz_2d([3, 4]) == 5.0

    def test_axis(self):
        assert norms.rosenfeld_pfaltz_2d([1, 0]) == 1.0

    def test_real_input_floored_literally(self):
        # floor(2 * 2.5 / 3) = 1 < D_inf = 1.5
        assert norms.rosenfeld_pfaltz_2d([1.5, 0.0]) == 1.5

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            norms.rosenfeld_pfaltz_2d([1, 2, 3])


class TestZeroVector:

    @pytest.mark.parametrize("name,params", [
        ("d1", {}), ("d2", {}), ("dinf", {}), ("lp", {"p": 3}), ("tcost", {"t": 2}),
        ("mukherjee", {}), ("barni", {}), ("seol_cheun", {"a": 0.9, "b": 0.3}),
        ("normalized_mukherjee", {}), ("weighted_tcost", {"w": [1.0, 0.5, 0.2]}),
    ])
    def test_all_norms_vanish_at_zero(self, name, params):
        assert norms.make_norm(name, 3, **params)(np.zeros(3)) == 0.0


class TestRegistry:

    def test_unknown_name(self):
        with pytest.raises(norms.UnknownNormError):
            norms.make_norm("octagonal", 3)

    def test_missing_parameter(self):
        with pytest.raises(ValueError):
            norms.make_norm("tcost", 3)

    def test_hyphenated_names(self):
        evaluator = norms.make_norm("seol-cheun", 2, a=0.9, b=0.3)
        assert evaluator([3, 4]) == pytest.approx(5.7)

    def test_normalized_mukherjee_defaults_to_delta_star(self):
        evaluator = norms.make_norm("normalized_mukherjee", 2)
        assert evaluator([1.0, 0.0]) == pytest.approx(1 / 0.960434, rel=1e-6)

    def test_rosenfeld_pfaltz_requires_two_dims(self):
        with pytest.raises(ValueError):
            norms.make_norm("rosenfeld_pfaltz", 3)

    def test_every_name_builds(self):
        params = {
            "lp": {"p": 3}, "tcost": {"t": 1}, "weighted_tcost": {"w": [1.0, 0.7]},
            "seol_cheun": {"a": 0.9, "b": 0.3}, "seol_cheun_sq": {"a": 0.9, "b": 0.3},
        }
        for name in norms.NORM_NAMES:
            value = norms.make_norm(name, 2, **params.get(name, {}))([3.0, 4.0])
            assert value > 0

    @pytest.mark.parametrize("name", ["seol_cheun", "seol_cheun_sq"])
    @pytest.mark.parametrize("a, b", [(0.0, 0.3), (0.9, -0.3), (-1.0, 1.0)])
    def test_seol_cheun_parameters_checked_at_build(self, name, a, b):
        with pytest.raises(ValueError, match="must be positive"):
            norms.make_norm(name, 3, a=a, b=b)
