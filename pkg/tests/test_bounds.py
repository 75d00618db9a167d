"""Tests for the closed-form guarantee calculators."""

import math

import numpy as np
import pytest

from pursuitlab import (
    ALGORITHMS,
    OutOfRegimeError,
    contraction_breakdown,
    contraction_factor,
    decay_ratio_bounds,
    iteration_estimate,
    pseudoinverse_norm_bound,
    remark3_bound,
    table1_constants,
    table2_constants,
    theorem2_bound,
    theorem3_bound,
)

# small constants per algorithm: leading factor a, level multiplier b, and
# the threshold c below which the contraction factor stays under one
SMALL_CONSTANTS = {
    "cosamp": (1.0, 4, 0.171),
    "sp": (1.26, 3, 0.206),
    "iht": (1.0, 3, 0.353),
}


class TestTable1Constants:
    def test_small_constants(self):
        for algorithm, (a, b, c) in SMALL_CONSTANTS.items():
            consts = table1_constants(algorithm, 0.0)
            assert consts.a == a
            assert consts.b == b
            assert consts.c == c

    def test_zero_delta_rows(self):
        cs = table1_constants("cosamp", 0.0)
        assert (cs.big_c, cs.c1, cs.d) == (0.0, 6.0, 6.0)
        sp_row = table1_constants("sp", 0.0)
        assert sp_row.big_c == 0.0
        assert sp_row.d == pytest.approx(5.0)
        iht_row = table1_constants("iht", 0.0)
        assert (iht_row.big_c, iht_row.c1, iht_row.d) == (0.0, 2.0, 2.0)

    def test_frozen_threshold_values(self):
        cs = table1_constants("cosamp", 0.171)
        np.testing.assert_allclose(cs.big_c, 0.9952840415516538, rtol=1e-13)
        np.testing.assert_allclose(cs.c1, 9.22820378877279, rtol=1e-13)
        np.testing.assert_allclose(cs.d, 1956.8034557235542, rtol=1e-13)
        ih = table1_constants("iht", 0.353)
        np.testing.assert_allclose(ih.big_c, 0.9984347750354051, rtol=1e-13)
        np.testing.assert_allclose(ih.c1, 2.3263705637752556, rtol=1e-13)
        np.testing.assert_allclose(ih.d, 1486.2851132567894, rtol=1e-13)

    def test_contraction_below_one_at_threshold(self):
        for algorithm, (_, _, c) in SMALL_CONSTANTS.items():
            assert table1_constants(algorithm, c).big_c < 1.0

    def test_out_of_regime_raises(self):
        with pytest.raises(OutOfRegimeError):
            table1_constants("cosamp", 0.2)
        with pytest.raises(OutOfRegimeError):
            table1_constants("sp", 0.21)
        with pytest.raises(OutOfRegimeError):
            table1_constants("iht", 0.36)

    def test_unknown_algorithm(self):
        with pytest.raises(ValueError):
            table1_constants("omp", 0.1)
        with pytest.raises(ValueError):
            table1_constants("cosamp", 1.0)


class TestTable2Constants:
    def test_matches_nominal_formulas_at_same_delta(self):
        for algorithm in ALGORITHMS:
            base = table1_constants(algorithm, 0.12)
            tilde = table2_constants(algorithm, 0.12)
            assert tilde.c_tilde == base.big_c
            assert tilde.d_tilde == base.d

    def test_frozen_values(self):
        sp_row = table2_constants("sp", 0.206)
        np.testing.assert_allclose(sp_row.c_tilde, 0.9926199888884222,
                                   rtol=1e-13)
        np.testing.assert_allclose(sp_row.d_tilde, 1307.3553091481733,
                                   rtol=1e-13)
        ih = table2_constants("iht", 0.1)
        np.testing.assert_allclose(ih.c_tilde, 0.28284271247461906,
                                   rtol=1e-13)
        np.testing.assert_allclose(ih.d_tilde, 2.9249060601173444,
                                   rtol=1e-13)


class TestContractionBreakdown:
    def test_closed_form_points(self):
        np.testing.assert_allclose(contraction_breakdown("cosamp"),
                                   3.0 - 2.0 * math.sqrt(2.0), atol=1e-9)
        np.testing.assert_allclose(contraction_breakdown("iht"),
                                   1.0 / math.sqrt(8.0), atol=1e-9)

    def test_brackets_the_unit_contraction(self):
        for algorithm in ALGORITHMS:
            bp = contraction_breakdown(algorithm)
            assert contraction_factor(algorithm, bp - 1e-7) < 1.0
            assert contraction_factor(algorithm, bp + 1e-6) >= 1.0

    def test_tabulated_thresholds_sit_below_breakdown(self):
        for algorithm, (_, _, c) in SMALL_CONSTANTS.items():
            assert c <= contraction_breakdown(algorithm)


class TestTheoremBounds:
    def test_frozen_sparse_example(self):
        value = theorem3_bound(1.0, 1.0, 0.5, 3, 6.0, 0.1, 0.05, 0.05)
        np.testing.assert_allclose(value, 0.754285308902091, rtol=1e-13)

    def test_sparse_noiseless_limit_is_zero(self):
        assert theorem3_bound(1.0, 1.0, 0.5, None, 6.0, 0.0, 0.0, 0.0) == 0.0

    def test_theorem2_reduces_to_theorem3_for_sparse_signals(self):
        t2 = theorem2_bound(1.2, 1.0, 0.4, 5, 0.0, 0.0, 3.0, 0.2, 0.02, 0.03)
        t3 = theorem3_bound(1.2, 1.0, 0.4, 5, 3.0, 0.2, 0.02, 0.03)
        assert t2 == pytest.approx(t3, rel=1e-14)

    def test_limit_form_requires_contraction(self):
        with pytest.raises(OutOfRegimeError):
            theorem2_bound(1.0, 1.0, 1.01, None, 0.01, 0.01, 6.0, 0.1,
                           0.05, 0.05)

    def test_limit_dominates_finite_l_at_the_iteration_estimate(self):
        for c_tilde in (0.2, 0.5, 0.8):
            for drive in (0.02, 0.1, 0.3):
                l = iteration_estimate(c_tilde, 1.0, drive / 2, drive / 2,
                                       0.0)
                finite = theorem2_bound(1.0, 1.0, c_tilde, l, 0.0, 0.0, 4.0,
                                        0.1, drive / 2, drive / 2)
                limit = theorem2_bound(1.0, 1.0, c_tilde, None, 0.0, 0.0,
                                       4.0, 0.1, drive / 2, drive / 2)
                assert finite <= limit + 1e-12

    def test_monotone_in_every_drive_term(self):
        base = dict(kappa_psi=1.0, a=1.0, c_tilde=0.5, l=4, r_k=0.01,
                    s_k=0.02, d_tilde=5.0, delta_k=0.1, eps_y=0.03,
                    eps_a_k=0.04)
        ref = theorem2_bound(**base)
        for key in ("r_k", "s_k", "delta_k", "eps_y", "eps_a_k"):
            bumped = dict(base)
            bumped[key] += 0.01
            assert theorem2_bound(**bumped) >= ref

    def test_nonincreasing_in_iterations_under_contraction(self):
        values = [theorem3_bound(1.0, 1.0, 0.6, l, 4.0, 0.1, 0.02, 0.02)
                  for l in range(1, 8)]
        assert all(x >= y for x, y in zip(values, values[1:]))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            theorem3_bound(0.5, 1.0, 0.5, 3, 6.0, 0.1, 0.05, 0.05)
        with pytest.raises(ValueError):
            theorem3_bound(1.0, 1.0, 0.5, 3, 6.0, 1.0, 0.05, 0.05)


class TestIterationEstimate:
    def test_frozen_examples(self):
        assert iteration_estimate(0.5, 1.0, 0.0625, 0.0625, 0.0) == 3
        assert iteration_estimate(0.5, 1.0, 0.05, 0.05, 0.0) == 4
        assert iteration_estimate(0.9, 1.26, 0.025, 0.025, 0.0) == 31

    def test_already_converged_regime(self):
        assert iteration_estimate(0.5, 1.0, 0.9, 0.3, 0.0) == 0

    def test_exact_contraction_needs_one_step(self):
        assert iteration_estimate(0.0, 1.0, 0.05, 0.0, 0.0) == 1

    def test_out_of_regime(self):
        with pytest.raises(OutOfRegimeError):
            iteration_estimate(1.0, 1.0, 0.05, 0.0, 0.0)
        with pytest.raises(OutOfRegimeError):
            iteration_estimate(0.5, 1.0, 0.0, 0.0, 0.0)


class TestRemark3Bound:
    def test_zero_inputs_give_zero(self):
        assert remark3_bound(1.0, 1.0, 0.0, 1, 0.0, 0.0, 6.0, 0.0, 0.0,
                             0.0) == 0.0

    def test_frozen_example(self):
        value = remark3_bound(1.0, 1.0, 0.5, 2, 0.0, 0.0, 6.0, 0.0, 0.1, 0.0)
        np.testing.assert_allclose(value, 0.85, rtol=1e-14)

    def test_perturbation_enters_the_tail_weight(self):
        """The perturbed-measurement form weights the tail terms by the matrix
        perturbation as well, so it dominates the mismatch form whenever the
        signal has a tail."""
        args = dict(kappa_psi=1.0, a=1.0, l=3, r_k=0.05, s_k=0.05,
                    delta_k=0.1, eps_y=0.02, eps_a_k=0.04)
        mism = theorem2_bound(c_tilde=0.5, d_tilde=6.0, **args)
        phys = remark3_bound(big_c=0.5, d=6.0, **args)
        assert phys > mism


class TestPseudoinverseNormBound:
    def test_value(self):
        np.testing.assert_allclose(pseudoinverse_norm_bound(0.19),
                                   1.0 / math.sqrt(0.81), rtol=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            pseudoinverse_norm_bound(1.0)


class TestDecayRatioBounds:
    def test_power_law_frozen_values(self):
        r_b, s_b = decay_ratio_bounds("power-law", 2.0, 22)
        np.testing.assert_allclose(r_b, 0.009690941652527747, rtol=1e-14)
        np.testing.assert_allclose(s_b, 0.016785203315363553, rtol=1e-14)

    def test_strong_decay_frozen_values(self):
        r_b, s_b = decay_ratio_bounds("strong-decay", 2.0, 1)
        assert r_b == pytest.approx(0.5)
        assert s_b == pytest.approx(math.sqrt(3.0) * 0.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            decay_ratio_bounds("power-law", 1.0, 5)
        with pytest.raises(ValueError):
            decay_ratio_bounds("exponential", 2.0, 5)
        with pytest.raises(ValueError):
            decay_ratio_bounds("power-law", 2.0, 0)
