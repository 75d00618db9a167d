"""Tests for signal generators, best-k splitting, and tail ratios."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pursuitlab import (
    approx_ratios,
    best_k_split,
    decay_ratio_bounds,
    gen_power_law,
    gen_sparse,
    gen_strong_decay,
)


def _finite_vectors(min_size=2, max_size=24):
    return st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False,
                  width=64),
        min_size=min_size, max_size=max_size,
    ).map(lambda v: np.asarray(v, dtype=float))


class TestGenSparse:
    """Exactly-sparse Gaussian signals."""

    def test_support_size(self):
        rng = np.random.default_rng(0)
        s = gen_sparse(64, 7, rng)
        assert s.shape == (64,)
        assert np.count_nonzero(s) == 7

    def test_all_selected_entries_nonzero(self):
        """The generator redraws any zero magnitude, so the support is exact."""
        rng = np.random.default_rng(1)
        for _ in range(50):
            s = gen_sparse(20, 5, rng)
            assert np.count_nonzero(s) == 5

    def test_deterministic_given_seed(self):
        a = gen_sparse(32, 4, np.random.default_rng(42))
        b = gen_sparse(32, 4, np.random.default_rng(42))
        np.testing.assert_array_equal(a, b)

    def test_rejects_bad_sparsity(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            gen_sparse(8, 0, rng)
        with pytest.raises(ValueError):
            gen_sparse(8, 9, rng)


class TestGenPowerLaw:
    """Compressible signals with polynomially decaying magnitudes."""

    def test_deterministic_magnitudes(self):
        s = gen_power_law(4, 1.0, 2.0)
        np.testing.assert_allclose(s, [1.0, 0.25, 1.0 / 9.0, 1.0 / 16.0])

    def test_radius_scales_linearly(self):
        np.testing.assert_allclose(
            gen_power_law(6, 3.0, 2.0), 3.0 * gen_power_law(6, 1.0, 2.0))

    def test_rng_permutes_but_preserves_magnitudes(self):
        base = gen_power_law(16, 1.0, 1.5)
        shuffled = gen_power_law(16, 1.0, 1.5, rng=np.random.default_rng(3))
        np.testing.assert_allclose(
            np.sort(np.abs(shuffled)), np.sort(base))
        assert not np.array_equal(shuffled, base)

    def test_rng_flips_some_signs(self):
        signs = np.sign(gen_power_law(64, 1.0, 2.0, rng=np.random.default_rng(5)))
        assert (signs < 0).any() and (signs > 0).any()

    def test_rejects_flat_decay(self):
        with pytest.raises(ValueError):
            gen_power_law(8, 1.0, 1.0)


class TestGenStrongDecay:
    def test_geometric_magnitudes(self):
        np.testing.assert_allclose(gen_strong_decay(3, 2.0, 2.0),
                                   [1.0, 0.5, 0.25])

    def test_rejects_flat_decay(self):
        with pytest.raises(ValueError):
            gen_strong_decay(8, 1.0, 1.0)


class TestBestKSplit:
    def test_frozen_tie_break_lowest_index_wins(self):
        head, tail, k = best_k_split(np.array([3.0, -3.0, 1.0]), 1)
        np.testing.assert_array_equal(head, [3.0, 0.0, 0.0])
        np.testing.assert_array_equal(tail, [0.0, -3.0, 1.0])
        assert k == 1

    def test_head_plus_tail_reconstructs(self):
        rng = np.random.default_rng(7)
        s = rng.standard_normal(40)
        split = best_k_split(s, 9)
        np.testing.assert_array_equal(split.head + split.tail, s)
        assert np.count_nonzero(split.head) <= 9

    def test_k_full_keeps_everything(self):
        s = np.array([1.0, -2.0])
        assert not best_k_split(s, 2).tail.any()

    def test_k_out_of_range_rejected(self):
        s = np.array([1.0, -2.0])
        with pytest.raises(ValueError):
            best_k_split(s, 0)
        with pytest.raises(ValueError):
            best_k_split(s, 3)

    @given(_finite_vectors(), st.integers(min_value=1, max_value=24))
    @settings(max_examples=60, deadline=None)
    def test_idempotent_and_contractive(self, s, k):
        k = min(k, s.size)
        split = best_k_split(s, k)
        np.testing.assert_array_equal(best_k_split(split.head, k).head,
                                      split.head)
        assert np.linalg.norm(split.head) <= np.linalg.norm(s) + 1e-12


class TestApproxRatios:
    def test_frozen_values(self):
        ratios = approx_ratios(np.array([2.0, 1.0, 1.0]), 1)
        np.testing.assert_allclose(ratios.r_k, 0.5773502691896258)
        np.testing.assert_allclose(ratios.s_k, 0.8164965809277261)

    def test_exactly_sparse_signal_has_zero_ratios(self):
        s = np.zeros(10)
        s[[2, 5]] = [3.0, -1.0]
        ratios = approx_ratios(s, 2)
        assert ratios.r_k == 0.0 and ratios.s_k == 0.0

    def test_zero_signal_rejected(self):
        with pytest.raises(ValueError):
            approx_ratios(np.zeros(5), 2)

    @given(_finite_vectors(min_size=3),
           st.integers(min_value=1, max_value=20),
           st.sampled_from([0.25, 0.5, 2.0, 8.0, 1024.0]))
    @settings(max_examples=60, deadline=None)
    def test_scale_invariance(self, s, k, c):
        """Power-of-two factors rescale magnitudes exactly, so the selected
        support cannot change and the ratios must agree to rounding."""
        if not np.any(s):
            return
        k = min(k, s.size - 1)
        base = approx_ratios(s, k)
        scaled = approx_ratios(c * s, k)
        np.testing.assert_allclose(scaled.r_k, base.r_k, rtol=1e-12, atol=0)
        np.testing.assert_allclose(scaled.s_k, base.s_k, rtol=1e-12, atol=0)


class TestDecayModelRatios:
    """Measured tail ratios of the generated decay signals."""

    def test_strong_decay_within_closed_form_bounds(self):
        s = gen_strong_decay(16, 2.0, 1.0)
        for k in range(1, 16):
            r_bound, s_bound = decay_ratio_bounds("strong-decay", 2.0, k)
            ratios = approx_ratios(s, k)
            assert ratios.r_k <= r_bound + 1e-12
            assert ratios.s_k <= s_bound + 1e-12

    @pytest.mark.xfail(
        strict=True,
        reason="the closed-form power-law tail estimate overshoots the "
               "measured r_k by roughly 45% at p=2, far outside a 10% band",
    )
    def test_power_law_matches_closed_form_within_ten_percent(self):
        s = gen_power_law(128, 1.0, 2.0)
        for k in range(10, 33):
            approx = float(k) ** (0.5 - 2.0)
            measured = approx_ratios(s, k).r_k
            assert abs(measured - approx) <= 0.1 * approx
