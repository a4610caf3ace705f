import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tidalgrid.controller import ControllerParams, moving_average, split_deficit

series = arrays(np.float64, st.integers(1, 200), elements=st.floats(-1e4, 1e4, allow_nan=False))
spans = st.floats(1.0, 300.0, allow_nan=False)


def reference_average(d, span, warmup="zero"):
    """Literal weighted sum over the trailing window, one hour at a time."""
    whole = int(np.floor(span))
    frac = span - whole
    out = np.zeros(len(d))
    for t in range(len(d)):
        acc, weight = 0.0, 0.0
        for k in range(1, whole + 1):
            if t - k >= 0:
                acc += d[t - k]
                weight += 1.0
        if frac > 0 and t - whole - 1 >= 0:
            acc += frac * d[t - whole - 1]
            weight += frac
        if warmup == "zero":
            out[t] = acc / span
        else:
            out[t] = acc / weight if weight > 0 else 0.0
    return out


class TestParams:
    @pytest.mark.parametrize("span", [0.5, 0.0, -1.0, 8761.0])
    def test_span_out_of_range(self, span):
        with pytest.raises(ValueError):
            ControllerParams(span)

    def test_bad_warmup(self):
        with pytest.raises(ValueError):
            ControllerParams(5.0, warmup="mirror")


class TestMovingAverage:
    def test_span_one_is_previous_hour(self):
        d = np.array([3.0, 5.0, 7.0, 11.0])
        np.testing.assert_array_equal(moving_average(d, 1.0), [0.0, 3.0, 5.0, 7.0])

    def test_fractional_span_hand_case(self):
        # span 2.5 at t=3: (d2 + d1 + 0.5 d0) / 2.5
        d = np.array([2.0, 4.0, 6.0, 8.0])
        assert moving_average(d, 2.5)[3] == pytest.approx((6.0 + 4.0 + 1.0) / 2.5)

    def test_truncate_first_hours(self):
        d = np.array([2.0, 4.0, 6.0, 8.0])
        out = moving_average(d, 3.0, "truncate")
        np.testing.assert_allclose(out, [0.0, 2.0, 3.0, 4.0])

    @settings(max_examples=60, deadline=None)
    @given(series, spans, st.sampled_from(["zero", "truncate"]))
    def test_matches_reference(self, d, span, warmup):
        scale = max(1.0, np.abs(d).max())
        np.testing.assert_allclose(moving_average(d, span, warmup), reference_average(d, span, warmup),
                                   atol=1e-9 * scale * len(d))

    @settings(max_examples=40, deadline=None)
    @given(series, spans, st.integers(0, 199))
    def test_causal(self, d, span, k):
        # changing hour k leaves every average at or before hour k unchanged
        k = k % len(d)
        bumped = d.copy()
        bumped[k] += 1000.0
        np.testing.assert_array_equal(moving_average(d, span)[: k + 1], moving_average(bumped, span)[: k + 1])

    @settings(max_examples=40, deadline=None)
    @given(series, spans, st.floats(-5.0, 5.0))
    def test_linear(self, d, span, a):
        e = np.roll(d, 1)
        lhs = moving_average(a * d + e, span)
        rhs = a * moving_average(d, span) + moving_average(e, span)
        np.testing.assert_allclose(lhs, rhs, atol=1e-7 * max(1.0, np.abs(d).max() * (abs(a) + 1)))


class TestSplit:
    @settings(max_examples=60, deadline=None)
    @given(series, spans)
    def test_identity(self, d, span):
        p_vrfb, p_lib = split_deficit(d, ControllerParams(span))
        assert np.max(np.abs(p_vrfb + p_lib - d)) <= 1e-9 * max(1e-300, np.abs(d).max())

    @pytest.mark.parametrize("span", [1.0, 7.0, 24.0, 100.0])
    def test_constant_input_integer_span_exact(self, span):
        d = np.full(500, 42.0)
        p_vrfb, p_lib = split_deficit(d, ControllerParams(span))
        warm = int(np.ceil(span))
        assert np.all(p_lib[warm:] == 0.0)
        assert np.all(p_vrfb[warm:] == 42.0)

    @pytest.mark.parametrize("span", [1.5, 2.7, 15.3, 99.9])
    def test_constant_input_fractional_span(self, span):
        d = np.full(500, 42.0)
        _, p_lib = split_deficit(d, ControllerParams(span))
        assert np.max(np.abs(p_lib[int(np.ceil(span)):])) <= 1e-12 * 42.0

    def test_lib_takes_fast_component(self):
        t = np.arange(24 * 30)
        slow = 100.0 * np.ones_like(t, dtype=float)
        fast = 10.0 * (-1.0) ** t
        p_vrfb, p_lib = split_deficit(slow + fast, ControllerParams(24.0))
        assert np.abs(p_vrfb[48:] - 100.0).max() < 1e-9
        np.testing.assert_allclose(p_lib[48:], fast[48:], atol=1e-9)
