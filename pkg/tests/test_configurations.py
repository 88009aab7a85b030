import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nivat.configurations import (
    Checkerboard,
    Constant,
    Cross,
    DoublyPeriodic,
    EvaluationError,
    EventuallyPeriodicWord,
    FibonacciWord,
    Ledrappier,
    PeriodicComponent,
    PeriodicSum,
    PeriodicWord,
    Sum,
    fibonacci_cross_sum,
    fibonacci_rows,
    fibonacci_word,
    ledrappier_complement,
    spec_from_json,
    sum_configs,
    values_at,
)
from nivat.generators import Sum2Params, random_doubly_periodic, random_ledrappier, random_periodic_sum
from nivat.geometry import Vec

seeds = st.integers(0, 2**32 - 1)


def random_spec(seed: int):
    rng = np.random.default_rng(seed)
    pick = seed % 5
    if pick == 0:
        return random_doubly_periodic(rng)
    if pick == 1:
        return random_periodic_sum(rng, 2)
    if pick == 2:
        return random_periodic_sum(rng, 3, Sum2Params(max_period=4))
    if pick == 3:
        return Sum((random_doubly_periodic(rng), random_periodic_sum(rng, 1)))
    return random_ledrappier(rng, 7)


def check_window(spec, origin, w, h):
    win = spec.window(origin, w, h)
    assert win.values.shape == (w, h)
    for i in range(w):
        for j in range(h):
            x, y = origin[0] + i, origin[1] + j
            assert win[(x, y)] == oracles.point_value(spec, x, y), (x, y)


@given(seeds, st.integers(-20, 20), st.integers(-20, -6))
@settings(max_examples=60, deadline=None)
def test_window_matches_pointwise_oracle(seed, ox, oy):
    check_window(random_spec(seed), (ox, oy), 7, 6)


@pytest.mark.parametrize("spec", [Constant(3), Checkerboard(), Cross()])
def test_fixed_examples_match_oracle(spec):
    check_window(spec, (-3, -3), 7, 7)


def test_checkerboard_and_cross_values():
    assert Checkerboard().evaluate((0, 0)) == 0
    assert Checkerboard().evaluate((1, 0)) == 1
    assert Cross().evaluate((0, 5)) == 1
    assert Cross().evaluate((2, 5)) == 0


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_json_roundtrip(seed):
    spec = random_spec(seed)
    again = spec_from_json(spec.to_json())
    assert again.to_json() == spec.to_json()
    assert again.window((-4, -9), 9, 8) == spec.window((-4, -9), 9, 8)


@given(seeds, st.integers(-30, 30), st.integers(-30, 30))
@settings(max_examples=80, deadline=None)
def test_period_box_is_a_period_pair(seed, x, y):
    spec = random_spec(seed)
    box = spec.period_box()
    if box is None:
        return
    P, Q = box
    v = oracles.point_value(spec, x, y)
    assert oracles.point_value(spec, x + P, y) == v
    assert oracles.point_value(spec, x, y + Q) == v


def test_component_multiplicity_uses_both_coordinates():
    # period 2*(1,1): values depend on the line and on the parity along it
    comp = PeriodicComponent(Vec(2, 2), PeriodicWord((0, 1, 2, 3)))
    spec = PeriodicSum((comp,))
    check_window(spec, (-4, -4), 9, 9)
    assert comp.multiplicity == 2
    # (2,2) is a period, (1,1) is not
    win = spec.window((0, 0), 8, 8).values
    assert np.array_equal(win[2:, 2:], win[:-2, :-2])
    assert not np.array_equal(win[1:, 1:], win[:-1, :-1])


def test_transversal_must_complete_basis():
    with pytest.raises(ValueError, match="transversal"):
        PeriodicComponent(Vec(1, 0), PeriodicWord((0,)), Vec(0, 2))


def test_eventually_periodic_word_reads():
    w = EventuallyPeriodicWord((7,), (1, 2), (5, 6))
    got = w.take(np.arange(-2, 6))
    assert list(got) == [oracles.word_value(w, i) for i in range(-2, 6)]
    assert list(got) == [7, 7, 1, 2, 5, 6, 5, 6]


def test_fibonacci_prefix_and_bounds():
    assert fibonacci_word(13) == oracles.mechanical_fibonacci(13)
    fw = FibonacciWord(5)
    assert len(fw.prefix) == 13
    with pytest.raises(EvaluationError, match="exceeds finite description"):
        fw.take(np.array([13]))
    with pytest.raises(EvaluationError):
        fibonacci_rows(50).window((-1, 0), 3, 3)


def test_fibonacci_sums_read_rows_and_columns():
    s = oracles.mechanical_fibonacci(40)
    rows = fibonacci_rows(40).window((0, 0), 20, 5).values
    assert all(rows[x, y] == s[x] for x in range(20) for y in range(5))
    cross = fibonacci_cross_sum(40).window((0, 0), 15, 15).values
    assert all(cross[x, y] == s[x] + s[y] for x in range(15) for y in range(15))


def test_ledrappier_rule_and_seed_bound():
    led = Ledrappier(PeriodicWord((0, 1, 1, 0, 1)))
    win = led.window((0, -10), 12, 11).values
    # c(x, y) = c(x, y+1) + c(x+1, y+1) mod 2 below the seed row
    assert np.all(win[:-1, :-1] == (win[:-1, 1:] + win[1:, 1:]) % 2)
    for p in [(3, -7), (0, 0), (-5, -12)]:
        assert led.evaluate(p) == oracles.point_value(led, *p)
    with pytest.raises(EvaluationError):
        led.evaluate((0, 1))
    with pytest.raises(EvaluationError):
        led.window((0, 0), 2, 2)


def test_ledrappier_complement_differs_only_on_seed_row():
    led = Ledrappier(PeriodicWord((0, 1, 1, 0, 1, 0, 0)))
    comp = ledrappier_complement(led)
    a = led.window((-5, -20), 30, 21).values
    b = comp.window((-5, -20), 30, 21).values
    assert np.all(a[:, -1] != b[:, -1])
    assert np.array_equal(a[:, :-1], b[:, :-1])


def test_sum_configs_prefers_components():
    a = DoublyPeriodic(((0, 1), (2, 3)))
    out = sum_configs(a, Checkerboard())
    assert isinstance(out, PeriodicSum)
    check_window(out, (-3, -3), 8, 8)
    w = (-3, -3), 8, 8
    assert np.array_equal(out.window(*w).values, a.window(*w).values + Checkerboard().window(*w).values)
    assert isinstance(sum_configs(a, Cross()), Sum)


@given(seeds, st.lists(st.tuples(st.integers(-15, 15), st.integers(-15, 0)), min_size=1, max_size=12))
@settings(max_examples=40, deadline=None)
def test_values_at(seed, pts):
    spec = random_spec(seed)
    assert list(values_at(spec, pts)) == [oracles.point_value(spec, x, y) for x, y in pts]


def test_unknown_kind():
    with pytest.raises(ValueError, match="unknown configuration kind"):
        spec_from_json({"kind": "nope"})
