import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nivat.complexity import ScanRange
from nivat.configurations import (
    Checkerboard,
    Constant,
    Ledrappier,
    PeriodicComponent,
    PeriodicSum,
    PeriodicWord,
    fibonacci_cross_sum,
    ledrappier_complement,
)
from nivat.dynamics import (
    ambiguity_witness,
    certifies_period,
    corollary_check,
    detect_periods,
    ledrappier_congruence,
    mn_over_2_harness,
    nivat_sum2_harness,
    parallelogram,
    shift_agreement,
    stripe_periodicity_extension_check,
    stripe_repeat_analysis,
    stripe_segment,
)
from nivat.generators import Sum2Params, random_doubly_periodic, random_periodic_sum
from nivat.geometry import Shape, Stripe, Vec, det

seeds = st.integers(0, 2**32 - 1)
vecs = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(lambda v: v != (0, 0))


def spec_for(seed):
    rng = np.random.default_rng(seed)
    return random_doubly_periodic(rng) if seed % 2 else random_periodic_sum(rng, 2)


@given(seeds, vecs, st.integers(-30, 30), st.integers(-30, 30))
@settings(max_examples=100, deadline=None)
def test_certified_periods_are_periods(seed, v, x, y):
    spec = spec_for(seed)
    if certifies_period(spec, v):
        assert oracles.point_value(spec, x, y) == oracles.point_value(spec, x + v[0], y + v[1])


def test_component_periods_certified():
    spec = PeriodicSum((PeriodicComponent(Vec(2, 1), PeriodicWord((0, 1, 2))),))
    assert certifies_period(spec, (2, 1))
    assert certifies_period(spec, (-4, -2))
    assert not certifies_period(spec, (1, 0))
    assert not certifies_period(spec, (0, 0))


@given(st.lists(st.lists(st.integers(0, 2), min_size=5, max_size=5), min_size=5, max_size=5), vecs)
def test_shift_agreement_matches_pairwise_count(rows, v):
    arr = np.array(rows)
    got = shift_agreement(arr, v)
    pairs = [
        arr[i, j] == arr[i + v[0], j + v[1]]
        for i in range(5)
        for j in range(5)
        if 0 <= i + v[0] < 5 and 0 <= j + v[1] < 5
    ]
    if not pairs:
        assert got is None
    else:
        assert got == pytest.approx(sum(pairs) / len(pairs))


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_certified_vectors_fully_agree(seed):
    spec = spec_for(seed)
    rep = detect_periods(spec, ScanRange((-10, -10), 25, 25), 6)
    agree = dict(rep.candidates)
    assert all(agree[v] == 1.0 for v in rep.certified)
    if seed % 2:
        # doubly periodic with both periods at most 6
        assert rep.periodic and rep.certified


def test_stripe_segment_layout():
    b, i = stripe_segment((1, 0), 3, 4)
    assert b == [Vec(x, 0) for x in range(4)]
    # interior lies on the n_u = 1, 2 lines, i.e. below the boundary row
    assert {oracles.line_level(p, (1, 0)) for p in i} == {1, 2}


@pytest.mark.parametrize("width", range(1, 9))
def test_ledrappier_pair_witness(width):
    rng = np.random.default_rng(width)
    led = Ledrappier(PeriodicWord(tuple(int(s) for s in rng.integers(0, 2, size=11))))
    wit = ambiguity_witness((led, ledrappier_complement(led)), (1, 0), width, 6, ScanRange((0, 0), 3, 1))
    assert wit is not None and wit.validate() and wit.mode == "pair"
    p = wit.positions[0]
    for spec, bv, iv in [(led, wit.boundary_values[0], wit.interior_values[0])]:
        assert list(bv) == [oracles.point_value(spec, p.x + o.x, p.y + o.y) for o in wit.boundary]
        assert list(iv) == [oracles.point_value(spec, p.x + o.x, p.y + o.y) for o in wit.interior]
    win = led.window((0, -40), 40, 41).values
    assert ledrappier_congruence(win) == 1.0


def test_shift_witness_and_absence():
    # a sum of a row pattern and a column pattern: one column does not fix the next
    spec = PeriodicSum(
        (
            PeriodicComponent(Vec(1, 0), PeriodicWord((0, 0, 1)), Vec(0, 1)),
            PeriodicComponent(Vec(0, 1), PeriodicWord((0, 1, 1, 0)), Vec(1, 0)),
        )
    )
    wit = ambiguity_witness(spec, (0, 1), 2, 3, ScanRange((-6, -6), 12, 12))
    assert wit is not None and wit.validate() and wit.mode == "shift"
    for k in range(2):
        p = wit.positions[k]
        assert list(wit.interior_values[k]) == [oracles.point_value(spec, p.x + o.x, p.y + o.y) for o in wit.interior]
    assert ambiguity_witness(Constant(2), (1, 0), 3, 3, ScanRange((0, 0), 5, 5)) is None
    with pytest.raises(ValueError):
        ambiguity_witness(Constant(2), (1, 0), 0, 3, ScanRange((0, 0), 5, 5))


@given(vecs, vecs)
def test_parallelogram_has_det_points(u1, u2):
    if det(u1, u2) == 0:
        return
    assert len(parallelogram(u1, u2)) == abs(det(u1, u2))


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_stripe_repeat_residual_is_zero(seed):
    rng = np.random.default_rng(seed)
    spec = random_periodic_sum(rng, 2, Sum2Params(max_period=4), periodic_only=True)
    rep = stripe_repeat_analysis(spec, 2, 2, J=400)
    assert rep.propagation_residual_max == 0
    assert rep.stripe_equal
    assert det(rep.stripe_period, spec.components[1].period) == 0


def test_stripe_repeat_rejects_bad_input():
    with pytest.raises(ValueError):
        stripe_repeat_analysis(Checkerboard(), 2, 2, 10)
    dep = PeriodicSum((PeriodicComponent(Vec(1, 0), PeriodicWord((0, 1))), PeriodicComponent(Vec(2, 0), PeriodicWord((1,)))))
    with pytest.raises(ValueError, match="dependent"):
        stripe_repeat_analysis(dep, 2, 2, 10)


def test_extension_check():
    spec = Checkerboard()
    stripe = Stripe.between((1, 0), 0, 3)
    D = Shape.rect(2, 2)
    ok = stripe_periodicity_extension_check(spec, D, stripe, (1, 0), (2, 0), ScanRange((-5, -5), 12, 12))
    assert ok.extends and ok.window_agreement == 1.0
    bad = stripe_periodicity_extension_check(spec, D, stripe, (1, 0), (1, 1), ScanRange((-5, -5), 12, 12))
    assert not bad.gate_passed and "direction" in bad.reason
    wrong = stripe_periodicity_extension_check(spec, D, stripe, (1, 0), (1, 0), ScanRange((-5, -5), 12, 12))
    assert not wrong.gate_passed and wrong.interior_agreement == 0.0


def test_sum2_harness_small_run_is_deterministic():
    a = nivat_sum2_harness(12, 4, 4, seed=3, window=ScanRange((-30, -30), 60, 60), max_norm=24)
    b = nivat_sum2_harness(12, 4, 4, seed=3, window=ScanRange((-30, -30), 60, 60), max_norm=24, workers=2)
    assert a == b
    assert a["counts"]["violation"] == 0
    assert sum(a["counts"].values()) == 12


def test_corollary_check_small():
    out = corollary_check(fibonacci_cross_sum(120), 3, 3, ScanRange((0, 0), 60, 60))
    assert out["all_ok"]
    for row in out["rows"]:
        dom = Shape.rect(row["m"], row["n"])
        assert row["count"] == oracles.count(fibonacci_cross_sum(120), dom, (0, 0), 60, 60)


def test_mn_over_2_without_extra_components():
    spec = PeriodicSum(
        (
            PeriodicComponent(Vec(1, 0), PeriodicWord((0, 1, 1))),
            PeriodicComponent(Vec(0, 1), PeriodicWord((0, 0, 1, 1))),
        )
    )
    out = mn_over_2_harness(spec, 3, 3, [])
    assert out["mg"] == out["ng"] == 0
    assert out["P_c_mn"] == out["P_cprime_reduced"]
    assert out["R"] + out["U"] == 9 and out["partition_ok"]


def test_mn_over_2_three_components():
    spec = PeriodicSum(
        (
            PeriodicComponent(Vec(2, 0), PeriodicWord((0, 1, 1))),
            PeriodicComponent(Vec(0, 3), PeriodicWord((1, 0))),
            PeriodicComponent(Vec(1, 1), PeriodicWord((0, 2))),
        )
    )
    out = mn_over_2_harness(spec, 5, 5, [(1, 1)])
    assert out["exact"] and out["determined"]
    assert out["inequality_c_ge_cprime"]
    # brute recount of the full-rectangle side
    P, Q = spec.period_box()
    assert out["P_c_mn"] == oracles.count(spec, Shape.rect(5, 5), (0, 0), P, Q)
