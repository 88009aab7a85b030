import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nivat.balanced import (
    NotLowComplexity,
    construct_balanced,
    find_forced_cell,
    order_edge,
    shaving_sequence,
    verify_balanced,
)
from nivat.configurations import Checkerboard, Constant, DoublyPeriodic
from nivat.generators import random_doubly_periodic
from nivat.geometry import Shape, Vec, primitive_of

DIRECTIONS = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (1, -1), (2, 1), (1, 2), (-2, 1), (3, -1)]


def brute_count(spec, dom):
    P, Q = spec.period_box()
    return oracles.count(spec, dom, (0, 0), 2 * P, 2 * Q)


def brute_shaving(rect, u):
    """Repeatedly drop the minimal line of n_u, alternating u and -u."""
    up = primitive_of(u)
    cur, seq, i = set(rect), [], 0
    while cur:
        seq.append(frozenset(cur))
        d = up if i % 2 == 0 else -up
        low = min(oracles.line_level(p, d) for p in cur)
        cur = {p for p in cur if oracles.line_level(p, d) != low}
        i += 1
    seq.append(frozenset())
    return seq


def test_constant_square_in_direction_2_1():
    spec = Constant(0)
    cert = construct_balanced(spec, 5, 5, (2, 1))
    seq = brute_shaving(Shape.rect(5, 5), (2, 1))
    # every nonempty D has exactly one pattern, so B is the last nonempty shape
    assert [frozenset(D.points) for D in cert.trace] == seq
    assert cert.shape == Shape(seq[-2])
    assert cert.shape == Shape([(0, 1), (2, 2), (4, 3)])
    assert cert.index == len(seq) - 2 == 12
    assert cert.balanced and cert.exact


def test_verify_balanced_detects_short_parallel_line():
    B = Shape([(x, 0) for x in range(5)] + [(0, 1)])
    cert = verify_balanced(Constant(1), B, (-1, 0))
    # edge is the bottom row; the line y = 1 has one cell, fewer than |E| - 1
    assert cert.edge == Shape((x, 0) for x in range(5))
    assert cert.conditions == (True, True, False)


def test_verify_balanced_checkerboard_rows():
    B = Shape.rect(3, 2)
    cert = verify_balanced(Checkerboard(), B, (1, 0))
    assert cert.edge == Shape((x, 1) for x in range(3))
    rb, rr = brute_count(Checkerboard(), B), brute_count(Checkerboard(), B - cert.edge)
    assert (cert.report_b.count, cert.report_rest.count) == (rb, rr) == (2, 2)
    assert cert.conditions == (rb <= len(B), rb < rr + len(cert.edge), True)


def test_not_low_complexity():
    with pytest.raises(NotLowComplexity):
        construct_balanced(Checkerboard(), 1, 1, (1, 0))


def test_fixed_mode():
    with pytest.raises(ValueError, match="horizontal or vertical"):
        construct_balanced(Constant(0), 3, 3, (1, 1), mode="fixed")
    seq = shaving_sequence(Shape.rect(3, 4), (1, 0), "fixed")
    # rows disappear from the top one at a time
    assert [len(D) for D, _ in seq] == [12, 9, 6, 3, 0]


def test_order_edge():
    E = Shape([(0, 0), (1, 1), (2, 2)])
    assert order_edge(E, (1, 1)) == [Vec(0, 0), Vec(1, 1), Vec(2, 2)]
    assert order_edge(E, (1, 1), mirrored=True) == [Vec(2, 2), Vec(1, 1), Vec(0, 0)]


def low_specs():
    """Random doubly periodic specs whose 4x4 block complexity is low."""

    def build(seed):
        rng = np.random.default_rng(seed)
        while True:
            spec = random_doubly_periodic(rng, 6, 4)
            P, Q = spec.period_box()
            if oracles.count(spec, Shape.rect(4, 4), (0, 0), P, Q) <= 16:
                return spec

    return st.integers(0, 2**32 - 1).map(build)


@given(low_specs(), st.sampled_from(DIRECTIONS))
@settings(max_examples=40, deadline=None)
def test_certificate_recounted_by_brute_force(spec, u):
    cert = construct_balanced(spec, 4, 4, u)
    B, E = cert.shape, cert.edge
    pb, pr = brute_count(spec, B), brute_count(spec, B - E)
    lines = {}
    for p in B:
        lines.setdefault(oracles.line_level(p, cert.direction), []).append(p)
    assert pb <= len(B)
    assert pb < pr + len(E)
    assert all(len(v) >= len(E) - 1 for v in lines.values())
    i = cert.index
    assert cert.values[i] <= 0 < cert.values[i + 1]
    fc = find_forced_cell(spec, B, E, cert.direction)
    assert fc.certified
    # no two patterns on D_k + e agree on D_k and differ at e
    dom = sorted(set(fc.domain.points) | {fc.forced})
    j = dom.index(fc.forced)
    P, Q = spec.period_box()
    seen = {}
    for pat in oracles.patterns(spec, dom, (0, 0), P, Q):
        key = pat[:j] + pat[j + 1 :]
        assert seen.setdefault(key, pat[j]) == pat[j]


def test_forced_cell_rejects_edge_outside_b():
    with pytest.raises(ValueError):
        find_forced_cell(Constant(0), Shape.rect(2, 2), Shape([(5, 5)]), (1, 0))


def test_trace_is_nested():
    spec = DoublyPeriodic(((0, 1, 0), (1, 1, 0)))
    cert = construct_balanced(spec, 4, 3, (1, 2))
    for a, b in zip(cert.trace, cert.trace[1:]):
        assert b < a
        assert a.is_convex()
