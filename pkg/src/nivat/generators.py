"""Seeded random configuration generators used by tests and harnesses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configurations import (
    DoublyPeriodic,
    EventuallyPeriodicWord,
    Ledrappier,
    PeriodicComponent,
    PeriodicSum,
    PeriodicWord,
)
from .geometry import Vec, det


def random_doubly_periodic(rng: np.random.Generator, max_period: int = 6, alphabet: int = 4) -> DoublyPeriodic:
    p = int(rng.integers(1, max_period + 1))
    q = int(rng.integers(1, max_period + 1))
    k = int(rng.integers(1, alphabet + 1))
    cell = rng.integers(0, k, size=(p, q))
    return DoublyPeriodic(tuple(tuple(int(s) for s in col) for col in cell))


def random_word(rng: np.random.Generator, alphabet: int, kind: str, max_len: int = 4):
    k = int(rng.integers(1, alphabet + 1))
    draw = lambda lo, hi: tuple(int(s) for s in rng.integers(0, k, size=int(rng.integers(lo, hi + 1))))  # noqa: E731
    if kind == "periodic":
        return PeriodicWord(draw(1, max_len))
    if kind == "eventually-periodic":
        return EventuallyPeriodicWord(draw(1, 3), draw(0, max_len), draw(1, 3))
    raise ValueError(kind)


def random_vector(rng: np.random.Generator, max_norm: int) -> Vec:
    while True:
        v = Vec(*(int(a) for a in rng.integers(-max_norm, max_norm + 1, size=2)))
        if v != (0, 0):
            return v


@dataclass(frozen=True)
class Sum2Params:
    max_period: int = 6
    alphabet: int = 4
    axis_fraction: float = 0.5
    eventually_periodic_fraction: float = 0.5
    max_word: int = 4


def random_periods(rng: np.random.Generator, count: int, params: Sum2Params) -> list[Vec]:
    """``count`` pairwise independent period vectors."""
    if rng.random() < params.axis_fraction and count == 2:
        return [
            Vec(int(rng.integers(1, params.max_period + 1)), 0),
            Vec(0, int(rng.integers(1, params.max_period + 1))),
        ]
    out: list[Vec] = []
    while len(out) < count:
        v = random_vector(rng, params.max_period)
        if all(det(v, w) != 0 for w in out):
            out.append(v)
    return out


def random_periodic_sum(
    rng: np.random.Generator, count: int = 2, params: Sum2Params = Sum2Params(), periodic_only: bool = False
) -> PeriodicSum:
    comps = []
    for u in random_periods(rng, count, params):
        kind = "periodic"
        if not periodic_only and rng.random() < params.eventually_periodic_fraction:
            kind = "eventually-periodic"
        comps.append(PeriodicComponent(u, random_word(rng, params.alphabet, kind, params.max_word)))
    return PeriodicSum(tuple(comps))


def random_ledrappier(rng: np.random.Generator, length: int = 257) -> Ledrappier:
    return Ledrappier(PeriodicWord(tuple(int(s) for s in rng.integers(0, 2, size=length))))
