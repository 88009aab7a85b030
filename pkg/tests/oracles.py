"""Independent slow reference implementations.

Nothing here imports the counting, hull or linear-algebra code of the
package; configurations are read point by point through ``point_value``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt

from nivat.configurations import (
    Checkerboard,
    Constant,
    Cross,
    DoublyPeriodic,
    EventuallyPeriodicWord,
    FibonacciWord,
    Ledrappier,
    PeriodicComponent,
    PeriodicSum,
    PeriodicWord,
    Sum,
)


def _floor_phi(k: int) -> int:
    return (k + isqrt(5 * k * k)) // 2


def mechanical_fibonacci(length: int) -> list[int]:
    """Fibonacci word as a Sturmian mechanical word, no substitution involved."""
    return [2 + _floor_phi(n) - _floor_phi(n + 1) for n in range(1, length + 1)]


_FIB = mechanical_fibonacci(4000)


def word_value(word, i: int) -> int:
    if isinstance(word, PeriodicWord):
        return word.word[i % len(word.word)]
    if isinstance(word, EventuallyPeriodicWord):
        if i < 0:
            return word.left[i % len(word.left)]
        if i < len(word.center):
            return word.center[i]
        return word.right[(i - len(word.center)) % len(word.right)]
    if isinstance(word, FibonacciWord):
        if not 0 <= i < len(_FIB):
            raise IndexError(i)
        return _FIB[i]
    raise TypeError(word)


def component_value(comp: PeriodicComponent, x: int, y: int) -> int:
    """Solve (x, y) = a*prim + b*w by Cramer's rule, then read the word."""
    u, w = comp.prim, comp.transversal
    d = u.x * w.y - u.y * w.x
    assert d in (1, -1)
    a = (x * w.y - y * w.x) * d
    b = (u.x * y - u.y * x) * d
    m = comp.multiplicity
    return word_value(comp.values, b * m + a % m)


def point_value(spec, x: int, y: int) -> int:
    if isinstance(spec, Constant):
        return spec.value
    if isinstance(spec, Checkerboard):
        return (x + y) % 2
    if isinstance(spec, DoublyPeriodic):
        return spec.cell[x % spec.p][y % spec.q]
    if isinstance(spec, PeriodicSum):
        return sum(component_value(c, x, y) for c in spec.components)
    if isinstance(spec, Sum):
        return sum(point_value(t, x, y) for t in spec.terms)
    if isinstance(spec, Ledrappier):
        # iterate the rule downward from the seed row
        depth = spec.seed_y - y
        row = [word_value(spec.top_row, x + k) % 2 for k in range(depth + 1)]
        for _ in range(depth):
            row = [(row[k] + row[k + 1]) % 2 for k in range(len(row) - 1)]
        return row[0]
    if isinstance(spec, Cross):
        return int(x == 0 or y == 0)
    raise TypeError(spec)


def patterns(spec, domain, origin, width, height) -> set:
    pts = sorted(tuple(p) for p in domain)
    return {
        tuple(point_value(spec, ox + px, oy + py) for px, py in pts)
        for ox in range(origin[0], origin[0] + width)
        for oy in range(origin[1], origin[1] + height)
    }


def count(spec, domain, origin, width, height) -> int:
    if not domain:
        return 1
    return len(patterns(spec, domain, origin, width, height))


def line_level(p, u) -> int:
    return p[0] * u[1] - u[0] * p[1]


def primitive_dirs(r: int):
    return [(x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if (x, y) != (0, 0) and gcd(abs(x), abs(y)) == 1]


def edge_directions(points, r: int) -> set:
    """Directions whose minimal supporting line meets the set in >= 2 points."""
    out = set()
    for u in primitive_dirs(r):
        low = min(line_level(p, u) for p in points)
        if sum(1 for p in points if line_level(p, u) == low) >= 2:
            out.add(u)
    return out


def _in_triangle(q, a, b, c) -> bool:
    def cr(o, p, r):
        return (p[0] - o[0]) * (r[1] - o[1]) - (p[1] - o[1]) * (r[0] - o[0])

    d1, d2, d3 = cr(a, b, q), cr(b, c, q), cr(c, a, q)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def in_hull(q, points) -> bool:
    """Caratheodory: q lies on a segment or in a triangle of the points."""
    pts = list(points)
    if tuple(q) in {tuple(p) for p in pts}:
        return True
    for a, b in combinations(pts, 2):
        if _in_triangle(q, a, b, b) and min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= q[1] <= max(a[1], b[1]):
            return True
    # collinear triples are covered by the segment test above
    return any(
        _in_triangle(q, a, b, c)
        for a, b, c in combinations(pts, 3)
        if (b[0] - a[0]) * (c[1] - a[1]) != (b[1] - a[1]) * (c[0] - a[0])
    )


def is_convex(points) -> bool:
    pts = {tuple(p) for p in points}
    if not pts:
        return True
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if (x, y) not in pts and in_hull((x, y), pts):
                return False
    return True


def convolve_at(coeffs: dict, spec, x: int, y: int) -> Fraction:
    """(f c)(x, y) = sum_w f_w c(x - w)."""
    return sum((Fraction(a) * point_value(spec, x - w[0], y - w[1]) for w, a in coeffs.items()), Fraction(0))


def factors(word, n: int) -> set:
    return {tuple(word[i : i + n]) for i in range(len(word) - n + 1)}
