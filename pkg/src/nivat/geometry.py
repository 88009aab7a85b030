"""Integer lattice geometry of Z^2.

Conventions: for a direction ``u`` the functional

    n_u(p) = p.x * u.y - u.x * p.y

is constant along lines in direction ``u``.  The half-plane of the directed
line through ``v`` is ``{p : n_u(p) >= n_u(v)}`` (the side "on the right"
of the line), so the supporting line of a finite set in direction ``u``
sits at the minimum of ``n_u`` over the set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, NamedTuple, Optional, Union


class Vec(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return Vec(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return Vec(-self.x, -self.y)

    def __mul__(self, k):  # type: ignore[override]
        return Vec(self.x * k, self.y * k)

    __rmul__ = __mul__

    def norm_inf(self) -> int:
        return max(abs(self.x), abs(self.y))


def vec(p) -> Vec:
    return p if isinstance(p, Vec) else Vec(int(p[0]), int(p[1]))


def det(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def line_index(p, u) -> int:
    """Value of the functional ``n_u``; equal on a line in direction u."""
    return p[0] * u[1] - u[0] * p[1]


def primitive_of(v) -> Vec:
    """Primitive representative of the direction of ``v``.

    >>> primitive_of((4, 6))
    Vec(x=2, y=3)
    """
    x, y = int(v[0]), int(v[1])
    if x == 0 and y == 0:
        raise ValueError("not a direction: zero vector")
    g = gcd(abs(x), abs(y))
    return Vec(x // g, y // g)


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def transversal(u) -> Vec:
    """A vector ``w`` with ``line_index(w, u) == 1`` for primitive ``u``.

    Adding ``w`` moves a point to the next line in direction ``u``; the pair
    ``(u, w)`` is a lattice basis (``det(u, w) == -1``).
    """
    u = primitive_of(u)
    # w.x * u.y - u.x * w.y == 1
    g, s, t = extended_gcd(u.y, -u.x)
    assert g == 1
    return Vec(s, t)


# ---------------------------------------------------------------------------
# half-planes and stripes


@dataclass(frozen=True)
class HalfPlane:
    direction: Vec
    anchor: Vec

    def __post_init__(self):
        object.__setattr__(self, "direction", primitive_of(self.direction))
        object.__setattr__(self, "anchor", vec(self.anchor))

    @property
    def level(self) -> int:
        return line_index(self.anchor, self.direction)

    def contains(self, p) -> bool:
        w = (p[0] - self.anchor.x, p[1] - self.anchor.y)
        u = self.direction
        return w[0] * u.y - u.x * w[1] >= 0


@dataclass(frozen=True)
class Stripe:
    """``inner \\ outer`` for two half-planes in the same direction.

    In terms of ``n_u`` the stripe is ``lo <= n_u(p) < hi``; the inner
    boundary is the line ``n_u == lo`` and the interior is ``lo < n_u < hi``.
    """

    direction: Vec
    inner: HalfPlane
    outer: HalfPlane

    def __post_init__(self):
        d = primitive_of(self.direction)
        object.__setattr__(self, "direction", d)
        if self.inner.direction != d or self.outer.direction != d:
            raise ValueError("stripe half-planes must share the stripe direction")
        if self.hi <= self.lo:
            raise ValueError("empty stripe")

    @classmethod
    def between(cls, u, lo: int, hi: int) -> "Stripe":
        """Stripe ``lo <= n_u(p) < hi``."""
        u = primitive_of(u)
        w = transversal(u)
        return cls(u, HalfPlane(u, w * lo), HalfPlane(u, w * hi))

    @property
    def lo(self) -> int:
        return self.inner.level

    @property
    def hi(self) -> int:
        return self.outer.level

    @property
    def width(self) -> int:
        return self.hi - self.lo

    def contains(self, p) -> bool:
        return self.inner.contains(p) and not self.outer.contains(p)

    def in_interior(self, p) -> bool:
        return self.contains(p) and line_index(p, self.direction) != self.lo

    def on_inner_boundary(self, p) -> bool:
        return line_index(p, self.direction) == self.lo


# ---------------------------------------------------------------------------
# finite shapes


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_vertices(points: Iterable) -> list[Vec]:
    """Counter-clockwise convex hull vertices (collinear points dropped)."""
    pts = sorted(set(vec(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[Vec] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def _in_hull(p, hull: list[Vec]) -> bool:
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        a, b = hull
        if _cross(a, b, p) != 0:
            return False
        return min(a.x, b.x) <= p[0] <= max(a.x, b.x) and min(a.y, b.y) <= p[1] <= max(a.y, b.y)
    n = len(hull)
    return all(_cross(hull[i], hull[(i + 1) % n], p) >= 0 for i in range(n))


@dataclass(frozen=True)
class Shape:
    """A finite subset of Z^2 (possibly empty)."""

    points: frozenset

    def __init__(self, points: Iterable = ()):
        object.__setattr__(self, "points", frozenset(vec(p) for p in points))

    @classmethod
    def rect(cls, m: int, n: int, origin=(0, 0)) -> "Shape":
        """The block ``[m] x [n]``: ``m`` columns wide, ``n`` rows tall."""
        ox, oy = origin
        return cls(Vec(ox + i, oy + j) for i in range(m) for j in range(n))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Vec]:
        return iter(self.sorted())

    def __contains__(self, p) -> bool:
        return vec(p) in self.points

    def __bool__(self) -> bool:
        return bool(self.points)

    def __sub__(self, other) -> "Shape":
        other_pts = other.points if isinstance(other, Shape) else frozenset(vec(p) for p in other)
        return Shape(self.points - other_pts)

    def __or__(self, other) -> "Shape":
        return Shape(self.points | Shape(other).points)

    def __le__(self, other) -> bool:
        return self.points <= Shape(other).points

    def __lt__(self, other) -> bool:
        return self.points < Shape(other).points

    def __repr__(self) -> str:
        return f"Shape({[tuple(p) for p in self.sorted()]})"

    def sorted(self) -> list[Vec]:
        return sorted(self.points)

    def translate(self, t) -> "Shape":
        return Shape(Vec(p.x + t[0], p.y + t[1]) for p in self.points)

    def negate(self) -> "Shape":
        return Shape(-p for p in self.points)

    def bbox(self) -> tuple[Vec, Vec]:
        """Inclusive ``(min corner, max corner)``."""
        if not self.points:
            raise ValueError("empty shape has no bounding box")
        xs = [p.x for p in self.points]
        ys = [p.y for p in self.points]
        return Vec(min(xs), min(ys)), Vec(max(xs), max(ys))

    def extent(self) -> tuple[int, int]:
        lo, hi = self.bbox()
        return hi.x - lo.x + 1, hi.y - lo.y + 1

    def normalized(self) -> "Shape":
        """Translate so the bounding box starts at the origin."""
        if not self.points:
            return self
        lo, _ = self.bbox()
        return self.translate(-lo)

    def is_convex(self) -> bool:
        """True iff the shape equals its lattice convex hull."""
        if not self.points:
            return True
        hull = hull_vertices(self.points)
        lo, hi = self.bbox()
        for x in range(lo.x, hi.x + 1):
            for y in range(lo.y, hi.y + 1):
                if _in_hull((x, y), hull) and Vec(x, y) not in self.points:
                    return False
        return True

    def to_json(self) -> list:
        return [[p.x, p.y] for p in self.sorted()]

    @classmethod
    def from_json(cls, data) -> "Shape":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(Vec(int(x), int(y)) for x, y in data)


def as_shape(s) -> Shape:
    return s if isinstance(s, Shape) else Shape(s)


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class Supporting:
    cells: Shape
    kind: str  # "edge" or "vertex"


def edge_or_vertex(shape, u) -> Supporting:
    """Intersection of ``shape`` with its supporting line in direction ``u``."""
    shape = as_shape(shape)
    if not shape:
        raise ValueError("edge_or_vertex of the empty shape")
    u = primitive_of(u)
    levels = {p: line_index(p, u) for p in shape.points}
    low = min(levels.values())
    cells = Shape(p for p, lv in levels.items() if lv == low)
    return Supporting(cells, "vertex" if len(cells) == 1 else "edge")


def shave(shape, u) -> Shape:
    """Remove the edge or vertex of a convex shape in direction ``u``."""
    shape = as_shape(shape)
    if not shape:
        raise ValueError("cannot shave the empty shape")
    if not shape.is_convex():
        raise ValueError("shave requires a convex shape")
    return shape - edge_or_vertex(shape, u).cells


def lines_in_direction(shape, u) -> dict[int, Shape]:
    """Partition of ``shape`` by lines in direction ``u``, keyed by ``n_u``."""
    shape = as_shape(shape)
    u = primitive_of(u)
    groups: dict[int, list[Vec]] = {}
    for p in shape.points:
        groups.setdefault(line_index(p, u), []).append(p)
    return {k: Shape(groups[k]) for k in sorted(groups)}


def fits_in(a, b: Union[Shape, Iterable, Stripe]) -> Optional[Vec]:
    """Some translation ``t`` with ``a + t`` inside ``b``, or None.

    For finite ``b`` every candidate maps the least point of ``a`` onto a
    point of ``b``; candidates are tried in sorted order.  For a stripe only
    the transverse offset matters and the translation is a multiple of the
    stripe's transversal vector.
    """
    a = as_shape(a)
    if not a:
        raise ValueError("fits_in of the empty shape")
    if isinstance(b, Stripe):
        u = b.direction
        levels = [line_index(p, u) for p in a.points]
        if max(levels) - min(levels) >= b.width:
            return None
        t = transversal(u) * (b.lo - min(levels))
        assert all(b.contains(p + t) for p in a.points)
        return t
    b = as_shape(b)
    if not b:
        return None
    anchor = a.sorted()[0]
    for target in b.sorted():
        t = target - anchor
        if all((p + t) in b.points for p in a.points):
            return t
    return None


def convex_hull_edges(support) -> list[Vec]:
    """Directions ``u`` for which ``support`` has an edge (not a vertex).

    Each hull edge is reported in the orientation that keeps the set on its
    right.  A collinear support yields both orientations of its line.
    """
    support = as_shape(support)
    if len(support) < 2:
        raise ValueError("no edges: support has fewer than two points")
    hull = hull_vertices(support.points)
    if len(hull) == 2:
        d = primitive_of(hull[1] - hull[0])
        return sorted([d, -d])
    out = []
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        # ccw traversal keeps the hull on the left; reverse it
        out.append(primitive_of(a - b))
    return sorted(out)


def primitive_directions(max_norm: int) -> list[Vec]:
    """All primitive vectors with sup-norm at most ``max_norm``."""
    return [
        Vec(x, y)
        for x in range(-max_norm, max_norm + 1)
        for y in range(-max_norm, max_norm + 1)
        if (x, y) != (0, 0) and gcd(abs(x), abs(y)) == 1
    ]
