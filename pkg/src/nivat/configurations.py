"""Finite descriptions of infinite two-dimensional configurations.

Every spec can be evaluated at a single point (``evaluate``) or materialized
on a rectangular window (``window``).  Window arrays are indexed
``values[x - origin.x, y - origin.y]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Optional, Sequence, Union

import numpy as np

from .geometry import Vec, det, primitive_of, vec


class EvaluationError(ValueError):
    """Raised when a window leaves the finite description of a spec."""


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# one-dimensional words


@dataclass(frozen=True)
class PeriodicWord:
    word: tuple

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(s) for s in self.word))
        if not self.word:
            raise ValueError("periodic word must be non-empty")

    @property
    def period(self) -> Optional[int]:
        return len(self.word)

    def take(self, idx: np.ndarray) -> np.ndarray:
        arr = np.asarray(self.word, dtype=np.int64)
        return arr[np.mod(idx, len(arr))]

    def to_json(self) -> dict:
        return {"kind": "periodic", "word": list(self.word)}


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """``...left left | center | right right...`` with center starting at 0."""

    left: tuple
    center: tuple
    right: tuple

    def __post_init__(self):
        for name in ("left", "center", "right"):
            object.__setattr__(self, name, tuple(int(s) for s in getattr(self, name)))
        if not self.left or not self.right:
            raise ValueError("left and right words must be non-empty")

    @property
    def period(self) -> Optional[int]:
        return None

    def take(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty(idx.shape, dtype=np.int64)
        left = np.asarray(self.left, dtype=np.int64)
        right = np.asarray(self.right, dtype=np.int64)
        nc = len(self.center)
        neg = idx < 0
        out[neg] = left[np.mod(idx[neg], len(left))]
        hi = idx >= nc
        out[hi] = right[np.mod(idx[hi] - nc, len(right))]
        mid = ~neg & ~hi
        if nc:
            out[mid] = np.asarray(self.center, dtype=np.int64)[idx[mid]]
        return out

    def to_json(self) -> dict:
        return {
            "kind": "eventually-periodic",
            "left": list(self.left),
            "center": list(self.center),
            "right": list(self.right),
        }


def fibonacci_word(length: int) -> list[int]:
    """Prefix of the Fibonacci word (fixed point of 0 -> 01, 1 -> 0)."""
    w = [0]
    while len(w) < length:
        w = [s for c in w for s in ((0, 1) if c == 0 else (0,))]
    return w[:length]


@dataclass(frozen=True)
class FibonacciWord:
    """The substitution prefix after ``depth`` expansions, defined on [0, len)."""

    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("fibonacci depth must be >= 1")

    @property
    def period(self) -> Optional[int]:
        return None

    @cached_property
    def prefix(self) -> np.ndarray:
        w = [0]
        for _ in range(self.depth):
            w = [s for c in w for s in ((0, 1) if c == 0 else (0,))]
        return np.asarray(w, dtype=np.int64)

    def take(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= len(self.prefix)):
            raise EvaluationError(
                f"window exceeds finite description: fibonacci prefix has "
                f"{len(self.prefix)} symbols, index range [{idx.min()}, {idx.max()}]"
            )
        return self.prefix[idx]

    def to_json(self) -> dict:
        return {"kind": "fibonacci", "depth": self.depth}


OneDimSpec = Union[PeriodicWord, EventuallyPeriodicWord, FibonacciWord]


def fibonacci_depth_for(length: int) -> int:
    depth, n_prev, n = 1, 1, 2
    while n < length:
        depth, n_prev, n = depth + 1, n, n + n_prev
    return depth


def word_from_json(d: dict) -> OneDimSpec:
    kind = d["kind"]
    if kind == "periodic":
        return PeriodicWord(tuple(d["word"]))
    if kind == "eventually-periodic":
        return EventuallyPeriodicWord(tuple(d["left"]), tuple(d.get("center", ())), tuple(d["right"]))
    if kind in ("fibonacci", "fibonacci-sturmian"):
        return FibonacciWord(int(d["depth"]))
    raise ValueError(f"unknown word kind {kind!r}")


# ---------------------------------------------------------------------------
# configuration specs


@dataclass(frozen=True)
class Window:
    origin: Vec
    values: np.ndarray

    @property
    def width(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, p):
        return self.values[p[0] - self.origin.x, p[1] - self.origin.y]

    def descriptor(self) -> dict:
        return {"origin": list(self.origin), "width": self.width, "height": self.height}

    def __eq__(self, other):
        return (
            isinstance(other, Window)
            and self.origin == other.origin
            and self.values.shape == other.values.shape
            and bool(np.all(self.values == other.values))
        )


class Spec:
    """Base class; subclasses implement ``_fill``."""

    kind: str = ""

    def _fill(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def window(self, origin, width: int, height: int) -> Window:
        if width <= 0 or height <= 0:
            raise ValueError("window dimensions must be positive")
        origin = vec(origin)
        xs = np.arange(origin.x, origin.x + width, dtype=np.int64)
        ys = np.arange(origin.y, origin.y + height, dtype=np.int64)
        vals = self._fill(xs, ys)
        return Window(origin, vals)

    def evaluate(self, p) -> int:
        p = vec(p)
        return int(self.window(p, 1, 1).values[0, 0])

    def period_box(self) -> Optional[tuple[int, int]]:
        """``(P, Q)`` such that (P,0) and (0,Q) are structural periods."""
        return None

    def default_origin(self, width: int, height: int) -> Vec:
        """Where to put a ``width x height`` scan block by default."""
        return Vec(-(width // 2), -(height // 2))

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Spec):
    value: int = 0
    kind = "constant"

    def _fill(self, xs, ys):
        return np.full((len(xs), len(ys)), int(self.value), dtype=np.int64)

    def period_box(self):
        return (1, 1)

    def to_json(self):
        return {"kind": "constant", "value": int(self.value)}


@dataclass(frozen=True)
class Checkerboard(Spec):
    kind = "checkerboard"

    def _fill(self, xs, ys):
        return np.mod(xs[:, None] + ys[None, :], 2)

    def period_box(self):
        return (2, 2)

    def to_json(self):
        return {"kind": "checkerboard"}


@dataclass(frozen=True)
class Cross(Spec):
    kind = "cross"

    def _fill(self, xs, ys):
        return ((xs[:, None] == 0) | (ys[None, :] == 0)).astype(np.int64)

    def to_json(self):
        return {"kind": "cross"}


@dataclass(frozen=True)
class DoublyPeriodic(Spec):
    """Value at (x, y) is ``cell[x mod p][y mod q]``."""

    cell: tuple
    kind = "doubly-periodic"

    def __post_init__(self):
        cell = tuple(tuple(int(s) for s in col) for col in self.cell)
        if not cell or not cell[0] or len({len(c) for c in cell}) != 1:
            raise ValueError("cell must be a non-empty p x q array")
        object.__setattr__(self, "cell", cell)

    @property
    def p(self) -> int:
        return len(self.cell)

    @property
    def q(self) -> int:
        return len(self.cell[0])

    def _fill(self, xs, ys):
        arr = np.asarray(self.cell, dtype=np.int64)
        return arr[np.ix_(np.mod(xs, self.p), np.mod(ys, self.q))]

    def period_box(self):
        return (self.p, self.q)

    def to_json(self):
        return {"kind": "doubly-periodic", "p": self.p, "q": self.q, "cell": [list(c) for c in self.cell]}


def default_transversal(prim: Vec) -> Vec:
    """A ``w`` completing ``prim`` to a basis; the shortest such, ties by order."""
    from .geometry import transversal

    w = transversal(prim)  # line_index(w, prim) == 1
    # reduce w modulo prim to make it short
    best = None
    for k in range(-abs(w.x) - abs(w.y) - 2, abs(w.x) + abs(w.y) + 3):
        cand = w + prim * k
        key = (abs(cand.x) + abs(cand.y), -cand.x, -cand.y)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


@dataclass(frozen=True)
class PeriodicComponent:
    """A configuration periodic with period ``period = m * prim``.

    Each point decomposes uniquely as ``p = a*prim + b*w``; the value is
    ``values[b*m + (a mod m)]``, so for ``m == 1`` the component is constant
    along lines in direction ``prim`` and reads ``values[b]`` across them.
    """

    period: Vec
    values: OneDimSpec
    transversal: Optional[Vec] = None

    def __post_init__(self):
        object.__setattr__(self, "period", vec(self.period))
        prim = primitive_of(self.period)
        w = default_transversal(prim) if self.transversal is None else vec(self.transversal)
        if abs(det(prim, w)) != 1:
            raise ValueError(f"transversal {tuple(w)} does not complete {tuple(prim)} to a basis")
        object.__setattr__(self, "transversal", w)

    @property
    def prim(self) -> Vec:
        return primitive_of(self.period)

    @property
    def multiplicity(self) -> int:
        p = self.period
        return gcd(abs(p.x), abs(p.y))

    def coords(self, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``(a, b)`` arrays with ``(x, y) = a*prim + b*w`` on the grid."""
        u, w = self.prim, self.transversal
        d = det(u, w)
        X, Y = xs[:, None], ys[None, :]
        a = (X * w.y - Y * w.x) * d
        b = (u.x * Y - u.y * X) * d
        return a, b

    def index(self, xs, ys) -> np.ndarray:
        a, b = self.coords(xs, ys)
        m = self.multiplicity
        return b * m + np.mod(a, m)

    def fill(self, xs, ys) -> np.ndarray:
        idx = self.index(xs, ys)
        return self.values.take(idx.ravel()).reshape(idx.shape)

    def period_lattice(self) -> list[Vec]:
        """Generators of a sublattice of this component's periods."""
        L = self.values.period
        if L is None:
            return [self.period]
        return [self.period, self.transversal * L]

    def to_json(self) -> dict:
        return {
            "period": list(self.period),
            "transversal": list(self.transversal),
            "values": self.values.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "PeriodicComponent":
        t = d.get("transversal")
        return cls(vec(d["period"]), word_from_json(d["values"]), vec(t) if t is not None else None)


def _axis_box(gens: list[Vec]) -> Optional[tuple[int, int]]:
    """Smallest (P, Q) with (P,0), (0,Q) in the lattice spanned by ``gens``."""
    if len(gens) < 2:
        return None
    a, b = gens[0], gens[1]
    d = det(a, b)
    if d == 0:
        return None
    # (x, 0) = s*a + t*b -> s = x*b.y/d, t = -x*a.y/d must be integers
    P = _lcm(abs(d) // gcd(abs(d), abs(b.y)) if b.y else 1, abs(d) // gcd(abs(d), abs(a.y)) if a.y else 1)
    Q = _lcm(abs(d) // gcd(abs(d), abs(b.x)) if b.x else 1, abs(d) // gcd(abs(d), abs(a.x)) if a.x else 1)
    return P, Q


@dataclass(frozen=True)
class PeriodicSum(Spec):
    components: tuple
    kind = "periodic-sum"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def _fill(self, xs, ys):
        out = np.zeros((len(xs), len(ys)), dtype=np.int64)
        for comp in self.components:
            out += comp.fill(xs, ys)
        return out

    def period_box(self):
        P, Q = 1, 1
        for comp in self.components:
            box = _axis_box(comp.period_lattice())
            if box is None:
                return None
            P, Q = _lcm(P, box[0]), _lcm(Q, box[1])
        return P, Q

    def default_origin(self, width, height):
        if any(isinstance(c.values, FibonacciWord) for c in self.components):
            return Vec(0, 0)
        return super().default_origin(width, height)

    def to_json(self):
        return {"kind": "periodic-sum", "components": [c.to_json() for c in self.components]}


@dataclass(frozen=True)
class Ledrappier(Spec):
    """Rows below ``seed_y`` forced by c[x, y] = c[x, y+1] + c[x+1, y+1] mod 2."""

    top_row: OneDimSpec
    seed_y: int = 0
    kind = "ledrappier"

    def _fill(self, xs, ys):
        y_top = int(ys.max())
        if y_top > self.seed_y:
            raise EvaluationError(
                f"window exceeds finite description: ledrappier rows above seed row "
                f"y={self.seed_y} are not determined"
            )
        depth = self.seed_y - int(ys.min())
        x0, w = int(xs[0]), len(xs)
        row = np.mod(self.top_row.take(np.arange(x0, x0 + w + depth, dtype=np.int64)), 2)
        rows = {self.seed_y: row}
        for y in range(self.seed_y - 1, int(ys.min()) - 1, -1):
            row = row[:-1] ^ row[1:]
            rows[y] = row
        out = np.empty((w, len(ys)), dtype=np.int64)
        for j, y in enumerate(ys):
            out[:, j] = rows[int(y)][:w]
        return out

    def evaluate(self, p):
        # Lucas: C(d, k) is odd iff k is a submask of d
        x, y = vec(p)
        if y > self.seed_y:
            raise EvaluationError("window exceeds finite description: above ledrappier seed row")
        d = self.seed_y - y
        k, total = d, 0
        while True:
            total += int(self.top_row.take(np.array([x + k]))[0]) % 2
            if k == 0:
                break
            k = (k - 1) & d
        return total % 2

    def period_box(self):
        return None

    def horizontal_period(self) -> Optional[int]:
        return self.top_row.period

    def default_origin(self, width, height):
        return Vec(-(width // 2), self.seed_y - height + 1)

    def to_json(self):
        return {"kind": "ledrappier", "top_row": self.top_row.to_json(), "seed_y": self.seed_y}


def ledrappier_complement(spec: Ledrappier) -> Ledrappier:
    """Same rule with the seed row complemented; rows below are unchanged."""
    top = spec.top_row
    if isinstance(top, PeriodicWord):
        new = PeriodicWord(tuple(1 - (s % 2) for s in top.word))
    elif isinstance(top, EventuallyPeriodicWord):
        flip = lambda w: tuple(1 - (s % 2) for s in w)  # noqa: E731
        new = EventuallyPeriodicWord(flip(top.left), flip(top.center), flip(top.right))
    else:
        raise ValueError("complement supported for periodic and eventually-periodic seeds")
    return Ledrappier(new, spec.seed_y)


@dataclass(frozen=True)
class Sum(Spec):
    """Pointwise sum of arbitrary specs."""

    terms: tuple
    kind = "sum"

    def _fill(self, xs, ys):
        out = np.zeros((len(xs), len(ys)), dtype=np.int64)
        for t in self.terms:
            out += t._fill(xs, ys)
        return out

    def period_box(self):
        P, Q = 1, 1
        for t in self.terms:
            box = t.period_box()
            if box is None:
                return None
            P, Q = _lcm(P, box[0]), _lcm(Q, box[1])
        return P, Q

    def default_origin(self, width, height):
        return self.terms[0].default_origin(width, height)

    def to_json(self):
        return {"kind": "sum", "terms": [t.to_json() for t in self.terms]}


ConfigurationSpec = Spec


def as_components(spec: Spec) -> Optional[list[PeriodicComponent]]:
    """Rewrite a periodic spec as periodic components, if it is one."""
    if isinstance(spec, PeriodicSum):
        return list(spec.components)
    if isinstance(spec, Constant):
        return [PeriodicComponent(Vec(1, 0), PeriodicWord((spec.value,)), Vec(0, 1))]
    if isinstance(spec, (DoublyPeriodic, Checkerboard)):
        cell = spec.cell if isinstance(spec, DoublyPeriodic) else ((0, 1), (1, 0))
        p, q = len(cell), len(cell[0])
        # index = y*p + (x mod p), read modulo p*q
        word = tuple(cell[i][j] for j in range(q) for i in range(p))
        return [PeriodicComponent(Vec(p, 0), PeriodicWord(word), Vec(0, 1))]
    return None


def sum_configs(a: Spec, b: Spec) -> Spec:
    ca, cb = as_components(a), as_components(b)
    if ca is not None and cb is not None:
        return PeriodicSum(tuple(ca + cb))
    return Sum((a, b))


def shift(w: Window, t) -> Window:
    """Translate a window's origin by ``t``; contents are unchanged."""
    return Window(w.origin + vec(t), w.values)


def spec_from_json(d: dict) -> Spec:
    kind = d["kind"]
    if kind == "constant":
        return Constant(int(d.get("value", d.get("s", 0))))
    if kind == "checkerboard":
        return Checkerboard()
    if kind == "cross":
        return Cross()
    if kind == "doubly-periodic":
        spec = DoublyPeriodic(tuple(tuple(c) for c in d["cell"]))
        if ("p" in d and d["p"] != spec.p) or ("q" in d and d["q"] != spec.q):
            raise ValueError("doubly-periodic p/q disagree with cell dimensions")
        return spec
    if kind == "periodic-sum":
        return PeriodicSum(tuple(PeriodicComponent.from_json(c) for c in d["components"]))
    if kind == "ledrappier":
        return Ledrappier(word_from_json(d["top_row"]), int(d.get("seed_y", 0)))
    if kind == "sum":
        return Sum(tuple(spec_from_json(t) for t in d["terms"]))
    raise ValueError(f"unknown configuration kind {kind!r}")


# ---------------------------------------------------------------------------
# helpers used across modules


def fibonacci_rows(length: int = 400) -> PeriodicSum:
    """Every row equals the Fibonacci word: value at (x, y) is s[x]."""
    w = FibonacciWord(fibonacci_depth_for(length))
    return PeriodicSum((PeriodicComponent(Vec(0, 1), w, Vec(1, 0)),))


def fibonacci_cross_sum(length: int = 400) -> PeriodicSum:
    """s[y] + s[x]: a (1,0)-periodic plus a (0,1)-periodic Sturmian component."""
    w = FibonacciWord(fibonacci_depth_for(length))
    return PeriodicSum(
        (
            PeriodicComponent(Vec(1, 0), w, Vec(0, 1)),
            PeriodicComponent(Vec(0, 1), w, Vec(1, 0)),
        )
    )


def values_at(spec: Spec, points) -> np.ndarray:
    """Evaluate ``spec`` on an arbitrary point list via one bounding window."""
    pts = np.asarray([tuple(p) for p in points], dtype=np.int64).reshape(-1, 2)
    if len(pts) == 0:
        return np.zeros(0, dtype=np.int64)
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    win = spec.window((int(x0), int(y0)), int(x1 - x0 + 1), int(y1 - y0 + 1))
    return win.values[pts[:, 0] - x0, pts[:, 1] - y0]
