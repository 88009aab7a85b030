"""Laurent polynomials in two variables over Q acting on configurations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Optional

import numpy as np

from .complexity import ScanRange
from .configurations import Spec, Window
from .geometry import Shape, Vec, as_shape, convex_hull_edges, hull_vertices, vec


class LaurentPolynomial:
    """Finitely supported map Z^2 -> Q; ``X^v`` is ``x**v.x * y**v.y``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Mapping] = None):
        c = {}
        for v, a in (coeffs or {}).items():
            a = Fraction(a)
            if a:
                c[vec(v)] = a
        self._c = c

    # construction -------------------------------------------------------
    @classmethod
    def monomial(cls, v, coeff=1) -> "LaurentPolynomial":
        return cls({vec(v): coeff})

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls.monomial((0, 0))

    @classmethod
    def zero(cls) -> "LaurentPolynomial":
        return cls()

    # mapping-ish --------------------------------------------------------
    @property
    def coefficients(self) -> dict:
        return dict(self._c)

    def __getitem__(self, v) -> Fraction:
        return self._c.get(vec(v), Fraction(0))

    def support(self) -> Shape:
        return Shape(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self._c.values())

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._c)
        for v, a in other._c.items():
            out[v] = out.get(v, 0) + a
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({v: -a for v, a in self._c.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict = {}
        for v, a in self._c.items():
            for w, b in other._c.items():
                k = Vec(v.x + w.x, v.y + w.y)
                out[k] = out.get(k, 0) + a * b
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self._c == _coerce(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for v in sorted(self._c):
            a = self._c[v]
            mono = "*".join(s for s in (_pow("x", v.x), _pow("y", v.y)) if s)
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    # normal form ---------------------------------------------------------
    def primitive(self) -> "LaurentPolynomial":
        """Integer multiple with coprime coefficients, least support point positive."""
        if not self._c:
            return self
        den = reduce(lcm, (a.denominator for a in self._c.values()), 1)
        ints = {v: int(a * den) for v, a in self._c.items()}
        g = reduce(gcd, (abs(a) for a in ints.values()))
        lead = min(ints)
        sign = 1 if ints[lead] > 0 else -1
        return LaurentPolynomial({v: sign * a // g for v, a in ints.items()})

    # serialization ---------------------------------------------------------
    def to_json(self) -> list:
        return [{"v": [v.x, v.y], "c": _frac_str(self._c[v])} for v in sorted(self._c)]

    @classmethod
    def from_json(cls, data) -> "LaurentPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({vec(t["v"]): Fraction(str(t["c"])) for t in data})


def _pow(name: str, k: int) -> str:
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def _frac_str(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def _coerce(p) -> LaurentPolynomial:
    if isinstance(p, LaurentPolynomial):
        return p
    if isinstance(p, (int, Fraction)):
        return LaurentPolynomial({Vec(0, 0): p})
    raise TypeError(f"cannot use {type(p).__name__} as a polynomial")


X = LaurentPolynomial.monomial((1, 0))
Y = LaurentPolynomial.monomial((0, 1))


def poly_multiply(f: LaurentPolynomial, g: LaurentPolynomial) -> LaurentPolynomial:
    return f * g


def periodic_product_annihilator(periods: Iterable) -> LaurentPolynomial:
    """Product of ``X^u - 1`` over the given periods."""
    f = LaurentPolynomial.one()
    for u in periods:
        u = vec(u)
        if u == (0, 0):
            raise ValueError("zero period")
        f = f * (LaurentPolynomial.monomial(u) - 1)
    return f


# ---------------------------------------------------------------------------
# action on configurations


def apply_poly(f: LaurentPolynomial, spec: Spec, region: ScanRange) -> Window:
    """``(f c)_v = sum_w f_w c_{v - w}`` for v in ``region``.

    Integer coefficients give an int64 window, otherwise Fractions.
    """
    W, H = region.width, region.height
    if f.is_zero():
        return Window(region.origin, np.zeros((W, H), dtype=np.int64))
    supp = f.support()
    lo, hi = supp.bbox()
    # cells needed: v - w for v in region, w in supp
    o = Vec(region.origin.x - hi.x, region.origin.y - hi.y)
    bw, bh = hi.x - lo.x, hi.y - lo.y
    win = spec.window(o, W + bw, H + bh).values
    integral = f.is_integral()
    out = np.zeros((W, H), dtype=np.int64 if integral else object)
    if not integral:
        out[:] = Fraction(0)
    for w, a in f.coefficients.items():
        ox, oy = hi.x - w.x, hi.y - w.y
        block = win[ox : ox + W, oy : oy + H]
        if integral:
            out += int(a) * block
        else:
            out += a * block.astype(object)
    return Window(region.origin, out)


# ---------------------------------------------------------------------------
# exact linear algebra


def rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    mat = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [a / pv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows: list[list[int]], ncols: int) -> list[list[Fraction]]:
    """Basis of {a : rows @ a = 0}, one vector per free column."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def annihilation_system(spec: Spec, support, region: ScanRange) -> tuple[list[Vec], np.ndarray]:
    """Rows ``[c_{v-w} for w in support]`` for every v in region, deduplicated."""
    supp = as_shape(support).sorted()
    lo, hi = Shape(supp).bbox()
    o = Vec(region.origin.x - hi.x, region.origin.y - hi.y)
    win = spec.window(o, region.width + hi.x - lo.x, region.height + hi.y - lo.y).values
    cols = [
        win[hi.x - w.x : hi.x - w.x + region.width, hi.y - w.y : hi.y - w.y + region.height].reshape(-1)
        for w in supp
    ]
    mat = np.unique(np.stack(cols, axis=1), axis=0)
    return supp, mat


@dataclass(frozen=True)
class AnnihilatorReport:
    polynomial: LaurentPolynomial
    region: ScanRange
    verified_region: ScanRange
    exact: bool
    kernel_dimension: int

    def to_json(self) -> dict:
        return {
            "polynomial": self.polynomial.to_json(),
            "pretty": repr(self.polynomial),
            "region": self.region.to_json(),
            "verified_region": self.verified_region.to_json(),
            "exact": self.exact,
            "kernel_dimension": self.kernel_dimension,
        }


class SpuriousKernel(RuntimeError):
    pass


def kernel_basis(spec: Spec, support, region: ScanRange) -> list[LaurentPolynomial]:
    supp, mat = annihilation_system(spec, support, region)
    basis = nullspace([[int(a) for a in row] for row in mat], len(supp))
    return [LaurentPolynomial(dict(zip(supp, v))).primitive() for v in basis]


def _lex_key(f: LaurentPolynomial):
    return (len(f.support()), [tuple(p) for p in f.support().sorted()], [f[p] for p in f.support().sorted()])


def annihilator_nullspace(spec: Spec, support, region: ScanRange) -> Optional[AnnihilatorReport]:
    """Find f with supp(f) inside ``support`` and f c = 0 on ``region``.

    The homogeneous system is solved exactly over Q.  Among the reduced
    basis vectors the one with the smallest support wins (ties broken
    lexicographically).  The result is re-checked on a region twice as
    large in each dimension.
    """
    support = as_shape(support)
    w, h = support.extent()
    if region.width <= w or region.height <= h:
        raise ValueError("test region must be strictly larger than the support's bounding box")
    basis = kernel_basis(spec, support, region)
    if not basis:
        return None
    f = min(basis, key=_lex_key)
    big = ScanRange(region.origin, 2 * region.width, 2 * region.height)
    if np.any(apply_poly(f, spec, big).values != 0):
        raise SpuriousKernel("spurious kernel, enlarge test region")
    box = spec.period_box()
    exact = box is not None and region.width >= box[0] and region.height >= box[1]
    return AnnihilatorReport(f, region, big, exact, len(basis))


def in_span(f: LaurentPolynomial, basis: list[LaurentPolynomial]) -> bool:
    """Whether f is a Q-combination of ``basis``."""
    pts = sorted(set().union(*(set(b.support().points) for b in basis), f.support().points))
    rows = [[b[p] for b in basis] for p in pts]
    rank = len(rref(rows, len(basis))[1]) if basis else 0
    aug = len(rref([r + [f[p]] for r, p in zip(rows, pts)], len(basis) + 1)[1])
    return aug == rank


def candidate_nonexpansive_directions(f: LaurentPolynomial) -> list[Vec]:
    """Edge directions of the convex hull of supp(f)."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    return convex_hull_edges(f.support())


# ---------------------------------------------------------------------------
# vertex locus accounting


@dataclass(frozen=True)
class VertexLocus:
    R: int
    U: int
    mg: int
    ng: int
    vertex: Vec
    R_shape: Shape
    U_shape: Shape

    def to_json(self) -> dict:
        return {
            "R": self.R,
            "U": self.U,
            "mg": self.mg,
            "ng": self.ng,
            "vertex": list(self.vertex),
            "R_shape": self.R_shape.to_json(),
            "U_shape": self.U_shape.to_json(),
        }


def vertex_locus_counts(g_support, m: int, n: int) -> VertexLocus:
    """Sizes of the locus R of a hull vertex of -supp(g) and its complement U.

    R collects the images of that vertex under every translation of
    -supp(g) that lands inside the m x n block; U is the rest of the block.
    """
    neg = as_shape(g_support).negate()
    if not neg:
        raise ValueError("empty support")
    mg, ng = (e - 1 for e in neg.extent())
    if mg >= m or ng >= n:
        raise ValueError("support too large for rectangle")
    lo, _ = neg.bbox()
    v = hull_vertices(neg.points)[0]
    R = Shape(v - lo + Vec(i, j) for i in range(m - mg) for j in range(n - ng))
    block = Shape.rect(m, n)
    assert R <= block
    U = block - R
    return VertexLocus(len(R), len(U), mg, ng, v, R, U)


# ---------------------------------------------------------------------------
# best-effort symbol relabeling


class Relabeled(Spec):
    """``mapping[c_v]`` for a base spec; symbols missing from the map pass through."""

    kind = "relabeled"

    def __init__(self, base: Spec, mapping: Mapping[int, int]):
        self.base = base
        self.mapping = dict(mapping)

    def _fill(self, xs, ys):
        vals = self.base._fill(xs, ys)
        out = vals.copy()
        for a, b in self.mapping.items():
            out[vals == a] = b
        return out

    def period_box(self):
        return self.base.period_box()

    def default_origin(self, width, height):
        return self.base.default_origin(width, height)

    def to_json(self):
        return {"kind": "relabeled", "base": self.base.to_json(), "mapping": {str(k): v for k, v in self.mapping.items()}}


def relabeling_search(
    spec: Spec, support, region: ScanRange, max_abs: int = 2, limit: int = 5000
) -> Optional[tuple[dict, AnnihilatorReport]]:
    """Try injective integer relabelings of the observed alphabet.

    Returns the first mapping (in a fixed enumeration order) under which an
    annihilator with the given support exists, or None.
    """
    from itertools import islice, permutations

    alphabet = sorted(set(int(a) for a in spec.window(region.origin, region.width, region.height).values.ravel()))
    targets = sorted(range(-max_abs, max_abs + 1), key=lambda t: (abs(t), t))
    for perm in islice(permutations(targets, len(alphabet)), limit):
        mapping = dict(zip(alphabet, perm))
        rel = Relabeled(spec, mapping)
        try:
            rep = annihilator_nullspace(rel, support, region)
        except SpuriousKernel:
            continue
        if rep is not None:
            return mapping, rep
    return None
