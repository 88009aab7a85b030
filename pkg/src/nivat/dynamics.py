"""Periodicity detection, ambiguous stripes, and theorem harnesses.

Everything here works on finite windows.  Absence results (no period, no
witness) always carry the bounds they were searched under.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import ceil, gcd
from typing import Optional, Sequence, Union

import numpy as np

from .complexity import ScanRange, pattern_complexity, rectangle_complexity, unique_rows
from .configurations import (
    Ledrappier,
    PeriodicComponent,
    PeriodicSum,
    Spec,
    Sum,
    values_at,
)
from .generators import Sum2Params, random_periodic_sum
from .geometry import Shape, Stripe, Vec, as_shape, det, fits_in, line_index, primitive_of, transversal, vec
from .poly import apply_poly, periodic_product_annihilator, vertex_locus_counts


class Inconclusive(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# periods


def _component_has_period(comp: PeriodicComponent, v: Vec) -> bool:
    u, w = comp.prim, comp.transversal
    d = det(u, w)
    a = det(v, w) * d
    b = det(u, v) * d
    m = comp.multiplicity
    if a % m:
        return False
    L = comp.values.period
    if L is None:
        return b == 0
    return (b * m) % L == 0


def certifies_period(spec: Spec, v) -> bool:
    """True only when the configuration's structure proves ``c_p == c_{p+v}`` for all p."""
    v = vec(v)
    if v == (0, 0):
        return False
    box = spec.period_box()
    if box is not None:
        # both sides are (P,0)- and (0,Q)-periodic, so one box decides
        a = spec.window((0, 0), box[0], box[1]).values
        b = spec.window(v, box[0], box[1]).values
        return bool(np.array_equal(a, b))
    if isinstance(spec, PeriodicSum):
        return all(_component_has_period(c, v) for c in spec.components)
    if isinstance(spec, Sum):
        return all(certifies_period(t, v) for t in spec.terms)
    if isinstance(spec, Ledrappier):
        L = spec.horizontal_period()
        return L is not None and v.y == 0 and v.x % L == 0
    return False


def half_vectors(max_norm: int) -> list[Vec]:
    """Nonzero vectors up to sign with sup-norm at most ``max_norm``."""
    return [
        Vec(x, y)
        for x in range(0, max_norm + 1)
        for y in range(-max_norm, max_norm + 1)
        if (x > 0 or y > 0) and max(abs(x), abs(y)) <= max_norm
    ]


def shift_agreement(arr: np.ndarray, v) -> Optional[float]:
    """Fraction of overlap cells p with arr[p] == arr[p + v]."""
    W, H = arr.shape
    vx, vy = v
    if abs(vx) >= W or abs(vy) >= H:
        return None
    a = arr[max(0, -vx) : W - max(0, vx), max(0, -vy) : H - max(0, vy)]
    b = arr[max(0, vx) : max(0, vx) + a.shape[0], max(0, vy) : max(0, vy) + a.shape[1]]
    return float(np.mean(a == b))


@dataclass(frozen=True)
class PeriodReport:
    candidates: tuple  # ((vec, agreement), ...) best first
    certified: tuple
    window: ScanRange
    max_norm: int

    @property
    def full_agreement(self) -> list[Vec]:
        return [v for v, a in self.candidates if a == 1.0]

    @property
    def periodic(self) -> bool:
        return bool(self.certified) or bool(self.full_agreement)

    def to_json(self, top: int = 20) -> dict:
        return {
            "window": self.window.to_json(),
            "max_norm": self.max_norm,
            "certified": [list(v) for v in self.certified],
            "full_agreement": [list(v) for v in self.full_agreement],
            "top_candidates": [{"v": list(v), "agreement": a} for v, a in self.candidates[:top]],
        }


def detect_periods(spec: Spec, window: ScanRange, max_norm: int, arr: Optional[np.ndarray] = None) -> PeriodReport:
    if arr is None:
        arr = spec.window(window.origin, window.width, window.height).values
    cands = []
    certified = []
    for v in half_vectors(max_norm):
        a = shift_agreement(arr, v)
        if a is not None:
            cands.append((v, a))
        if certifies_period(spec, v):
            certified.append(v)
    cands.sort(key=lambda t: (-t[1], t[0].norm_inf(), t[0]))
    certified.sort(key=lambda v: (v.norm_inf(), v))
    return PeriodReport(tuple(cands), tuple(certified), window, max_norm)


# ---------------------------------------------------------------------------
# ambiguous stripes


@dataclass(frozen=True)
class AmbiguityWitness:
    direction: Vec
    width: int
    length: int
    mode: str  # "shift" (two positions of one configuration) or "pair" (two configurations)
    positions: tuple  # (p_a, p_b)
    boundary: tuple  # offsets of inner-boundary cells
    interior: tuple  # offsets of interior cells
    boundary_values: tuple  # (values_a, values_b)
    interior_values: tuple

    def validate(self) -> bool:
        ia, ib = self.interior_values
        ba, bb = self.boundary_values
        return tuple(ia) == tuple(ib) and tuple(ba) != tuple(bb)

    def to_json(self) -> dict:
        return {
            "direction": list(self.direction),
            "width": self.width,
            "length": self.length,
            "mode": self.mode,
            "positions": [list(p) for p in self.positions],
            "boundary": [list(p) for p in self.boundary],
            "interior": [list(p) for p in self.interior],
            "boundary_values": [list(v) for v in self.boundary_values],
            "interior_values": [list(v) for v in self.interior_values],
            "valid": self.validate(),
        }


def stripe_segment(u, width: int, length: int) -> tuple[list[Vec], list[Vec]]:
    """Offsets ``a*u + b*t`` with t the unit transversal: (boundary b=0, interior b>0)."""
    u = primitive_of(u)
    t = transversal(u)
    boundary = [u * a for a in range(length)]
    interior = [u * a + t * b for b in range(1, width) for a in range(length)]
    return boundary, interior


def _segment_values(spec: Spec, positions: np.ndarray, offsets: list[Vec]) -> np.ndarray:
    if not offsets:
        return np.zeros((len(positions), 0), dtype=np.int64)
    offs = np.asarray(offsets, dtype=np.int64)
    pts = (positions[:, None, :] + offs[None, :, :]).reshape(-1, 2)
    return values_at(spec, pts).reshape(len(positions), len(offsets))


def _positions(search: ScanRange) -> np.ndarray:
    xs = np.arange(search.origin.x, search.origin.x + search.width)
    ys = np.arange(search.origin.y, search.origin.y + search.height)
    return np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)


def ambiguity_witness(
    specs: Union[Spec, Sequence[Spec]], u, width: int, length: int, search: ScanRange
) -> Optional[AmbiguityWitness]:
    """Two stripe segments with equal interiors and different inner boundaries.

    With one spec, the segments are taken at two positions of the same
    configuration.  With two specs, both are read at the same position.
    """
    if width < 1 or length < 1:
        raise ValueError("width and length must be >= 1")
    u = primitive_of(u)
    boundary, interior = stripe_segment(u, width, length)
    pos = _positions(search)
    if isinstance(specs, Spec):
        spec = specs
        bvals = _segment_values(spec, pos, boundary)
        ivals = _segment_values(spec, pos, interior)
        first: dict = {}
        for i in range(len(pos)):
            ik, bk = ivals[i].tobytes(), bvals[i].tobytes()
            if ik not in first:
                first[ik] = (i, bk)
            elif first[ik][1] != bk:
                j = first[ik][0]
                return AmbiguityWitness(
                    u, width, length, "shift",
                    (Vec(*map(int, pos[j])), Vec(*map(int, pos[i]))),
                    tuple(boundary), tuple(interior),
                    (tuple(map(int, bvals[j])), tuple(map(int, bvals[i]))),
                    (tuple(map(int, ivals[j])), tuple(map(int, ivals[i]))),
                )
        return None
    a, b = specs
    ba, bb = _segment_values(a, pos, boundary), _segment_values(b, pos, boundary)
    ia, ib = _segment_values(a, pos, interior), _segment_values(b, pos, interior)
    hit = np.all(ia == ib, axis=1) & np.any(ba != bb, axis=1)
    idx = np.flatnonzero(hit)
    if not len(idx):
        return None
    i = int(idx[0])
    p = Vec(*map(int, pos[i]))
    return AmbiguityWitness(
        u, width, length, "pair", (p, p), tuple(boundary), tuple(interior),
        (tuple(map(int, ba[i])), tuple(map(int, bb[i]))),
        (tuple(map(int, ia[i])), tuple(map(int, ib[i]))),
    )


def ledrappier_congruence(values: np.ndarray) -> float:
    """Fraction of interior cells with c[x,y] == c[x,y+1] + c[x+1,y+1] mod 2."""
    lhs = values[:-1, :-1]
    rhs = (values[:-1, 1:] + values[1:, 1:]) % 2
    return float(np.mean(lhs % 2 == rhs))


# ---------------------------------------------------------------------------
# two-component stripe analysis


def parallelogram(u1, u2) -> Shape:
    """Lattice points ``a*u1 + b*u2`` with ``a, b`` in [0, 1)."""
    d = det(u1, u2)
    corners = [Vec(0, 0), vec(u1), vec(u2), vec(u1) + vec(u2)]
    xs = [c.x for c in corners]
    ys = [c.y for c in corners]
    pts = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            a = Fraction(det((x, y), u2), d)
            b = Fraction(det(u1, (x, y)), d)
            if 0 <= a < 1 and 0 <= b < 1:
                pts.append((x, y))
    return Shape(pts)


@dataclass(frozen=True)
class StripeRepeatReport:
    u1: Vec
    u2: Vec
    scale: int
    parallelogram_size: int
    j: int
    j_prime: int
    propagation_residual_max: int
    propagation_samples: int
    stripe_equal_steps: int
    stripe_equal: bool
    stripe_period: Vec

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("u1", "u2", "stripe_period"):
            d[k] = list(d[k])
        return d


def stripe_repeat_analysis(spec: PeriodicSum, m: int, n: int, J: int, steps: int = 4) -> StripeRepeatReport:
    """Pigeonhole repeat of parallelogram patterns along the second period."""
    if not isinstance(spec, PeriodicSum) or len(spec.components) != 2:
        raise ValueError("stripe_repeat_analysis needs a periodic sum of exactly two components")
    u1, u2 = spec.components[0].period, spec.components[1].period
    if det(u1, u2) == 0:
        raise ValueError("dependent periods: the sum is already periodic")
    if line_index(u2, u1) < 0:
        u2 = -u2
    rect = Shape.rect(m, n)
    k = 1
    while True:
        D = parallelogram(u1 * k, u2 * k)
        if fits_in(rect, D) is not None:
            break
        k += 1
    U1, U2 = u1 * k, u2 * k
    pts = D.sorted()
    pats = {}
    rep = None
    for j in range(J + 1):
        vals = values_at(spec, [p + U2 * j for p in pts]).tobytes()
        if vals in pats:
            rep = (pats[vals], j)
            break
        pats[vals] = j
    if rep is None:
        raise Inconclusive(f"no repeated parallelogram pattern for j <= {J}; increase J")
    j, jp = rep

    def c(points):
        return values_at(spec, points).astype(np.int64)

    res = (c([p + U1 + U2 * j for p in pts]) - c([p + U1 + U2 * jp for p in pts])) - (
        c([p + U2 * j for p in pts]) - c([p + U2 * jp for p in pts])
    )
    equal = all(
        np.array_equal(c([p + U1 * i + U2 * j for p in pts]), c([p + U1 * i + U2 * jp for p in pts]))
        for i in range(-steps, steps + 1)
    )
    return StripeRepeatReport(
        u1, u2, k, len(D), j, jp, int(np.abs(res).max()), len(pts), 2 * steps + 1, equal, U2 * (jp - j)
    )


# ---------------------------------------------------------------------------
# periodic stripe extension


@dataclass(frozen=True)
class ExtensionReport:
    gate_passed: bool
    reason: str
    complexity: int
    domain_size: int
    interior_agreement: Optional[float]
    window_agreement: Optional[float]

    @property
    def extends(self) -> bool:
        return self.gate_passed and self.window_agreement == 1.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["extends"] = self.extends
        return d


def stripe_periodicity_extension_check(
    spec: Spec, D, stripe: Stripe, u, candidate_period, window: ScanRange
) -> ExtensionReport:
    """Empirical check that a periodic stripe interior forces global periodicity."""
    D = as_shape(D)
    u = primitive_of(u)
    v = vec(candidate_period)
    rep = pattern_complexity(spec, D, window)

    def fail(reason, ia=None):
        return ExtensionReport(False, reason, rep.count, len(D), ia, None)

    if stripe.direction != u and stripe.direction != -u:
        return fail("stripe is not in direction u")
    if v == (0, 0) or det(v, u) != 0:
        return fail("candidate period is not in direction u")
    if rep.count > len(D):
        return fail(f"P(D) = {rep.count} > |D| = {len(D)}")
    if fits_in(D, stripe) is None:
        return fail("D does not fit in the stripe")
    arr = spec.window(window.origin, window.width, window.height).values
    xs = np.arange(window.origin.x, window.origin.x + window.width)
    ys = np.arange(window.origin.y, window.origin.y + window.height)
    n = xs[:, None] * stripe.direction.y - stripe.direction.x * ys[None, :]
    inside = (n > stripe.lo) & (n < stripe.hi)
    W, H = arr.shape
    sx, sy = v
    a_sl = (slice(max(0, -sx), W - max(0, sx)), slice(max(0, -sy), H - max(0, sy)))
    b_sl = (slice(max(0, sx), W - max(0, -sx)), slice(max(0, sy), H - max(0, -sy)))
    if a_sl[0].start >= a_sl[0].stop or a_sl[1].start >= a_sl[1].stop:
        return fail("window too small for the candidate period")
    mask = inside[a_sl] & inside[b_sl]
    if not mask.any():
        return fail("stripe interior has no checkable cells in the window")
    eq = arr[a_sl] == arr[b_sl]
    ia = float(eq[mask].mean())
    if ia < 1.0:
        return fail("stripe interior is not periodic with the candidate period", ia)
    return ExtensionReport(True, "ok", rep.count, len(D), ia, float(eq.mean()))


# ---------------------------------------------------------------------------
# harnesses


@dataclass
class TrialResult:
    index: int
    spec: dict
    low_pairs: list
    periodic: bool
    period: Optional[list]
    exact: bool
    outcome: str  # "low+periodic", "corollary", "high+periodic", "violation"


def _trial(args) -> TrialResult:
    index, spec, m, n, window, max_norm = args
    low = []
    exact = True
    for mm in range(1, m + 1):
        for nn in range(1, n + 1):
            r = rectangle_complexity(spec, mm, nn, window)
            exact = exact and r.exact
            if r.count <= mm * nn:
                low.append([mm, nn, r.count])
    period = None
    for v in half_vectors(max_norm):
        if certifies_period(spec, v):
            period = v
            break
    if period is None:
        rep = detect_periods(spec, window, max_norm)
        if rep.full_agreement:
            period = rep.full_agreement[0]
    periodic = period is not None
    if low and periodic:
        outcome = "low+periodic"
    elif low:
        outcome = "violation"
    elif periodic:
        outcome = "high+periodic"
    else:
        outcome = "corollary"
    return TrialResult(index, spec.to_json(), low, periodic, list(period) if period else None, exact, outcome)


def nivat_sum2_harness(
    trials: int,
    m: int,
    n: int,
    seed: int = 0,
    params: Sum2Params = Sum2Params(),
    window: Optional[ScanRange] = None,
    max_norm: int = 36,
    workers: int = 1,
) -> dict:
    """Random two-component periodic sums against Theorem-1 predictions.

    A trial whose observed P(m', n') <= m'n' for some m' <= m, n' <= n must
    show a period within ``max_norm``; a trial with no such period must have
    P(m', n') >= m'n' + 1 everywhere.  Both failures are the same event and
    are listed as violations.
    """
    rng = np.random.default_rng(seed)
    window = window or ScanRange(Vec(-60, -60), 120, 120)
    specs = [random_periodic_sum(rng, 2, params) for _ in range(trials)]
    jobs = [(i, s, m, n, window, max_norm) for i, s in enumerate(specs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_trial, jobs))
    else:
        results = [_trial(j) for j in jobs]
    counts: dict = {"low+periodic": 0, "high+periodic": 0, "corollary": 0, "violation": 0}
    for r in results:
        counts[r.outcome] += 1
    return {
        "trials": trials,
        "rect": [m, n],
        "seed": seed,
        "max_norm": max_norm,
        "window": window.to_json(),
        "params": asdict(params),
        "counts": counts,
        "violations": [asdict(r) for r in results if r.outcome == "violation"],
        "results": [asdict(r) for r in results],
    }


def corollary_check(spec: Spec, max_m: int, max_n: int, window: ScanRange) -> dict:
    """Observed P(m, n) against mn + 1; window counts are lower bounds."""
    rows = []
    for mm in range(1, max_m + 1):
        for nn in range(1, max_n + 1):
            r = rectangle_complexity(spec, mm, nn, window)
            rows.append({"m": mm, "n": nn, "count": r.count, "bound": mm * nn + 1, "ok": r.count >= mm * nn + 1, "exact": r.exact})
    return {"window": window.to_json(), "rows": rows, "all_ok": all(r["ok"] for r in rows)}


def block_matrix(arr: np.ndarray, m: int, n: int) -> np.ndarray:
    """Rows are the m x n blocks of ``arr`` at every position where they fit."""
    W, H = arr.shape
    pw, ph = W - m + 1, H - n + 1
    cols = [arr[i : i + pw, j : j + ph].reshape(-1) for i in range(m) for j in range(n)]
    return np.stack(cols, axis=1)


def mn_over_2_harness(spec: Spec, m: int, n: int, g_periods: Sequence, window: Optional[ScanRange] = None) -> dict:
    """Numerical bookkeeping of the P <= mn/2 argument for a known decomposition.

    ``g`` is the product of ``X^u - 1`` over ``g_periods``; ``c' = g c``.
    Every (m - m_g) x (n - n_g) block of c' is computed from an m x n block
    of c, so on matched positions the c'-count cannot exceed the c-count.
    """
    g = periodic_product_annihilator(g_periods)
    locus = vertex_locus_counts(g.support(), m, n)
    mg, ng = locus.mg, locus.ng
    _, hi = g.support().bbox()
    box = spec.period_box()
    if box is not None:
        pos, exact = ScanRange(Vec(0, 0), box[0], box[1]), True
    else:
        pos, exact = window or ScanRange(spec.default_origin(3 * m, 3 * n), 3 * m, 3 * n), False
    c_arr = spec.window(pos.origin, pos.width + m - 1, pos.height + n - 1).values
    cp_region = ScanRange(pos.origin + hi, pos.width + m - mg - 1, pos.height + n - ng - 1)
    cp_arr = apply_poly(g, spec, cp_region).values
    c_blocks = block_matrix(c_arr, m, n)
    cp_blocks = block_matrix(cp_arr, m - mg, n - ng)
    assert len(c_blocks) == len(cp_blocks)
    # the map c-block -> c'-block must be a function
    image: dict = {}
    determined = True
    for a, b in zip(c_blocks, cp_blocks):
        ka, kb = a.tobytes(), b.tobytes()
        if image.setdefault(ka, kb) != kb:
            determined = False
            break
    P_c = len(unique_rows(c_blocks))
    P_cp = len(unique_rows(cp_blocks))
    reduced = (m - mg) * (n - ng)
    mn = m * n
    P_U = pattern_complexity(spec, locus.U_shape, pos if not exact else None).count if locus.U else 1
    return {
        "g": g.to_json(),
        "g_pretty": repr(g),
        "m": m,
        "n": n,
        "mg": mg,
        "ng": ng,
        "R": locus.R,
        "U": locus.U,
        "partition_ok": locus.R + locus.U == mn,
        "half_ok": max(locus.R, locus.U) >= ceil(mn / 2),
        "exact": exact,
        "scan": pos.to_json(),
        "P_c_mn": P_c,
        "P_cprime_reduced": P_cp,
        "reduced_area": reduced,
        "determined": determined,
        "inequality_c_ge_cprime": P_c >= P_cp,
        "cprime_exceeds_reduced_area": P_cp > reduced,
        "P_c_U": P_U,
        "P_c_mn_ge_P_c_U": P_c >= P_U,
        "P_c_U_exceeds_U": P_U > locus.U,
        "P_c_exceeds_half": P_c > mn / 2,
    }
