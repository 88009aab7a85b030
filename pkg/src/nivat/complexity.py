"""Pattern enumeration and pattern complexity over arbitrary finite shapes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .configurations import Spec
from .geometry import Shape, Vec, as_shape, vec


@dataclass(frozen=True)
class ScanRange:
    """Block of translation vectors ``origin + [0, width) x [0, height)``."""

    origin: Vec
    width: int
    height: int

    def __post_init__(self):
        object.__setattr__(self, "origin", vec(self.origin))
        if self.width <= 0 or self.height <= 0:
            raise ValueError("scan range must be non-empty")

    def to_json(self) -> dict:
        return {"origin": list(self.origin), "width": self.width, "height": self.height}

    @classmethod
    def from_json(cls, d) -> "ScanRange":
        return cls(vec(d["origin"]), int(d["width"]), int(d["height"]))


@dataclass(frozen=True)
class Pattern:
    domain: Shape
    values: tuple

    def as_dict(self) -> dict:
        return dict(zip(self.domain.sorted(), self.values))


@dataclass(frozen=True)
class ComplexityReport:
    domain: Shape
    count: int
    exact: bool
    scan: Optional[ScanRange]

    def to_json(self) -> dict:
        return {
            "domain_size": len(self.domain),
            "count": self.count,
            "exact": self.exact,
            "scan": self.scan.to_json() if self.scan else None,
        }


def pattern_matrix(spec: Spec, domain, positions: ScanRange) -> tuple[Shape, np.ndarray]:
    """Rows are the D-patterns at every position of ``positions``.

    The domain is normalized to its bounding-box corner first; the columns
    follow the sorted point order of the normalized domain.
    """
    dom = as_shape(domain)
    if not dom:
        raise ValueError("pattern_matrix needs a non-empty domain")
    lo, _ = dom.bbox()
    dom = dom.normalized()
    bw, bh = dom.extent()
    o = positions.origin + lo
    win = spec.window(o, positions.width + bw - 1, positions.height + bh - 1)
    cols = [
        win.values[p.x : p.x + positions.width, p.y : p.y + positions.height].reshape(-1)
        for p in dom.sorted()
    ]
    return dom, np.stack(cols, axis=1)


def _count_rows(mat: np.ndarray) -> int:
    return len(unique_rows(mat))


def _packed_keys(mat: np.ndarray) -> np.ndarray:
    """One fixed-width byte string per row; equal rows give equal keys."""
    lo = int(mat.min())
    span = int(mat.max()) - lo + 1
    bits = 4 if span <= 16 else 8 if span <= 256 else 0
    if bits == 0:
        packed = np.ascontiguousarray(mat, dtype=np.int64)
    else:
        per_word = 64 // bits
        shifted = (mat - lo).astype(np.uint64)
        nwords = -(-mat.shape[1] // per_word)
        packed = np.zeros((mat.shape[0], nwords), dtype=np.uint64)
        for j in range(mat.shape[1]):
            w = j // per_word
            packed[:, w] = (packed[:, w] << np.uint64(bits)) | shifted[:, j]
    return packed.view(np.dtype((np.void, packed.shape[1] * 8))).ravel()


def unique_rows(mat: np.ndarray) -> np.ndarray:
    """Distinct rows, in lexicographic order."""
    if mat.shape[0] == 0:
        return mat
    _, first = np.unique(_packed_keys(mat), return_index=True)
    rows = mat[first]
    return rows[np.lexsort(rows.T[::-1])]


def patterns_in(spec: Spec, domain, positions: ScanRange) -> list[Pattern]:
    """Distinct D-patterns at the given positions, in canonical order."""
    dom = as_shape(domain)
    if not dom:
        return [Pattern(dom, ())]
    dom, mat = pattern_matrix(spec, dom, positions)
    rows = unique_rows(mat)
    return [Pattern(dom, tuple(int(v) for v in r)) for r in rows]


def default_scan(spec: Spec, domain: Shape, factor: int = 3) -> ScanRange:
    w, h = domain.extent()
    W, H = factor * w, factor * h
    return ScanRange(spec.default_origin(W + w - 1, H + h - 1), W, H)


def scan_for(spec: Spec, domain: Shape, window: Optional[ScanRange] = None) -> tuple[ScanRange, bool]:
    """Scan range to use for ``domain`` and whether it certifies exactness."""
    box = spec.period_box()
    if box is not None:
        return ScanRange(Vec(0, 0), box[0], box[1]), True
    if window is None:
        return default_scan(spec, domain), False
    return window, False


def pattern_complexity(spec: Spec, domain, window: Optional[ScanRange] = None) -> ComplexityReport:
    """P_c(D) with an exactness flag.

    Structurally doubly periodic specs are scanned over one full period box
    of translations, which sees every pattern.  Anything else is scanned
    over ``window`` (or a default block) and the count is a lower bound.
    """
    dom = as_shape(domain)
    if not dom:
        return ComplexityReport(dom, 1, True, None)
    scan, exact = scan_for(spec, dom, window)
    _, mat = pattern_matrix(spec, dom, scan)
    return ComplexityReport(dom, _count_rows(mat), exact, scan)


def rectangle_complexity(spec: Spec, m: int, n: int, window: Optional[ScanRange] = None) -> ComplexityReport:
    return pattern_complexity(spec, Shape.rect(m, n), window)


def low_complexity_search(
    spec: Spec, max_m: int, max_n: int, window: Optional[ScanRange] = None
) -> list[tuple[int, int, ComplexityReport]]:
    """All (m, n) within bounds whose observed P_c(m, n) is at most mn."""
    if max_m < 1 or max_n < 1:
        raise ValueError("bounds must be >= 1")
    out = []
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            rep = rectangle_complexity(spec, m, n, window)
            if rep.count <= m * n:
                out.append((m, n, rep))
    return out


def complexity_table(spec: Spec, max_m: int, max_n: int, window: Optional[ScanRange] = None) -> dict:
    return {(m, n): rectangle_complexity(spec, m, n, window) for m in range(1, max_m + 1) for n in range(1, max_n + 1)}


# ---------------------------------------------------------------------------
# one dimension


def factor_complexity(word: Sequence, n: int) -> int:
    """Number of distinct length-n factors of a finite word."""
    w = tuple(word)
    if n <= 0:
        return 1
    return len({w[i : i + n] for i in range(len(w) - n + 1)})


@dataclass(frozen=True)
class MorseHedlundReport:
    periodic: bool
    period: Optional[int]
    witness_n: Optional[int]
    preperiod: Optional[int]
    checked_up_to: int
    complexities: tuple

    def to_json(self) -> dict:
        return {
            "periodic": self.periodic,
            "period": self.period,
            "witness_n": self.witness_n,
            "preperiod": self.preperiod,
            "checked_up_to": self.checked_up_to,
        }


def eventual_period(word: Sequence, max_period: int, max_preperiod: int) -> Optional[tuple[int, int]]:
    """Least ``(p, s)`` with ``word[i] == word[i+p]`` for all ``i >= s``."""
    w = list(word)
    L = len(w)
    for p in range(1, max_period + 1):
        # last index where the period fails
        bad = -1
        for i in range(L - p - 1, -1, -1):
            if w[i] != w[i + p]:
                bad = i
                break
        s = bad + 1
        if s <= max_preperiod:
            return p, s
    return None


def morse_hedlund_check(word: Sequence) -> MorseHedlundReport:
    """Search for a length n with P(n) <= n, then for the period it implies.

    Only ``n <= len(word) // 3`` is examined: in a finite word long factors
    are under-represented, so P(n) <= n for n near L/2 says nothing about
    periodicity (the Fibonacci prefix of length 100 has P(47) = 47).
    """
    w = tuple(word)
    L = len(w)
    if L < 2:
        raise ValueError("word must have length >= 2")
    limit = max(1, L // 3)
    comps = []
    witness = None
    for n in range(1, limit + 1):
        c = factor_complexity(w, n)
        comps.append(c)
        if c <= n:
            witness = n
            break
    period = preperiod = None
    if witness is not None:
        found = eventual_period(w, witness, witness)
        if found is not None:
            period, preperiod = found
    return MorseHedlundReport(
        periodic=period is not None,
        period=period,
        witness_n=witness,
        preperiod=preperiod,
        checked_up_to=limit,
        complexities=tuple(comps),
    )
