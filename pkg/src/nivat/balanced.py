"""Construction and verification of u-balanced sets.

A finite convex ``B`` with edge or vertex ``E`` in direction ``u`` is
u-balanced when

    (i)   P(B) <= |B|
    (ii)  P(B) < P(B \\ E) + |E|
    (iii) every line in direction u meets B in 0 or >= |E| - 1 points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .complexity import ComplexityReport, ScanRange, pattern_complexity, pattern_matrix, rectangle_complexity, scan_for
from .configurations import Spec
from .geometry import Shape, Vec, as_shape, edge_or_vertex, lines_in_direction, primitive_of, shave


class NotLowComplexity(ValueError):
    pass


class Inconclusive(RuntimeError):
    pass


@dataclass(frozen=True)
class BalancedSetCertificate:
    shape: Shape
    direction: Vec
    edge: Shape
    report_b: ComplexityReport
    report_rest: ComplexityReport
    conditions: tuple  # (i), (ii), (iii)
    index: Optional[int] = None
    trace: tuple = ()
    values: tuple = ()  # P(D_i) - |D_i| along the trace

    @property
    def exact(self) -> bool:
        return self.report_b.exact and self.report_rest.exact

    @property
    def balanced(self) -> bool:
        return all(self.conditions)

    def to_json(self) -> dict:
        return {
            "shape": self.shape.to_json(),
            "direction": list(self.direction),
            "edge": self.edge.to_json(),
            "P_B": self.report_b.to_json(),
            "P_B_minus_E": self.report_rest.to_json(),
            "conditions": {"i": self.conditions[0], "ii": self.conditions[1], "iii": self.conditions[2]},
            "balanced": self.balanced,
            "exact": self.exact,
            "index": self.index,
            "excess": list(self.values),
        }


def _scan(spec: Spec, rect: Shape, window: Optional[ScanRange]) -> Optional[ScanRange]:
    """One scan range for a whole shaving sequence so counts are comparable."""
    scan, exact = scan_for(spec, rect, window)
    return None if exact else scan


def verify_balanced(spec: Spec, B, u, window: Optional[ScanRange] = None) -> BalancedSetCertificate:
    """Evaluate the three balanced-set conditions from fresh counts."""
    B = as_shape(B)
    if not B:
        raise ValueError("balanced set must be non-empty")
    if not B.is_convex():
        raise ValueError("balanced set must be convex")
    u = primitive_of(u)
    E = edge_or_vertex(B, u).cells
    rb = pattern_complexity(spec, B, window)
    rr = pattern_complexity(spec, B - E, window)
    c1 = rb.count <= len(B)
    c2 = rb.count < rr.count + len(E)
    c3 = all(len(line) >= len(E) - 1 for line in lines_in_direction(B, u).values())
    return BalancedSetCertificate(B, u, E, rb, rr, (c1, c2, c3))


def shaving_sequence(D: Shape, u, mode: str = "alternate") -> list[tuple[Shape, Vec]]:
    """``[(D_0, dir_0), (D_1, dir_1), ..., (empty, None)]``.

    ``D_{i+1}`` is ``D_i`` with its edge in ``dir_i`` removed, where ``dir_i``
    alternates between u and -u, or is always u in fixed mode.
    """
    u = primitive_of(u)
    seq = []
    cur, i = as_shape(D), 0
    while cur:
        d = u if (mode == "fixed" or i % 2 == 0) else -u
        seq.append((cur, d))
        cur = shave(cur, d)
        i += 1
    seq.append((cur, None))
    return seq


def construct_balanced(
    spec: Spec, m: int, n: int, u, mode: str = "alternate", window: Optional[ScanRange] = None
) -> BalancedSetCertificate:
    """Shave an m x n block until the complexity excess turns positive."""
    if mode not in ("alternate", "fixed"):
        raise ValueError("mode must be 'alternate' or 'fixed'")
    u = primitive_of(u)
    if mode == "fixed" and u.x != 0 and u.y != 0:
        raise ValueError("fixed mode requires a horizontal or vertical direction")
    rect = Shape.rect(m, n)
    scan = _scan(spec, rect, window)
    top = pattern_complexity(spec, rect, scan)
    if top.count > m * n:
        raise NotLowComplexity(f"not low complexity: P({m},{n}) = {top.count} > {m * n}")
    seq = shaving_sequence(rect, u, mode)
    excess = []
    for D, _ in seq:
        excess.append(pattern_complexity(spec, D, scan).count - len(D))
    idx = next(i for i in range(len(seq) - 1) if excess[i + 1] > 0)
    B, d = seq[idx]
    cert = verify_balanced(spec, B, d, scan)
    expected_edge = B - seq[idx + 1][0]
    assert cert.edge == expected_edge
    return BalancedSetCertificate(
        cert.shape,
        cert.direction,
        cert.edge,
        cert.report_b,
        cert.report_rest,
        cert.conditions,
        index=idx,
        trace=tuple(D for D, _ in seq),
        values=tuple(excess),
    )


@dataclass(frozen=True)
class ForcedCell:
    k: int
    domain: Shape  # D_k
    forced: Vec  # e_{k+1}
    order: tuple  # e_1 .. e_n
    excess: tuple  # P(D_i) - |D_i| for i = 0..n
    certified: bool

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "D_k": self.domain.to_json(),
            "forced": list(self.forced),
            "order": [list(e) for e in self.order],
            "excess": list(self.excess),
            "certified": self.certified,
        }


def order_edge(E: Shape, u, mirrored: bool = False) -> list[Vec]:
    """Points of E consecutively, ascending along u (descending if mirrored)."""
    u = primitive_of(u)
    pts = sorted(E.points, key=lambda p: (p.x * u.x + p.y * u.y, p))
    return pts[::-1] if mirrored else pts


def extends_uniquely(spec: Spec, sub: Shape, cell: Vec, scan: ScanRange) -> bool:
    """No two observed (sub + cell)-patterns agree on ``sub`` and differ at ``cell``."""
    full = sub | [cell]
    pts = full.sorted()
    lo, _ = full.bbox()
    _, mat = pattern_matrix(spec, full, scan)
    # pattern_matrix columns follow the normalized domain's sorted order,
    # which is the same order as ``pts``
    j = pts.index(cell)
    rest = [i for i in range(len(pts)) if i != j]
    seen: dict = {}
    for row in np.unique(mat, axis=0):
        key = tuple(row[rest])
        val = int(row[j])
        if seen.setdefault(key, val) != val:
            return False
    return True


def find_forced_cell(
    spec: Spec, B, E, u, mirrored: bool = False, window: Optional[ScanRange] = None
) -> ForcedCell:
    """Locate k with P(D_k) = P(D_{k+1}) while adding E back point by point."""
    B, E = as_shape(B), as_shape(E)
    if not E <= B:
        raise ValueError("E must be a subset of B")
    order = order_edge(E, u, mirrored)
    scan = _scan(spec, B, window)
    Ds = [B - E]
    for e in order:
        Ds.append(Ds[-1] | [e])
    excess = [pattern_complexity(spec, D, scan).count - len(D) for D in Ds]
    k = next((i for i in range(len(order)) if excess[i + 1] < excess[i]), None)
    if k is None:
        raise Inconclusive("inconclusive under scan window: no k with P(D_k) = P(D_k+1)")
    cell = order[k]
    used, _ = scan_for(spec, B, scan)
    certified = extends_uniquely(spec, Ds[k], cell, used)
    return ForcedCell(k, Ds[k], cell, tuple(order), tuple(excess), certified)
