"""Difference curves on the circle and their event geometry.

Every curve here is piecewise of the form f*|<d, (cos t, sin t)>| with
f in {1, 1/2}; pieces live on half-open, non-wrapping intervals that
partition [0, 2*pi).  Local maxima, threshold crossings and pairwise
intersections all have closed forms, which is what makes the 2D engines
exact.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

from .complexes import Complex, TWO_PI, normalize_angle

# Dedup/tangency tolerances.  PHT_TOLERANCE_OVERRIDE="angle:1e-9,value:1e-8"
# replaces them for testing only.
ANGLE_TOL = 1e-10
VALUE_TOL = 1e-9

_override = os.environ.get("PHT_TOLERANCE_OVERRIDE")
if _override:
    for part in _override.split(","):
        key, _, raw = part.partition(":")
        if key.strip() == "angle":
            ANGLE_TOL = float(raw)
        elif key.strip() == "value":
            VALUE_TOL = float(raw)


@dataclass(frozen=True)
class CurvePiece:
    """One trigonometric arc: value(t) = factor * |dx cos t + dy sin t| on [lo, hi)."""

    dx: float
    dy: float
    factor: float
    lo: float
    hi: float

    @property
    def amplitude(self) -> float:
        return self.factor * math.hypot(self.dx, self.dy)

    @property
    def phase(self) -> float:
        return math.atan2(self.dy, self.dx)

    def value(self, theta: float) -> float:
        return self.factor * abs(self.dx * math.cos(theta) + self.dy * math.sin(theta))


@dataclass(frozen=True)
class DifferenceCurve:
    """Insertion-value gap of an ordered simplex pair, as a function of angle.

    ``owners`` are (side, simplex id) tags with side 0/1 naming the complex;
    ``factor`` is 1/2 exactly when both simplices come from the same complex
    (the unmatched-point contribution), else 1.
    """

    owners: tuple[tuple[int, int], tuple[int, int]]
    same_complex: bool
    pieces: tuple[CurvePiece, ...]

    @property
    def factor(self) -> float:
        return 0.5 if self.same_complex else 1.0

    @property
    def max_amplitude(self) -> float:
        return max(p.amplitude for p in self.pieces)

    def piece_at(self, theta: float) -> CurvePiece:
        t = normalize_angle(theta)
        for p in self.pieces:
            if p.lo <= t < p.hi:
                return p
        return self.pieces[-1]

    def value(self, theta: float) -> float:
        return self.piece_at(theta).value(normalize_angle(theta))

    def shares_simplex(self, other: "DifferenceCurve") -> bool:
        return bool(set(self.owners) & set(other.owners))


@dataclass(frozen=True)
class EventPoint:
    """A direction where some curve's realizing value or identity changes."""

    theta: float
    value: float
    kind: str  # LocalMax | ThresholdCross | CurveIntersect | InsertionIntersect | OverlapEndpoint
    provenance: tuple


_EVENT_RANK = {
    "InsertionIntersect": 0,
    "ThresholdCross": 1,
    "CurveIntersect": 2,
    "OverlapEndpoint": 3,
    "LocalMax": 4,
}


def event_sort_key(ev: EventPoint):
    """Deterministic processing order: angle, then kind, then provenance ids."""
    return (ev.theta, _EVENT_RANK.get(ev.kind, 9), ev.provenance)


# -- breakpoints and curve construction ------------------------------------


def insertion_breakpoints(complex_: Complex, simplex_id: int) -> list[float]:
    """Angles where the simplex's active (height-maximizing) vertex changes.

    Candidate angles come from vertex pairs at equal height; angles where
    the argmax does not actually change are discarded.
    """
    ids = complex_.simplices[simplex_id].vertex_ids
    if len(ids) == 1:
        return []
    coords = complex_.vertices
    cands: list[float] = []
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            dx = coords[ids[a]][0] - coords[ids[b]][0]
            dy = coords[ids[a]][1] - coords[ids[b]][1]
            if dx == 0.0 and dy == 0.0:
                continue
            phi = math.atan2(dy, dx)
            cands.append(normalize_angle(phi + 0.5 * math.pi))
            cands.append(normalize_angle(phi - 0.5 * math.pi))
    if not cands:
        return []
    cands = sorted(set(cands))

    def argmax_at(theta: float) -> int:
        c, s = math.cos(theta), math.sin(theta)
        best, best_h = ids[0], -math.inf
        for v in ids:
            h = coords[v][0] * c + coords[v][1] * s
            if h > best_h:
                best, best_h = v, h
        return best

    keep = []
    m = len(cands)
    for k, theta in enumerate(cands):
        prev_mid = 0.5 * (cands[k - 1] + theta) if k > 0 else 0.5 * (
            cands[-1] - TWO_PI + theta
        )
        next_mid = 0.5 * (theta + cands[k + 1]) if k + 1 < m else 0.5 * (
            theta + cands[0] + TWO_PI
        )
        if argmax_at(normalize_angle(prev_mid)) != argmax_at(normalize_angle(next_mid)):
            keep.append(theta)
    return keep


def difference_curve(
    complex_a: Complex,
    simplex_a: int,
    complex_b: Complex,
    simplex_b: int,
    same_complex: bool | None = None,
    side_a: int = 0,
    side_b: int = 1,
) -> DifferenceCurve:
    """Piecewise form of the insertion-value difference of two simplices.

    ``same_complex`` defaults to identity of the two complex objects; pass it
    explicitly when comparing equal-but-distinct complexes.
    """
    if same_complex is None:
        same_complex = complex_a is complex_b
    if same_complex and simplex_a == simplex_b and complex_a is complex_b:
        raise ValueError("difference curve needs two distinct simplices")
    factor = 0.5 if same_complex else 1.0
    bounds = sorted(
        set(insertion_breakpoints(complex_a, simplex_a))
        | set(insertion_breakpoints(complex_b, simplex_b))
    )
    if not bounds:
        edges = [0.0, TWO_PI]
    else:
        edges = [0.0] + [b for b in bounds if 0.0 < b < TWO_PI] + [TWO_PI]
    ca, cb = complex_a.vertices, complex_b.vertices
    ids_a = complex_a.simplices[simplex_a].vertex_ids
    ids_b = complex_b.simplices[simplex_b].vertex_ids
    pieces = []
    for lo, hi in zip(edges, edges[1:]):
        if hi - lo <= 0.0:
            continue
        mid = 0.5 * (lo + hi)
        c, s = math.cos(mid), math.sin(mid)
        u = max(ids_a, key=lambda v: (ca[v][0] * c + ca[v][1] * s, -v))
        w = max(ids_b, key=lambda v: (cb[v][0] * c + cb[v][1] * s, -v))
        pieces.append(
            CurvePiece(ca[u][0] - cb[w][0], ca[u][1] - cb[w][1], factor, lo, hi)
        )
    same_flag = bool(same_complex)
    if same_flag and side_a == 0 and side_b == 1:
        side_b = 0
    owners = ((side_a, simplex_a), (side_b, simplex_b))
    return DifferenceCurve(owners, same_flag, tuple(pieces))


# -- per-curve events --------------------------------------------------------


def local_maxima(curve: DifferenceCurve) -> list[EventPoint]:
    """All local maxima: interior piece peaks plus piece-boundary corners."""
    events: list[EventPoint] = []

    for p in curve.pieces:
        amp = p.amplitude
        if amp <= 0.0:
            continue
        phi = p.phase
        for theta in (normalize_angle(phi), normalize_angle(phi + math.pi)):
            if p.lo < theta < p.hi:
                events.append(EventPoint(theta, amp, "LocalMax", (curve.owners,)))

    # boundary corners: left derivative >= 0 and right derivative <= 0
    pieces = curve.pieces
    n = len(pieces)
    deriv_tol = 1e-12
    for k in range(n):
        right = pieces[k]
        left = pieces[k - 1]
        theta = right.lo
        val = right.value(theta)
        if val <= VALUE_TOL:
            continue  # zero-level cusps are minima

        def one_sided(piece: CurvePiece, t: float) -> float:
            g = piece.dx * math.cos(t) + piece.dy * math.sin(t)
            gp = -piece.dx * math.sin(t) + piece.dy * math.cos(t)
            sign = 1.0 if g >= 0.0 else -1.0
            return piece.factor * sign * gp

        if one_sided(left, theta) >= -deriv_tol and one_sided(right, theta) <= deriv_tol:
            events.append(EventPoint(theta, val, "LocalMax", (curve.owners,)))

    return _dedup_events(events)


def threshold_crossings(curve: DifferenceCurve, lam: float) -> list[float]:
    """Sorted angles where the curve value equals ``lam`` (lam > 0).

    Tangent pieces (amplitude equal to lam within tolerance) contribute their
    peak angles; pieces below lam contribute nothing.
    """
    if lam <= 0.0:
        raise ValueError("threshold must be positive")
    out: list[float] = []
    for p in curve.pieces:
        out.extend(_piece_threshold(p, lam))
    out.sort()
    dedup: list[float] = []
    for t in out:
        if not dedup or t - dedup[-1] > ANGLE_TOL:
            dedup.append(t)
    if len(dedup) > 1 and (dedup[0] + TWO_PI) - dedup[-1] <= ANGLE_TOL:
        dedup.pop()
    return dedup


def _piece_threshold(p: CurvePiece, lam: float) -> list[float]:
    amp = p.amplitude
    if amp <= 0.0:
        return []
    phi = p.phase
    if abs(amp - lam) <= VALUE_TOL:
        cands = [phi, phi + math.pi]
    elif amp < lam:
        return []
    else:
        acos = math.acos(lam / amp)
        cands = [phi + acos, phi - acos, phi + math.pi + acos, phi + math.pi - acos]
    return [t for t in (normalize_angle(c) for c in cands) if p.lo <= t < p.hi]


# -- pairwise intersections ---------------------------------------------------


def _merged_subintervals(c1: DifferenceCurve, c2: DifferenceCurve):
    bounds = sorted(
        {p.lo for p in c1.pieces}
        | {p.hi for p in c1.pieces}
        | {p.lo for p in c2.pieces}
        | {p.hi for p in c2.pieces}
    )
    for lo, hi in zip(bounds, bounds[1:]):
        if hi - lo > 0.0:
            yield lo, hi, c1.piece_at(0.5 * (lo + hi)), c2.piece_at(0.5 * (lo + hi))


def curve_intersections(c1: DifferenceCurve, c2: DifferenceCurve) -> list[EventPoint]:
    """Isolated transverse crossings of two curves, plus overlap endpoints.

    Coincident stretches (equal piece forms on a shared interval) produce
    OverlapEndpoint events at the stretch boundaries and no interior events.
    """
    if c1 is c2 or (c1.owners == c2.owners and c1.pieces == c2.pieces):
        raise ValueError("curve intersections need distinct curves")
    prov = (c1.owners, c2.owners)
    events: list[EventPoint] = []
    for lo, hi, p1, p2 in _merged_subintervals(c1, c2):
        e1 = (p1.factor * p1.dx, p1.factor * p1.dy)
        e2 = (p2.factor * p2.dx, p2.factor * p2.dy)
        minus = (e1[0] - e2[0], e1[1] - e2[1])
        plus = (e1[0] + e2[0], e1[1] + e2[1])
        coincide = (
            math.hypot(*minus) <= VALUE_TOL or math.hypot(*plus) <= VALUE_TOL
        )
        if coincide:
            for t in (lo, hi if hi < TWO_PI else 0.0):
                events.append(
                    EventPoint(t, p1.value(t if t > 0.0 else 0.0), "OverlapEndpoint", prov)
                )
            continue
        for g in (minus, plus):
            nrm = math.hypot(*g)
            if nrm <= VALUE_TOL:
                continue
            base = math.atan2(g[1], g[0])
            for theta in (
                normalize_angle(base + 0.5 * math.pi),
                normalize_angle(base - 0.5 * math.pi),
            ):
                if lo <= theta < hi:
                    events.append(
                        EventPoint(theta, p1.value(theta), "CurveIntersect", prov)
                    )
    return _dedup_events(events)


def zero_events(curve: DifferenceCurve) -> list[EventPoint]:
    """Angles where the underlying insertion values coincide.

    For same-complex curves these are exactly the filtration-order events:
    transverse zeros of each piece, plus the endpoints of intervals on which
    the curve vanishes identically (shared active vertex).
    """
    prov = (curve.owners,)
    events: list[EventPoint] = []
    for p in curve.pieces:
        if p.dx == 0.0 and p.dy == 0.0:
            for t in (p.lo, p.hi if p.hi < TWO_PI else 0.0):
                events.append(EventPoint(t, 0.0, "InsertionIntersect", prov))
            continue
        phi = p.phase
        for theta in (
            normalize_angle(phi + 0.5 * math.pi),
            normalize_angle(phi - 0.5 * math.pi),
        ):
            if p.lo <= theta < p.hi:
                events.append(EventPoint(theta, 0.0, "InsertionIntersect", prov))
    return _dedup_events(events)


def _dedup_events(events: list[EventPoint]) -> list[EventPoint]:
    """Drop events equal in (theta, value) up to tolerance; keep first seen."""
    events = sorted(events, key=event_sort_key)
    out: list[EventPoint] = []
    for ev in events:
        dup = False
        for prior in reversed(out):
            if abs(ev.theta - prior.theta) > ANGLE_TOL:
                break
            if ev.kind == prior.kind and abs(ev.value - prior.value) <= VALUE_TOL:
                dup = True
                break
        if not dup:
            out.append(ev)
    return out


def curve_samples_csv(curve: DifferenceCurve, samples: int = 360) -> str:
    """Debug dump: CSV of (curve id, theta, value) rows for plotting."""
    rows = ["curve,theta,value"]
    tag = "|".join(f"{s}:{i}" for s, i in curve.owners)
    for k in range(samples):
        t = TWO_PI * k / samples
        rows.append(f"{tag},{t:.17g},{curve.value(t):.17g}")
    return "\n".join(rows) + "\n"
