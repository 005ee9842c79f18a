"""Exact max bottleneck distance between planar PHTs.

The engine has three layers:

* ``decide``          - is the directional bottleneck function everywhere <= lam?
                        One sweep over the circle, maintaining the filtration
                        pairings (vineyard transpositions) and a perfect
                        threshold matching that is repaired by single
                        augmenting paths at events.
* basic algorithm     - enumerate every candidate value (curve maxima and
                        pairwise curve intersections), binary search with
                        ``decide``.
* pruned algorithm    - pre-refine a band so its interior is free of curve
                        maxima and simplex-sharing intersections, then process
                        simplices in seeded random order with an existence
                        test and per-simplex band refinement.

Both algorithms return the same float bit for bit: every candidate value is
produced by the same closed-form kernel in :mod:`phtdist.curves`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .complexes import Complex, TWO_PI, betti_numbers, normalize_angle
from .curves import (
    ANGLE_TOL,
    VALUE_TOL,
    DifferenceCurve,
    curve_intersections,
    difference_curve,
    local_maxima,
    zero_events,
)
from .persistence import PairingState

INF = math.inf


class PreRefinementError(RuntimeError):
    """An intra-intersection was found strictly inside a pre-refined band."""


@dataclass(frozen=True)
class CandidateValue:
    """A value the directional bottleneck function can attain at an event."""

    value: float
    theta: float
    kind: str  # CurveMax | Intersection
    provenance: tuple
    owners: frozenset

    def sort_key(self):
        return (self.value, self.theta, self.kind, self.provenance)


@dataclass(frozen=True)
class Band:
    """Half-open bracket (lam1, lam2] with decide(lam1)=False, decide(lam2)=True."""

    lam1: float
    lam2: float
    witness_theta: float = math.nan
    witness_provenance: tuple = ()

    def contains(self, value: float) -> bool:
        return self.lam1 < value <= self.lam2

    def interior(self, value: float) -> bool:
        return self.lam1 < value < self.lam2


@dataclass
class DinfResult:
    value: float
    witness_theta: float
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# shared context for one pair of complexes
# ---------------------------------------------------------------------------


class PairContext:
    """Caches everything about a pair of planar complexes that does not
    depend on a threshold: the difference curves, their flattened piece
    table, the filtration-order events, and decide() results."""

    def __init__(self, k1: Complex, k2: Complex):
        if k1.ambient_dim != 2 or k2.ambient_dim != 2:
            raise ValueError("the exact engine handles planar complexes")
        self.k1, self.k2 = k1, k2
        b1, b2 = betti_numbers(k1), betti_numbers(k2)
        self.ess_ok = all(b1[d] == b2[d] for d in range(2))

        curves: list[DifferenceCurve] = []
        n1, n2 = len(k1), len(k2)
        for a in range(n1):
            for s in range(n2):
                curves.append(difference_curve(k1, a, k2, s, False, 0, 1))
        for a in range(n1):
            for b in range(a + 1, n1):
                curves.append(difference_curve(k1, a, k1, b, True, 0, 0))
        for s in range(n2):
            for t in range(s + 1, n2):
                curves.append(difference_curve(k2, s, k2, t, True, 1, 1))
        self.curves = curves
        self.curves_of: dict[tuple[int, int], list[int]] = {}
        for idx, c in enumerate(curves):
            for owner in c.owners:
                self.curves_of.setdefault(owner, []).append(idx)

        amp, phase, lo, hi = [], [], [], []
        for c in curves:
            for p in c.pieces:
                amp.append(p.amplitude)
                phase.append(p.phase)
                lo.append(p.lo)
                hi.append(p.hi)
        self._p_amp = np.array(amp)
        self._p_phase = np.array(phase)
        self._p_lo = np.array(lo)
        self._p_hi = np.array(hi)

        angles = [
            ev.theta
            for c in curves
            if c.same_complex
            for ev in zero_events(c)
        ]
        self.insertion_angles = np.unique(np.array(angles, dtype=float))

        self._decide_cache: dict[float, bool] = {}
        self._false_max = -INF
        self._true_min = INF
        self._arc_cache: dict[tuple[float, float], dict[int, list]] = {}
        self._all_candidates: list[CandidateValue] | None = None
        self._intra_candidates: list[CandidateValue] | None = None
        self._pair_cache: dict[tuple[int, int], list[CandidateValue]] = {}
        self.decide_calls = 0

    # -- events ------------------------------------------------------------

    def threshold_angles(self, lam: float) -> np.ndarray:
        """All angles where some difference curve value equals lam."""
        amp, phase = self._p_amp, self._p_phase
        out = []
        tangent = np.abs(amp - lam) <= VALUE_TOL
        crossing = (amp > lam) & ~tangent & (amp > 0.0)
        if np.any(crossing):
            a = amp[crossing]
            ph = phase[crossing]
            acos = np.arccos(np.clip(lam / a, -1.0, 1.0))
            cands = np.concatenate(
                [ph + acos, ph - acos, ph + math.pi + acos, ph + math.pi - acos]
            )
            lo = np.tile(self._p_lo[crossing], 4)
            hi = np.tile(self._p_hi[crossing], 4)
            cands = np.mod(cands, TWO_PI)
            keep = (cands >= lo) & (cands < hi)
            out.append(cands[keep])
        if np.any(tangent & (amp > 0.0)):
            mask = tangent & (amp > 0.0)
            ph = phase[mask]
            cands = np.concatenate([ph, ph + math.pi])
            lo = np.tile(self._p_lo[mask], 2)
            hi = np.tile(self._p_hi[mask], 2)
            cands = np.mod(cands, TWO_PI)
            keep = (cands >= lo) & (cands < hi)
            out.append(cands[keep])
        if not out:
            return np.empty(0)
        return np.unique(np.concatenate(out))

    # -- decide with exact memoization --------------------------------------

    def decide(self, lam: float, recompute: bool = False, use_bounds: bool = True) -> bool:
        if use_bounds:
            if lam >= self._true_min:
                return True
            if lam <= self._false_max:
                return False
        hit = self._decide_cache.get(lam)
        if hit is not None:
            return hit
        result = _decide_sweep(self, lam, recompute=recompute)
        self._decide_cache[lam] = result
        if result:
            self._true_min = min(self._true_min, lam)
        else:
            self._false_max = max(self._false_max, lam)
        return result

    # -- candidates ----------------------------------------------------------

    def _pair_candidates(self, i: int, j: int) -> list[CandidateValue]:
        if i > j:
            i, j = j, i
        hit = self._pair_cache.get((i, j))
        if hit is not None:
            return hit
        c1, c2 = self.curves[i], self.curves[j]
        owners = frozenset(c1.owners) | frozenset(c2.owners)
        out = []
        for ev in curve_intersections(c1, c2):
            out.append(
                CandidateValue(ev.value, ev.theta, "Intersection", ev.provenance, owners)
            )
        self._pair_cache[(i, j)] = out
        return out

    def _max_candidates(self, i: int) -> list[CandidateValue]:
        c = self.curves[i]
        owners = frozenset(c.owners)
        return [
            CandidateValue(ev.value, ev.theta, "CurveMax", ev.provenance, owners)
            for ev in local_maxima(c)
        ]

    def all_candidates(self) -> list[CandidateValue]:
        if self._all_candidates is None:
            cands: list[CandidateValue] = []
            n = len(self.curves)
            for i in range(n):
                cands.extend(self._max_candidates(i))
            for i in range(n):
                for j in range(i + 1, n):
                    cands.extend(self._pair_candidates(i, j))
            self._all_candidates = _dedup_candidates(cands)
        return self._all_candidates

    def intra_candidates(self) -> list[CandidateValue]:
        """Pre-refinement set: all curve maxima plus all simplex-sharing
        pairwise intersections (including overlap endpoints)."""
        if self._intra_candidates is None:
            cands: list[CandidateValue] = []
            for i in range(len(self.curves)):
                cands.extend(self._max_candidates(i))
            seen: set[tuple[int, int]] = set()
            for owner, idxs in self.curves_of.items():
                for a in range(len(idxs)):
                    for b in range(a + 1, len(idxs)):
                        key = (idxs[a], idxs[b])
                        if key in seen:
                            continue
                        seen.add(key)
                        cands.extend(self._pair_candidates(*key))
            self._intra_candidates = _dedup_candidates(cands)
        return self._intra_candidates

    # -- band arcs -------------------------------------------------------------

    def band_arcs(self, band: Band) -> dict[int, list[tuple[float, float]]]:
        """Per-curve angular arcs where the curve value lies in (lam1, lam2]."""
        key = (band.lam1, band.lam2)
        hit = self._arc_cache.get(key)
        if hit is not None:
            return hit
        arcs: dict[int, list[tuple[float, float]]] = {}
        for idx, curve in enumerate(self.curves):
            cur = []
            for p in curve.pieces:
                cur.extend(_piece_band_arcs(p, band.lam1, band.lam2))
            if cur:
                arcs[idx] = _merge_arcs(cur)
        self._arc_cache[key] = arcs
        return arcs


_ARC_PAD = 1e-7  # arcs are a conservative reject; pad against acos/atan2 rounding


def _piece_band_arcs(p, lam1: float, lam2: float) -> list[tuple[float, float]]:
    amp = p.amplitude
    if amp <= lam1:
        return []
    r1 = 0.5 * math.pi if lam1 <= 0.0 else math.acos(min(1.0, lam1 / amp))
    r2 = 0.0 if amp <= lam2 else math.acos(min(1.0, lam2 / amp))
    r1 += _ARC_PAD
    r2 = max(0.0, r2 - _ARC_PAD)
    out = []
    for peak in (p.phase, p.phase + math.pi):
        if r2 == 0.0:
            spans = [(peak - r1, peak + r1)]
        else:
            spans = [(peak - r1, peak - r2), (peak + r2, peak + r1)]
        for a, b in spans:
            if b - a <= 0.0:
                continue
            out.extend(_clip_span(a, b, p.lo, p.hi))
    return out


def _clip_span(a: float, b: float, lo: float, hi: float) -> list[tuple[float, float]]:
    """Intersect the circular span [a, b] with the non-wrapping piece [lo, hi)."""
    width = b - a
    a = normalize_angle(a)
    segs = []
    if a + width <= TWO_PI:
        segs.append((a, a + width))
    else:
        segs.append((a, TWO_PI))
        segs.append((0.0, a + width - TWO_PI))
    out = []
    for s, e in segs:
        s2, e2 = max(s, lo), min(e, hi)
        if e2 > s2:
            out.append((s2, e2))
    return out


def _merge_arcs(arcs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    arcs = sorted(arcs)
    out = [list(arcs[0])]
    for s, e in arcs[1:]:
        if s <= out[-1][1] + ANGLE_TOL:
            out[-1][1] = max(out[-1][1], e)
        else:
            out.append([s, e])
    return [tuple(x) for x in out]


def _arcs_overlap(a: list, b: list) -> bool:
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i][1] < b[j][0]:
            i += 1
        elif b[j][1] < a[i][0]:
            j += 1
        else:
            return True
    return False


def _dedup_candidates(cands: list[CandidateValue]) -> list[CandidateValue]:
    """Sort by (value, theta) and drop exact-value duplicates at nearby angles."""
    cands.sort(key=CandidateValue.sort_key)
    out: list[CandidateValue] = []
    for c in cands:
        dup = False
        for prior in reversed(out):
            if c.value != prior.value:
                break
            if abs(c.theta - prior.theta) <= ANGLE_TOL:
                dup = True
                break
        if not dup:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# the decision sweep
# ---------------------------------------------------------------------------


class _DimMatch:
    """Threshold matching for the points of one homology dimension.

    Slots: ("x", b, d) and projection ("p", b, d) on the U side against
    ("y", b, d) and projection ("q", b, d) on the V side.  Finite pairs keep
    their zero-persistence members; those sit on the diagonal and are free.
    """

    __slots__ = ("xs", "ys", "pairs", "owner")

    def __init__(self):
        self.xs: list[tuple[int, int]] = []
        self.ys: list[tuple[int, int]] = []
        self.pairs: dict = {}
        self.owner: dict = {}

    def u_slots(self):
        return [("x", b, d) for b, d in self.xs] + [("p", b, d) for b, d in self.ys]

    def weight(self, u, v, v1, v2) -> float:
        if u[0] == "x":
            if v[0] == "y":
                return max(abs(v1[u[1]] - v2[v[1]]), abs(v1[u[2]] - v2[v[2]]))
            if v[1] == u[1] and v[2] == u[2]:
                return 0.5 * (v1[u[2]] - v1[u[1]])
            return INF
        if v[0] == "y":
            if v[1] == u[1] and v[2] == u[2]:
                return 0.5 * (v2[u[2]] - v2[u[1]])
            return INF
        return 0.0

    def neighbors(self, u, v1, v2, lam):
        out = []
        if u[0] == "x":
            b, d = u[1], u[2]
            for yb, yd in self.ys:
                if max(abs(v1[b] - v2[yb]), abs(v1[d] - v2[yd])) <= lam:
                    out.append(("y", yb, yd))
            if 0.5 * (v1[d] - v1[b]) <= lam:
                out.append(("q", b, d))
        else:
            b, d = u[1], u[2]
            if 0.5 * (v2[d] - v2[b]) <= lam:
                out.append(("y", b, d))
            for xb, xd in self.xs:
                out.append(("q", xb, xd))
        return out

    def augment(self, u0, v1, v2, lam) -> bool:
        from collections import deque

        parent = {}
        queue = deque([u0])
        while queue:
            u = queue.popleft()
            for v in self.neighbors(u, v1, v2, lam):
                if v in parent:
                    continue
                parent[v] = u
                w = self.owner.get(v)
                if w is None:
                    while True:
                        up = parent[v]
                        old = self.pairs.get(up)
                        self.pairs[up] = v
                        self.owner[v] = up
                        if up == u0:
                            return True
                        v = old
                else:
                    queue.append(w)
        return False

    def validate_and_repair(self, v1, v2, lam) -> bool:
        exposed = []
        for u, v in list(self.pairs.items()):
            if self.weight(u, v, v1, v2) > lam:
                del self.pairs[u]
                del self.owner[v]
                exposed.append(u)
        for u in self.u_slots():
            if u not in self.pairs and u not in exposed:
                exposed.append(u)
        for u in exposed:
            if u in self.pairs:
                continue
            if not self.augment(u, v1, v2, lam):
                return False
        return True

    def rebuild_slots(self, xs, ys):
        self.xs, self.ys = xs, ys
        valid_u = set(self.u_slots())
        valid_v = {("y", b, d) for b, d in ys} | {("q", b, d) for b, d in xs}
        for u, v in list(self.pairs.items()):
            if u not in valid_u or v not in valid_v:
                del self.pairs[u]
                self.owner.pop(v, None)

    def init_matching(self, v1, v2, lam) -> bool:
        """Perfect matching from scratch via Hopcroft-Karp."""
        from .bottleneck import hopcroft_karp

        us = self.u_slots()
        vs = [("y", b, d) for b, d in self.ys] + [("q", b, d) for b, d in self.xs]
        vidx = {v: i for i, v in enumerate(vs)}
        adj = [[vidx[v] for v in self.neighbors(u, v1, v2, lam)] for u in us]
        size, match_u, _ = hopcroft_karp(len(us), len(vs), adj)
        if size != len(us):
            return False
        self.pairs = {us[i]: vs[match_u[i]] for i in range(len(us))}
        self.owner = {v: u for u, v in self.pairs.items()}
        return True


class _SweepMatcher:
    """Carries the two pairing states and per-dimension matchings along a sweep."""

    def __init__(self, ctx: PairContext, lam: float, recompute: bool = False):
        self.ctx = ctx
        self.lam = lam
        self.recompute = recompute
        self.dims = list(range(2))
        self.ps1: PairingState | None = None
        self.ps2: PairingState | None = None
        self.matches = {d: _DimMatch() for d in self.dims}
        self.ess1: dict[int, list[int]] = {}
        self.ess2: dict[int, list[int]] = {}

    @staticmethod
    def _split(ps: PairingState, complex_: Complex):
        fin = {0: [], 1: []}
        ess = {0: [], 1: []}
        for b, d in ps.pairing():
            dim = complex_.simplices[b].dim
            if d is None:
                if dim in ess:
                    ess[dim].append(b)
            elif dim in fin:
                fin[dim].append((b, d))
        return fin, ess

    def _refresh_slots(self):
        fin1, self.ess1 = self._split(self.ps1, self.ctx.k1)
        fin2, self.ess2 = self._split(self.ps2, self.ctx.k2)
        for d in self.dims:
            self.matches[d].rebuild_slots(fin1[d], fin2[d])

    def init(self, o1, o2, v1, v2) -> bool:
        self.ps1 = PairingState(self.ctx.k1, o1)
        self.ps2 = PairingState(self.ctx.k2, o2)
        self._refresh_slots()
        for d in self.dims:
            e1 = sorted(v1[s] for s in self.ess1.get(d, []))
            e2 = sorted(v2[s] for s in self.ess2.get(d, []))
            if len(e1) != len(e2):
                return False
            if any(abs(a - b) > self.lam for a, b in zip(e1, e2)):
                return False
            if not self.matches[d].init_matching(v1, v2, self.lam):
                return False
        return True

    def advance(self, o1, o2, v1, v2, order_event: bool) -> bool:
        if order_event:
            if self.recompute:
                self.ps1 = PairingState(self.ctx.k1, o1)
                self.ps2 = PairingState(self.ctx.k2, o2)
            else:
                self.ps1.transpositions_to(o1)
                self.ps2.transpositions_to(o2)
            self._refresh_slots()
        return self._feasible(v1, v2)

    def _feasible(self, v1, v2) -> bool:
        for d in self.dims:
            e1 = sorted(v1[s] for s in self.ess1.get(d, []))
            e2 = sorted(v2[s] for s in self.ess2.get(d, []))
            if len(e1) != len(e2):
                return False
            for a, b in zip(e1, e2):
                if abs(a - b) > self.lam:
                    return False
            if not self.matches[d].validate_and_repair(v1, v2, self.lam):
                return False
        return True

    def diagrams_match_recompute(self, o1, o2) -> bool:
        """Audit hook: maintained pairings equal a fresh reduction."""
        fresh1 = PairingState(self.ctx.k1, o1)
        fresh2 = PairingState(self.ctx.k2, o2)
        return (
            sorted(self.ps1.pairing()) == sorted(fresh1.pairing())
            and sorted(self.ps2.pairing()) == sorted(fresh2.pairing())
        )


def _decide_sweep(
    ctx: PairContext,
    lam: float,
    recompute: bool = False,
    audit: list | None = None,
    audit_stride: int = 0,
) -> bool:
    """One full sweep; True iff the bottleneck function stays <= lam."""
    ctx.decide_calls += 1
    if not ctx.ess_ok:
        return False
    if lam < 0.0:
        return False
    thr = ctx.threshold_angles(lam)
    events = np.unique(np.concatenate([ctx.insertion_angles, thr]))
    if events.size == 0:
        probes = np.array([0.0])
        order_flags = np.array([False])
    else:
        nxt = np.roll(events, -1).copy()
        nxt[-1] += TWO_PI
        probes = 0.5 * (events + nxt)
        order_flags = np.isin(events, ctx.insertion_angles)
    dirs = np.column_stack([np.cos(probes), np.sin(probes)])
    sv1 = ctx.k1.simplex_values_many(dirs)
    sv2 = ctx.k2.simplex_values_many(dirs)

    matcher = _SweepMatcher(ctx, lam, recompute=recompute)
    o1 = np.argsort(sv1[:, 0], kind="stable")
    o2 = np.argsort(sv2[:, 0], kind="stable")
    v1 = sv1[:, 0].tolist()
    v2 = sv2[:, 0].tolist()
    if not matcher.init(o1, o2, v1, v2):
        return False
    for t in range(1, probes.size):
        v1 = sv1[:, t].tolist()
        v2 = sv2[:, t].tolist()
        order_event = bool(order_flags[t])
        if order_event:
            o1 = np.argsort(sv1[:, t], kind="stable")
            o2 = np.argsort(sv2[:, t], kind="stable")
        if not matcher.advance(o1, o2, v1, v2, order_event):
            return False
        if audit is not None and audit_stride and t % audit_stride == 0:
            audit.append(matcher.diagrams_match_recompute(o1, o2))
    return True


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def decide(
    k1: Complex, k2: Complex, lam: float, ctx: PairContext | None = None,
    recompute: bool = False,
) -> bool:
    """True iff the max bottleneck distance between the PHTs is <= lam.

    Closed at lam: ``decide(d_infty)`` is true.  Pass a shared context to
    reuse curves and memoized decisions across calls.
    """
    if ctx is None:
        return _decide_sweep(PairContext(k1, k2), lam, recompute=recompute)
    return ctx.decide(lam, recompute=recompute)


def enumerate_all_candidates(
    k1: Complex, k2: Complex, ctx: PairContext | None = None
) -> list[CandidateValue]:
    """Every curve local maximum and pairwise intersection, sorted by value."""
    ctx = ctx or PairContext(k1, k2)
    return ctx.all_candidates()


def _search_candidates(
    ctx: PairContext, cands: list[CandidateValue], recompute: bool = False
) -> CandidateValue | None:
    """Smallest candidate whose value decides true (binary search)."""
    if not cands:
        return None
    lo, hi = -1, len(cands) - 1
    if not ctx.decide(cands[hi].value, recompute=recompute):
        return None
    while hi - lo > 1:
        mid = (hi + lo) // 2
        if ctx.decide(cands[mid].value, recompute=recompute):
            hi = mid
        else:
            lo = mid
    flip = cands[hi]
    # several candidates may share the flip value; report the first of them
    k = hi
    while k > 0 and cands[k - 1].value == flip.value:
        k -= 1
    return cands[k]


def d_infty_basic(
    k1: Complex, k2: Complex, ctx: PairContext | None = None, recompute: bool = False
) -> DinfResult:
    """Exact max distance by full candidate enumeration plus binary search."""
    ctx = ctx or PairContext(k1, k2)
    stats = {"mode": "basic"}
    if not ctx.ess_ok:
        return DinfResult(INF, math.nan, stats)
    if ctx.decide(0.0, recompute=recompute):
        return DinfResult(0.0, 0.0, stats)
    cands = ctx.all_candidates()
    stats["candidates"] = len(cands)
    best = _search_candidates(ctx, cands, recompute=recompute)
    if best is None:
        raise RuntimeError("no candidate decided true; candidate set incomplete")
    stats["decide_calls"] = ctx.decide_calls
    return DinfResult(best.value, best.theta, stats)


def pre_refine(
    k1: Complex, k2: Complex, ctx: PairContext | None = None, recompute: bool = False
) -> Band:
    """Shrink a global band until its interior holds no curve maximum and no
    intersection of curves sharing a simplex."""
    ctx = ctx or PairContext(k1, k2)
    if ctx.decide(0.0, recompute=recompute):
        return Band(-1.0, 0.0, 0.0, ())
    cands = ctx.intra_candidates()
    values: list[CandidateValue] = []
    for c in cands:
        if not values or c.value != values[-1].value:
            values.append(c)
    best = _search_candidates(ctx, values, recompute=recompute)
    if best is None:
        raise RuntimeError("pre-refinement found no feasible upper bound")
    idx = next(i for i, c in enumerate(values) if c.value == best.value)
    lam1 = values[idx - 1].value if idx > 0 else 0.0
    return Band(lam1, best.value, best.theta, best.provenance)


def existence_test(
    k1: Complex,
    k2: Complex,
    alpha: tuple[int, int],
    band: Band,
    ctx: PairContext | None = None,
    validate: bool = True,
) -> bool:
    """Is there an intersection in the band between a curve of ``alpha`` and a
    curve sharing no simplex with it?

    ``alpha`` is a (side, simplex id) tag with side 0 for the first complex.
    With ``validate``, simplex-sharing intersections strictly inside the band
    raise :class:`PreRefinementError` (the pre-refinement invariant failed).
    """
    ctx = ctx or PairContext(k1, k2)
    arcs = ctx.band_arcs(band)
    red = [i for i in ctx.curves_of.get(alpha, []) if i in arcs]
    if not red:
        return False
    if validate:
        for a in range(len(red)):
            for b in range(a + 1, len(red)):
                for cand in ctx._pair_candidates(red[a], red[b]):
                    if band.interior(cand.value):
                        raise PreRefinementError(
                            f"intra intersection at {cand.value!r} inside band "
                            f"({band.lam1!r}, {band.lam2!r})"
                        )
    blue = [j for j in arcs if alpha not in ctx.curves[j].owners]
    for i in red:
        own = set(ctx.curves[i].owners)
        for j in blue:
            if own & set(ctx.curves[j].owners):
                continue
            if not _arcs_overlap(arcs[i], arcs[j]):
                continue
            for cand in ctx._pair_candidates(i, j):
                # strictly inside: a crossing at exactly lam2 cannot shrink
                # the band, and refinement must make this test come back false
                if band.interior(cand.value):
                    return True
    return False


def _alpha_candidates(ctx: PairContext, alpha: tuple[int, int], band: Band):
    """All candidates of curves involving ``alpha`` with value in the band."""
    arcs = ctx.band_arcs(band)
    red = [i for i in ctx.curves_of.get(alpha, []) if i in arcs]
    out: list[CandidateValue] = []
    for i in red:
        for cand in ctx._max_candidates(i):
            if band.contains(cand.value):
                out.append(cand)
    for i in red:
        for j in arcs:
            if j == i:
                continue
            if j in red and j < i:
                continue  # red pair handled once
            if not _arcs_overlap(arcs[i], arcs[j]):
                continue
            for cand in ctx._pair_candidates(i, j):
                if band.contains(cand.value):
                    out.append(cand)
    return _dedup_candidates(out)


def refine_band(
    k1: Complex,
    k2: Complex,
    alpha: tuple[int, int],
    band: Band,
    ctx: PairContext | None = None,
    recompute: bool = False,
) -> Band:
    """Binary-search the alpha-candidates inside the band; the result brackets
    the distance and has no alpha-candidate in its interior."""
    ctx = ctx or PairContext(k1, k2)
    cands = _alpha_candidates(ctx, alpha, band)
    values: list[CandidateValue] = []
    for c in cands:
        if not values or c.value != values[-1].value:
            values.append(c)
    if not values:
        return band
    lo, hi = -1, len(values) - 1
    if not ctx.decide(values[hi].value, recompute=recompute):
        lam1 = max(band.lam1, values[hi].value)
        return Band(lam1, band.lam2, band.witness_theta, band.witness_provenance)
    while hi - lo > 1:
        mid = (hi + lo) // 2
        if ctx.decide(values[mid].value, recompute=recompute):
            hi = mid
        else:
            lo = mid
    lam2 = values[hi].value
    lam1 = values[lo].value if lo >= 0 else band.lam1
    return Band(lam1, lam2, values[hi].theta, values[hi].provenance)


def simplex_processing_order(k1: Complex, k2: Complex, seed: int) -> list[tuple[int, int]]:
    tags = [(0, i) for i in range(len(k1))] + [(1, j) for j in range(len(k2))]
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(tags))
    return [tags[int(p)] for p in perm]


def d_infty(
    k1: Complex,
    k2: Complex,
    seed: int = 0,
    ctx: PairContext | None = None,
    recompute: bool = False,
) -> DinfResult:
    """Exact max distance by randomized per-simplex band refinement.

    Bit-identical to :func:`d_infty_basic` for any seed; the seed only
    permutes the simplex processing order.  Stats report the number of
    positive existence tests (refinements).
    """
    ctx = ctx or PairContext(k1, k2)
    stats = {"mode": "pruned", "seed": seed, "existence_tests": 0, "refinements": 0}
    if not ctx.ess_ok:
        return DinfResult(INF, math.nan, stats)
    if ctx.decide(0.0, recompute=recompute):
        return DinfResult(0.0, 0.0, stats)
    band = pre_refine(k1, k2, ctx, recompute=recompute)
    for alpha in simplex_processing_order(k1, k2, seed):
        stats["existence_tests"] += 1
        if existence_test(k1, k2, alpha, band, ctx):
            stats["refinements"] += 1
            band = refine_band(k1, k2, alpha, band, ctx, recompute=recompute)
    stats["decide_calls"] = ctx.decide_calls
    stats["band"] = (band.lam1, band.lam2)
    return DinfResult(band.lam2, band.witness_theta, stats)


def sweep_audit(
    k1: Complex, k2: Complex, lam: float, stride: int = 7
) -> list[bool]:
    """Run one decision sweep comparing maintained pairings against fresh
    reductions every ``stride`` probes; returns the comparison results."""
    ctx = PairContext(k1, k2)
    audit: list[bool] = []
    _decide_sweep(ctx, lam, audit=audit, audit_stride=stride)
    return audit
