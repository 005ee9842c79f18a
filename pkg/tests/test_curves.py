import math

import numpy as np
import pytest

from phtdist.complexes import TWO_PI, normalize_angle
from phtdist.curves import (
    curve_intersections,
    difference_curve,
    insertion_breakpoints,
    local_maxima,
    threshold_crossings,
    zero_events,
)

from conftest import hollow_triangle, make_complex, random_complex_2d, single_vertex

ORIGIN = single_vertex([0.0, 0.0])
UNIT_X = single_vertex([1.0, 0.0])
UNIT_Y = single_vertex([0.0, 1.0])
EDGE = make_complex(2, [[0.0, 0.0], [1.0, 0.0]], [(0,), (1,), (0, 1)])


def close_set(a, b, tol=1e-12):
    a, b = sorted(a), sorted(b)
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def test_breakpoints_single_vertex():
    assert insertion_breakpoints(ORIGIN, 0) == []


def test_breakpoints_edge():
    bps = insertion_breakpoints(EDGE, 2)
    assert close_set(bps, [math.pi / 2, 3 * math.pi / 2])


def test_breakpoints_triangle_against_dense_scan():
    k = hollow_triangle()
    tri = make_complex(
        2,
        [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)],
    )
    sid = tri.index[(0, 1, 2)]
    bps = insertion_breakpoints(tri, sid)
    # dense scan oracle: argmax changes between consecutive samples
    samples = np.linspace(0, TWO_PI, 200003)
    ids = tri.simplices[sid].vertex_ids
    hts = tri.vertices[list(ids)] @ np.column_stack([np.cos(samples), np.sin(samples)]).T
    arg = hts.argmax(axis=0)
    changes = samples[:-1][arg[:-1] != arg[1:]]
    assert len(changes) == len(bps)
    for c in changes:
        assert min(abs(c - b) for b in bps) < 1e-4


def test_difference_curve_two_vertices():
    c = difference_curve(UNIT_X, 0, ORIGIN, 0)
    assert len(c.pieces) == 1
    for t in np.linspace(0, TWO_PI, 37):
        assert c.value(t) == pytest.approx(abs(math.cos(t)), abs=1e-15)


def test_difference_curve_same_complex_half_factor():
    k = make_complex(2, [[1.0, 0.0], [0.0, 0.0]], [(0,), (1,)])
    c = difference_curve(k, 0, k, 1)
    assert c.factor == 0.5
    for t in np.linspace(0, TWO_PI, 37):
        assert c.value(t) == pytest.approx(0.5 * abs(math.cos(t)), abs=1e-15)


def test_difference_curve_edge_vs_vertex_random_spot_checks(rng):
    k1 = make_complex(2, [[0.3, -0.4], [1.1, 0.9]], [(0,), (1,), (0, 1)])
    k2 = single_vertex([0.2, 0.7])
    c = difference_curve(k1, 2, k2, 0)
    assert len(c.pieces) <= 13
    for t in rng.uniform(0, TWO_PI, size=100):
        w = np.array([math.cos(t), math.sin(t)])
        direct = abs(k1.simplex_values(w)[2] - k2.simplex_values(w)[0])
        assert c.value(float(t)) == pytest.approx(direct, abs=1e-9)


def test_difference_curve_continuity(rng):
    k1 = random_complex_2d(rng, 7)
    k2 = random_complex_2d(rng, 7)
    c = difference_curve(k1, len(k1) - 1, k2, len(k2) - 1)
    for p in c.pieces:
        left = c.value(p.lo - 1e-9)
        right = c.value(p.lo + 1e-9)
        assert abs(left - right) < 1e-6


def test_local_maxima_abs_cos():
    c = difference_curve(UNIT_X, 0, ORIGIN, 0)
    evs = local_maxima(c)
    assert close_set([e.theta for e in evs], [0.0, math.pi])
    assert all(e.value == pytest.approx(1.0, abs=1e-15) for e in evs)


def test_local_maxima_half_factor():
    k = make_complex(2, [[1.0, 0.0], [0.0, 0.0]], [(0,), (1,)])
    evs = local_maxima(difference_curve(k, 0, k, 1))
    assert all(e.value == pytest.approx(0.5, abs=1e-15) for e in evs)


def test_local_maxima_vs_dense_scan(rng):
    k1 = make_complex(2, [[0.3, -0.4], [1.1, 0.9]], [(0,), (1,), (0, 1)])
    k2 = single_vertex([0.2, 0.7])
    c = difference_curve(k1, 2, k2, 0)
    evs = local_maxima(c)
    ts = np.linspace(0, TWO_PI, 100001)[:-1]
    vals = np.array([c.value(float(t)) for t in ts])
    step = ts[1] - ts[0]
    # every dense-scan local max should be near a reported event
    idx = np.nonzero(
        (vals > np.roll(vals, 1)) & (vals >= np.roll(vals, -1)) & (vals > 1e-9)
    )[0]
    for i in idx:
        assert min(abs(ts[i] - e.theta) for e in evs) < 2 * step
    # and every reported event value re-evaluates on the curve
    for e in evs:
        assert c.value(e.theta) == pytest.approx(e.value, abs=1e-9)


def test_threshold_crossings_closed_form():
    c = difference_curve(UNIT_X, 0, ORIGIN, 0)
    got = threshold_crossings(c, 0.5)
    expect = [math.pi / 3, 2 * math.pi / 3, 4 * math.pi / 3, 5 * math.pi / 3]
    assert close_set(got, expect, tol=1e-12)


def test_threshold_above_amplitude_empty():
    c = difference_curve(UNIT_X, 0, ORIGIN, 0)
    assert threshold_crossings(c, 1.5) == []


def test_threshold_tangency_two_angles():
    c = difference_curve(UNIT_X, 0, ORIGIN, 0)
    got = threshold_crossings(c, 1.0)
    assert close_set(got, [0.0, math.pi], tol=1e-12)


def test_intersections_cos_vs_sin():
    c1 = difference_curve(UNIT_X, 0, ORIGIN, 0)
    c2 = difference_curve(UNIT_Y, 0, ORIGIN, 0)
    evs = curve_intersections(c1, c2)
    assert close_set(
        [e.theta for e in evs],
        [math.pi / 4, 3 * math.pi / 4, 5 * math.pi / 4, 7 * math.pi / 4],
        tol=1e-12,
    )
    for e in evs:
        assert e.value == pytest.approx(math.sqrt(2) / 2, abs=1e-12)


def test_intersections_scaled_copies_touch_at_zero():
    k = make_complex(2, [[1.0, 0.0], [0.0, 0.0]], [(0,), (1,)])
    full = difference_curve(UNIT_X, 0, ORIGIN, 0)
    half = difference_curve(k, 0, k, 1)
    evs = curve_intersections(full, half)
    assert close_set([e.theta for e in evs], [math.pi / 2, 3 * math.pi / 2], 1e-12)
    assert all(abs(e.value) < 1e-15 for e in evs)


def test_identical_pieces_yield_overlap_endpoints_only():
    other = single_vertex([1.0, 0.0])
    c1 = difference_curve(UNIT_X, 0, ORIGIN, 0)
    c2 = difference_curve(other, 0, ORIGIN, 0, side_a=1, side_b=1, same_complex=False)
    evs = curve_intersections(c1, c2)
    assert all(e.kind == "OverlapEndpoint" for e in evs)


def test_event_values_reevaluate_on_curve(rng):
    for _ in range(10):
        k1 = random_complex_2d(rng, 6)
        k2 = random_complex_2d(rng, 6)
        a = int(rng.integers(len(k1)))
        b = int(rng.integers(len(k2)))
        c1 = difference_curve(k1, a, k2, b)
        c2 = difference_curve(k1, (a + 1) % len(k1), k2, b, side_b=1)
        if c1.owners == c2.owners:
            continue
        for e in curve_intersections(c1, c2):
            assert c1.value(e.theta) == pytest.approx(e.value, abs=1e-9)


def test_zero_events_are_zeros_of_same_complex_curves(rng):
    k = random_complex_2d(rng, 8)
    for a in range(len(k)):
        for b in range(a + 1, min(a + 3, len(k))):
            c = difference_curve(k, a, k, b, side_a=0, side_b=0, same_complex=True)
            for e in zero_events(c):
                assert c.value(e.theta) <= 1e-9


def test_threshold_crossing_count_audit(rng):
    # total crossings over all curves stays within C * n^2
    for n in (6, 10, 15):
        k1 = random_complex_2d(rng, n)
        k2 = random_complex_2d(rng, n)
        lam = float(rng.uniform(0.1, 1.5))
        total = 0
        curves = []
        for a in range(len(k1)):
            for b in range(len(k2)):
                curves.append(difference_curve(k1, a, k2, b))
        for c in curves:
            total += len(threshold_crossings(c, lam))
        assert total <= 50 * n * n
