import math

import numpy as np
import pytest

from phtdist.complexes import betti_numbers
from phtdist.persistence import (
    PairingState,
    compute_persistence,
    diagram_from_csv,
    lower_star_filtration,
)

from conftest import hollow_triangle, make_complex, random_complex_2d

EDGE = make_complex(2, [[0.0, 0.0], [1.0, 0.0]], [(0,), (1,), (0, 1)])


def test_lower_star_edge_theta_zero():
    f = lower_star_filtration(EDGE, 0.0)
    assert np.allclose(f.values, [0.0, 1.0, 1.0])
    assert list(f.order) == [0, 1, 2]


def test_lower_star_tie_broken_by_dim_then_id():
    f = lower_star_filtration(EDGE, math.pi / 2)
    assert np.allclose(f.values, [0.0, 0.0, 0.0])
    assert list(f.order) == [0, 1, 2]


def test_lower_star_hollow_triangle_by_hand():
    k = hollow_triangle()
    f = lower_star_filtration(k, 0.0)
    # vertices (0,0),(1,0),(0,1) then edges 01, 02, 12
    assert np.allclose(f.values, [0.0, 1.0, 0.0, 1.0, 0.0, 1.0])


def test_single_vertex_diagram():
    k = make_complex(2, [[0.0, 0.0]], [(0,)])
    d = compute_persistence(lower_star_filtration(k, 0.0))
    assert len(d.pairs) == 1
    p = d.pairs[0]
    assert p.dim == 0 and p.birth == 0.0 and p.essential


def test_path_diagram():
    d = compute_persistence(lower_star_filtration(EDGE, 0.0))
    ess = d.essentials(0)
    fin = [p for p in d.pairs if not p.essential]
    assert len(ess) == 1 and ess[0].birth == 0.0
    assert len(fin) == 1
    assert fin[0].birth == fin[0].death == 1.0
    assert fin[0].zero_persistence


def test_hollow_triangle_diagram_hand_reduction():
    # heights 0, 1, 0: essential H0 at 0, H0 pair (0,0), H0 pair (1,1),
    # essential H1 born at 1 (frozen from a hand reduction of the 6 columns)
    d = compute_persistence(lower_star_filtration(hollow_triangle(), 0.0))
    h0 = sorted((p.birth, p.death) for p in d.pairs if p.dim == 0)
    h1 = [(p.birth, p.death) for p in d.pairs if p.dim == 1]
    assert h0 == [(0.0, 0.0), (0.0, math.inf), (1.0, 1.0)]
    assert h1 == [(1.0, math.inf)]


def test_essential_counts_match_betti(rng):
    for n in (4, 8, 12, 16):
        k = random_complex_2d(rng, n)
        betti = betti_numbers(k)
        for theta in rng.uniform(0, 2 * math.pi, size=5):
            d = compute_persistence(lower_star_filtration(k, float(theta)))
            for dim in (0, 1):
                assert len(d.essentials(dim)) == betti[dim]


def test_diagram_multiset_death_ge_birth(rng):
    for n in (6, 10):
        k = random_complex_2d(rng, n)
        d = compute_persistence(lower_star_filtration(k, float(rng.uniform(0, 6))))
        for p in d.pairs:
            assert p.death >= p.birth


def test_diagram_csv_roundtrip():
    d = compute_persistence(lower_star_filtration(hollow_triangle(), 0.25))
    again = diagram_from_csv(d.to_csv())
    assert [
        (p.dim, p.birth, p.death, p.birth_simplex, p.death_simplex) for p in d.pairs
    ] == [
        (p.dim, p.birth, p.death, p.birth_simplex, p.death_simplex)
        for p in again.pairs
    ]


# -- vineyard updates ---------------------------------------------------------


def _legal_positions(state: PairingState):
    out = []
    for i in range(len(state.order) - 1):
        a = state.complex.simplices[state.order[i]]
        b = state.complex.simplices[state.order[i + 1]]
        if a.dim != b.dim and (a.contains(b) or b.contains(a)):
            continue
        out.append(i)
    return out


def _diagram_key(state: PairingState):
    return sorted(
        (state.complex.simplices[b].dim, b, d) for b, d in state.pairing()
        if d is not None
    ) + sorted(
        (state.complex.simplices[b].dim, b) for b, d in state.pairing() if d is None
    )


def test_transpose_involution(rng):
    k = random_complex_2d(rng, 12)
    f = lower_star_filtration(k, 0.3)
    state = PairingState.from_filtration(f)
    before = _diagram_key(state)
    pos = _legal_positions(state)[0]
    state.transpose(pos)
    state.transpose(pos)
    assert _diagram_key(state) == before


def test_transpose_matches_recompute_on_path():
    f = lower_star_filtration(EDGE, math.pi / 2)
    state = PairingState.from_filtration(f)
    state.transpose(0)  # swap the two vertices
    fresh = PairingState(EDGE, state.order)
    assert _diagram_key(state) == _diagram_key(fresh)


def test_transpose_illegal_swap_raises():
    f = lower_star_filtration(EDGE, math.pi / 2)
    state = PairingState.from_filtration(f)
    with pytest.raises(ValueError, match="incident"):
        state.transpose(1)  # vertex 1 against edge (0,1)


def test_random_transpositions_match_recompute(rng):
    for trial in range(20):
        k = random_complex_2d(rng, 10)
        theta = float(rng.uniform(0, 2 * math.pi))
        state = PairingState.from_filtration(lower_star_filtration(k, theta))
        for _ in range(25):
            legal = _legal_positions(state)
            if not legal:
                break
            i = int(rng.choice(legal))
            state.transpose(i)
            fresh = PairingState(k, state.order)
            assert _diagram_key(state) == _diagram_key(fresh)
