import math

import numpy as np
import pytest

from phtdist.complexes import (
    Complex,
    ComplexParseError,
    InvalidComplexError,
    Simplex,
    betti_numbers,
    enclosing_radius,
    parse_complex,
    serialize_complex,
)

from conftest import filled_triangle, hollow_triangle, make_complex, random_complex_2d


def test_parse_smallest_valid_input():
    k = parse_complex('{"dim":2,"vertices":[[0,0]],"simplices":[[0]]}')
    assert len(k) == 1
    assert k.simplices[0].vertex_ids == (0,)


def test_parse_full_triangle_accepted():
    text = (
        '{"dim": 2, "vertices": [[0,0],[1,0],[0,1]],'
        ' "simplices": [[0],[1],[2],[0,1],[0,2],[1,2],[0,1,2]]}'
    )
    assert len(parse_complex(text)) == 7


def test_parse_missing_face_rejected():
    text = (
        '{"dim": 2, "vertices": [[0,0],[1,0],[0,1]],'
        ' "simplices": [[0],[1],[2],[0,1],[0,2],[0,1,2]]}'
    )
    with pytest.raises(InvalidComplexError, match="missing face"):
        parse_complex(text)


def test_parse_errors():
    with pytest.raises(ComplexParseError):
        parse_complex("not json")
    with pytest.raises(InvalidComplexError, match="duplicate"):
        parse_complex('{"dim":2,"vertices":[[0,0]],"simplices":[[0],[0]]}')
    with pytest.raises(InvalidComplexError, match="out of range"):
        parse_complex('{"dim":2,"vertices":[[0,0]],"simplices":[[0],[1]]}')
    with pytest.raises(InvalidComplexError):
        parse_complex('{"dim":2,"vertices":[[0,0,1]],"simplices":[[0]]}')
    with pytest.raises(InvalidComplexError, match="empty"):
        parse_complex('{"dim":2,"vertices":[],"simplices":[]}')


def test_roundtrip_is_identity_on_canonical_form(rng):
    for n in (3, 8, 14):
        k = random_complex_2d(rng, n)
        text = serialize_complex(k)
        again = serialize_complex(parse_complex(text))
        assert text == again


def test_enclosing_radius_examples():
    assert enclosing_radius(make_complex(2, [[3.0, 4.0]], [(0,)])) == 5.0
    k = make_complex(2, [[1, 1], [-1, -1]], [(0,), (1,)])
    assert enclosing_radius(k) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert enclosing_radius(make_complex(2, [[0, 0]], [(0,)])) == 0.0


def test_enclosing_radius_vertex_order_invariance(rng):
    k = random_complex_2d(rng, 10)
    perm = rng.permutation(k.vertices.shape[0])
    inv = np.argsort(perm)
    verts = k.vertices[perm]
    simps = [tuple(sorted(int(inv[v]) for v in s.vertex_ids)) for s in k.simplices]
    k2 = make_complex(2, verts, simps)
    assert enclosing_radius(k) == enclosing_radius(k2)


def test_betti_numbers_examples():
    assert betti_numbers(hollow_triangle()) == (1, 1)
    two_points = make_complex(2, [[0, 0], [1, 0]], [(0,), (1,)])
    assert betti_numbers(two_points) == (2, 0)
    assert betti_numbers(filled_triangle()) == (1, 0)


def test_simplex_validation():
    with pytest.raises(InvalidComplexError):
        Simplex((1, 1))
    with pytest.raises(InvalidComplexError):
        Simplex((2, 1))
    assert Simplex((0, 2, 5)).dim == 2
    assert Simplex((0, 1)).faces() == (Simplex((1,)), Simplex((0,)))


def test_disconnected_accepted_empty_rejected():
    k = make_complex(2, [[0, 0], [5, 5]], [(0,), (1,)])
    assert betti_numbers(k)[0] == 2
    with pytest.raises(InvalidComplexError):
        Complex(2, np.zeros((0, 2)), [])
