"""Embedded simplicial complexes: data model, parsing, validation, global constants.

A complex is a list of vertex coordinates in R^2 or R^3 together with a
face-closed list of simplices given by sorted vertex-index tuples.  The
canonical simplex order is (dimension, lexicographic vertex ids); all
filtration tie-breaking downstream relies on this order being fixed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class InvalidComplexError(ValueError):
    """Structural validation failure: closure, indices, arity, duplicates."""


class ComplexParseError(InvalidComplexError):
    """The textual input could not be decoded as a complex at all."""


def normalize_angle(theta: float) -> float:
    """Map an angle to the canonical range [0, 2*pi)."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # guards fmod rounding at the seam
        t -= TWO_PI
    return t


def direction_vector(theta: float) -> np.ndarray:
    """Unit vector (cos t, sin t) for a planar direction angle."""
    return np.array([math.cos(theta), math.sin(theta)])


def check_unit3(omega: Sequence[float], tol: float = 1e-12) -> np.ndarray:
    """Validate a 3-space direction: unit norm within ``tol``."""
    w = np.asarray(omega, dtype=float)
    if w.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {w.shape}")
    if abs(float(np.dot(w, w)) - 1.0) > 3.0 * tol:
        raise ValueError(f"direction must have unit norm, got |w|^2 = {np.dot(w, w)!r}")
    return w


@dataclass(frozen=True, order=True)
class Simplex:
    """A simplex as a strictly increasing tuple of vertex indices."""

    vertex_ids: tuple[int, ...]

    def __post_init__(self):
        ids = self.vertex_ids
        if len(ids) == 0:
            raise InvalidComplexError("empty simplex")
        if any((not isinstance(i, int)) or i < 0 for i in ids):
            raise InvalidComplexError(f"simplex indices must be non-negative integers: {ids}")
        if any(a >= b for a, b in zip(ids, ids[1:])):
            raise InvalidComplexError(f"simplex indices must be strictly increasing: {ids}")

    @property
    def dim(self) -> int:
        return len(self.vertex_ids) - 1

    def faces(self) -> tuple["Simplex", ...]:
        """Codimension-1 faces (empty for vertices)."""
        if self.dim == 0:
            return ()
        ids = self.vertex_ids
        return tuple(
            Simplex(ids[:k] + ids[k + 1 :]) for k in range(len(ids))
        )

    def contains(self, other: "Simplex") -> bool:
        return set(other.vertex_ids).issubset(self.vertex_ids)


class Complex:
    """Validated embedded simplicial complex, immutable after construction.

    Simplices are stored fully (closure explicit) in canonical order; the
    integer position of a simplex in ``simplices`` is its id everywhere in
    this package.
    """

    def __init__(self, ambient_dim: int, vertices, simplices: Iterable[Simplex]):
        if ambient_dim not in (2, 3):
            raise InvalidComplexError(f"ambient dimension must be 2 or 3, got {ambient_dim}")
        verts = np.asarray(vertices, dtype=float)
        if verts.size == 0:
            verts = verts.reshape(0, ambient_dim)
        if verts.ndim != 2 or verts.shape[1] != ambient_dim:
            raise InvalidComplexError(
                f"vertex array must have shape (n, {ambient_dim}), got {verts.shape}"
            )
        if not np.all(np.isfinite(verts)):
            raise InvalidComplexError("vertex coordinates must be finite")
        simps = sorted(simplices, key=lambda s: (s.dim, s.vertex_ids))
        if not simps:
            raise InvalidComplexError("empty complex")
        nv = verts.shape[0]
        seen: set[tuple[int, ...]] = set()
        for s in simps:
            if s.dim > ambient_dim:
                raise InvalidComplexError(f"simplex {s.vertex_ids} exceeds ambient dimension")
            if s.vertex_ids in seen:
                raise InvalidComplexError(f"duplicate simplex {s.vertex_ids}")
            seen.add(s.vertex_ids)
            if s.vertex_ids[-1] >= nv:
                raise InvalidComplexError(f"vertex index out of range in {s.vertex_ids}")
        for s in simps:
            for f in s.faces():
                if f.vertex_ids not in seen:
                    raise InvalidComplexError(
                        f"missing face {f.vertex_ids} of simplex {s.vertex_ids}"
                    )

        self.ambient_dim = ambient_dim
        self.vertices = verts
        self.vertices.setflags(write=False)
        self.simplices: tuple[Simplex, ...] = tuple(simps)
        self.index: dict[tuple[int, ...], int] = {
            s.vertex_ids: i for i, s in enumerate(self.simplices)
        }
        self.dims = np.array([s.dim for s in self.simplices], dtype=np.int64)
        # padded member table: repeating the first vertex leaves max() intact
        width = int(self.dims.max()) + 1
        members = np.zeros((len(self.simplices), width), dtype=np.int64)
        for i, s in enumerate(self.simplices):
            row = list(s.vertex_ids)
            row += [row[0]] * (width - len(row))
            members[i] = row
        self._members = members
        face_ids: list[tuple[int, ...]] = []
        for s in self.simplices:
            face_ids.append(tuple(self.index[f.vertex_ids] for f in s.faces()))
        self.face_ids: tuple[tuple[int, ...], ...] = tuple(face_ids)

    # -- geometry ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.simplices)

    def vertex_heights(self, omega: np.ndarray) -> np.ndarray:
        """Inner products <v, omega> for every stored vertex coordinate."""
        return self.vertices @ np.asarray(omega, dtype=float)

    def simplex_values(self, omega: np.ndarray) -> np.ndarray:
        """Lower-star value per simplex: max vertex height in direction omega."""
        h = self.vertex_heights(omega)
        return h[self._members].max(axis=1)

    def simplex_values_many(self, directions: np.ndarray) -> np.ndarray:
        """Lower-star values for a (k, m) batch of directions, shape (n_simplices, k)."""
        h = self.vertices @ np.asarray(directions, dtype=float).T
        return h[self._members].max(axis=1)

    def active_vertex(self, simplex_id: int, omega: np.ndarray) -> int:
        """Vertex of the simplex achieving the max height (lowest index on ties)."""
        ids = self.simplices[simplex_id].vertex_ids
        h = self.vertices[list(ids)] @ np.asarray(omega, dtype=float)
        return ids[int(np.argmax(h))]


def enclosing_radius(complex_: Complex) -> float:
    """Maximum Euclidean norm over the stored vertex coordinates."""
    if complex_.vertices.shape[0] == 0:
        raise InvalidComplexError("empty complex")
    return float(np.sqrt((complex_.vertices**2).sum(axis=1)).max())


# -- parsing / serialization ---------------------------------------------


def parse_complex(text: str) -> Complex:
    """Parse the canonical JSON form and return a validated :class:`Complex`.

    Format: ``{"dim": 2|3, "vertices": [[x, y(, z)], ...],
    "simplices": [[i], [i, j], ...]}``.  Validation is strict: the simplex
    list must be face-closed and duplicate-free.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexParseError(f"malformed input: {exc}") from exc
    if not isinstance(obj, dict):
        raise ComplexParseError("top-level value must be an object")
    for key in ("dim", "vertices", "simplices"):
        if key not in obj:
            raise ComplexParseError(f"missing field {key!r}")
    dim = obj["dim"]
    if dim not in (2, 3):
        raise InvalidComplexError(f"'dim' must be 2 or 3, got {dim!r}")
    vertices = obj["vertices"]
    if not isinstance(vertices, list) or not all(
        isinstance(v, list) and len(v) == dim for v in vertices
    ):
        raise InvalidComplexError("each vertex must be a coordinate list of length 'dim'")
    raw = obj["simplices"]
    if not isinstance(raw, list):
        raise InvalidComplexError("'simplices' must be a list")
    simplices = []
    for entry in raw:
        if not isinstance(entry, list):
            raise InvalidComplexError(f"simplex must be a list of indices, got {entry!r}")
        simplices.append(Simplex(tuple(sorted(int(i) for i in entry))))
    return Complex(dim, vertices, simplices)


def serialize_complex(complex_: Complex) -> str:
    """Emit the canonical sorted JSON form (stable bytes for equal complexes)."""
    obj = {
        "dim": complex_.ambient_dim,
        "vertices": [[float(x) for x in row] for row in complex_.vertices],
        "simplices": [list(s.vertex_ids) for s in complex_.simplices],
    }
    return json.dumps(obj, separators=(", ", ": "))


def load_complex(path: str) -> Complex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


# -- Betti numbers over GF(2) ---------------------------------------------


def _boundary_rank(complex_: Complex, k: int) -> int:
    """Rank over GF(2) of the boundary map from k-simplices to (k-1)-simplices."""
    if k == 0:
        return 0
    cols = []
    rows_of_dim = [i for i, s in enumerate(complex_.simplices) if s.dim == k - 1]
    row_pos = {sid: r for r, sid in enumerate(rows_of_dim)}
    for i, s in enumerate(complex_.simplices):
        if s.dim != k:
            continue
        mask = 0
        for fid in complex_.face_ids[i]:
            mask ^= 1 << row_pos[fid]
        cols.append(mask)
    rank = 0
    pivots: dict[int, int] = {}
    for col in cols:
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                rank += 1
                break
            col ^= other
    return rank


def betti_numbers(complex_: Complex) -> tuple[int, ...]:
    """Betti numbers of the complex over GF(2).

    Returns dims 0..1 in the plane and dims 0..3 in 3-space.  Computed by
    Gaussian elimination on the boundary maps, independently of the
    persistence reduction.
    """
    top = 1 if complex_.ambient_dim == 2 else 3
    counts = [int((complex_.dims == k).sum()) for k in range(top + 2)]
    ranks = [_boundary_rank(complex_, k) for k in range(top + 2)]
    betti = []
    for k in range(top + 1):
        betti.append(counts[k] - ranks[k] - ranks[k + 1])
    return tuple(betti)
