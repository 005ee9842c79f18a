"""Directional lower-star filtrations, persistence pairing, vineyard updates.

The reduction works over GF(2) with columns stored as Python integers
(bitmasks over filtration positions).  A :class:`PairingState` keeps the
reduced matrix R together with the upper-triangular U of the decomposition
D = R*U, which is exactly the bookkeeping needed to apply one adjacent
transposition in O(n) and read the updated pairing off the lows of R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .complexes import Complex, check_unit3, direction_vector


@dataclass(frozen=True)
class PersistencePair:
    """One persistence point with simplex provenance.

    ``death_simplex is None`` iff the class is essential (death = +inf).
    """

    dim: int
    birth: float
    death: float
    birth_simplex: int
    death_simplex: int | None

    @property
    def essential(self) -> bool:
        return self.death_simplex is None

    @property
    def zero_persistence(self) -> bool:
        return (not self.essential) and self.birth == self.death


@dataclass(frozen=True)
class Diagram:
    """Multiset of persistence pairs at one direction."""

    pairs: tuple[PersistencePair, ...]
    direction: object = None

    def finite(self, dim: int | None = None, drop_zero: bool = True):
        out = []
        for p in self.pairs:
            if p.essential:
                continue
            if dim is not None and p.dim != dim:
                continue
            if drop_zero and p.zero_persistence:
                continue
            out.append(p)
        return out

    def essentials(self, dim: int | None = None):
        return [
            p for p in self.pairs if p.essential and (dim is None or p.dim == dim)
        ]

    def dims(self) -> list[int]:
        return sorted({p.dim for p in self.pairs})

    def to_csv(self) -> str:
        lines = ["dim,birth,death,birth_simplex,death_simplex"]
        for p in self.pairs:
            death = "inf" if p.essential else format(p.death, ".17g")
            dsid = "" if p.death_simplex is None else str(p.death_simplex)
            lines.append(
                f"{p.dim},{format(p.birth, '.17g')},{death},{p.birth_simplex},{dsid}"
            )
        return "\n".join(lines) + "\n"


def diagram_from_csv(text: str) -> Diagram:
    """Inverse of :meth:`Diagram.to_csv`."""
    rows = [r.strip() for r in text.strip().splitlines() if r.strip()]
    if not rows or rows[0].split(",")[:3] != ["dim", "birth", "death"]:
        raise ValueError("diagram CSV must start with header dim,birth,death,...")
    pairs = []
    for row in rows[1:]:
        parts = row.split(",")
        if len(parts) < 3:
            raise ValueError(f"bad diagram row: {row!r}")
        dim = int(parts[0])
        birth = float(parts[1])
        death = math.inf if parts[2] == "inf" else float(parts[2])
        bsid = int(parts[3]) if len(parts) > 3 and parts[3] != "" else -1
        dsid = (
            int(parts[4])
            if len(parts) > 4 and parts[4] not in ("", "inf")
            else None
        )
        if math.isinf(death):
            dsid = None
        pairs.append(PersistencePair(dim, birth, death, bsid, dsid))
    return Diagram(tuple(pairs))


@dataclass(frozen=True)
class Filtration:
    """Simplices of one complex ordered by (value, dim, id)."""

    complex: Complex
    values: np.ndarray          # per simplex id
    order: np.ndarray           # position -> simplex id
    direction: object = None

    def entries(self) -> list[tuple[int, float]]:
        return [(int(sid), float(self.values[sid])) for sid in self.order]


def filtration_order(complex_: Complex, values: np.ndarray) -> np.ndarray:
    """Ascending-value order with ties broken by (dim, simplex id).

    The canonical simplex order is already sorted by (dim, id), so a stable
    sort on the values alone realizes the full tie-break rule.
    """
    return np.argsort(values, kind="stable")


def lower_star_filtration(complex_: Complex, omega) -> Filtration:
    """Filtration induced by the height function of direction ``omega``.

    ``omega`` is an angle for planar complexes and a unit 3-vector in 3-space.
    Each simplex enters at the max height of its vertices.
    """
    if complex_.ambient_dim == 2:
        w = direction_vector(float(omega))
    else:
        w = check_unit3(omega)
    values = complex_.simplex_values(w)
    return Filtration(complex_, values, filtration_order(complex_, values), omega)


# -- reduction ---------------------------------------------------------------


def _reduce_columns(cols: list[int]) -> tuple[list[int], list[int], dict[int, int]]:
    """Standard column reduction; returns (R, U_rows, low->column map).

    Maintains D = R*U where U is upper unitriangular, stored row-wise.
    """
    n = len(cols)
    R = list(cols)
    U = [1 << j for j in range(n)]
    low_to: dict[int, int] = {}
    for j in range(n):
        col = R[j]
        while col:
            low = col.bit_length() - 1
            k = low_to.get(low)
            if k is None:
                low_to[low] = j
                break
            col ^= R[k]
            U[k] ^= U[j]
        R[j] = col
    return R, U, low_to


def _boundary_columns(complex_: Complex, order: Sequence[int]) -> list[int]:
    pos = {int(sid): p for p, sid in enumerate(order)}
    cols = []
    for sid in order:
        mask = 0
        for fid in complex_.face_ids[int(sid)]:
            mask ^= 1 << pos[fid]
        cols.append(mask)
    return cols


def _pairs_from_reduction(
    complex_: Complex,
    order: Sequence[int],
    R: Sequence[int],
    values: np.ndarray,
    direction,
) -> Diagram:
    n = len(R)
    killed = [False] * n
    pairs = []
    for j in range(n):
        if R[j]:
            i = R[j].bit_length() - 1
            killed[i] = True
            killed[j] = True
            bsid, dsid = int(order[i]), int(order[j])
            pairs.append(
                PersistencePair(
                    complex_.simplices[bsid].dim,
                    float(values[bsid]),
                    float(values[dsid]),
                    bsid,
                    dsid,
                )
            )
    for i in range(n):
        if not killed[i] and R[i] == 0:
            bsid = int(order[i])
            pairs.append(
                PersistencePair(
                    complex_.simplices[bsid].dim,
                    float(values[bsid]),
                    math.inf,
                    bsid,
                    None,
                )
            )
    pairs.sort(key=lambda p: (p.dim, p.birth, p.death, p.birth_simplex))
    return Diagram(tuple(pairs), direction)


def compute_persistence(filtration: Filtration) -> Diagram:
    """Persistence diagram of a filtration by column reduction over GF(2).

    Zero-persistence pairs are retained (callers drop them as needed);
    essential classes carry death = +inf.
    """
    cols = _boundary_columns(filtration.complex, filtration.order)
    R, _, _ = _reduce_columns(cols)
    return _pairs_from_reduction(
        filtration.complex, filtration.order, R, filtration.values, filtration.direction
    )


# -- vineyard state ----------------------------------------------------------


def _swap_bits(x: int, i: int) -> int:
    """Exchange bits i and i+1 of x."""
    b = (x >> i) & 3
    if b == 1 or b == 2:
        x ^= 3 << i
    return x


class PairingState:
    """Mutable R=DU bookkeeping supporting adjacent transpositions.

    The pairing read from this state always equals a from-scratch reduction
    of the current order; ``transpose`` keeps that invariant in O(n) work.
    Single-owner mutable: never share across threads.
    """

    def __init__(self, complex_: Complex, order: Sequence[int]):
        self.complex = complex_
        self.order = [int(s) for s in order]
        self.pos = {sid: p for p, sid in enumerate(self.order)}
        cols = _boundary_columns(complex_, self.order)
        self.R, self.U, self.low_to = _reduce_columns(cols)

    @classmethod
    def from_filtration(cls, filtration: Filtration) -> "PairingState":
        return cls(filtration.complex, filtration.order)

    # pairing extraction ----------------------------------------------------

    def pairing(self) -> list[tuple[int, int | None]]:
        """List of (birth simplex, death simplex or None) in current order."""
        n = len(self.order)
        killed = [False] * n
        out: list[tuple[int, int | None]] = []
        for j in range(n):
            if self.R[j]:
                i = self.R[j].bit_length() - 1
                killed[i] = True
                killed[j] = True
                out.append((self.order[i], self.order[j]))
        for i in range(n):
            if not killed[i] and self.R[i] == 0:
                out.append((self.order[i], None))
        return out

    def diagram(self, values: np.ndarray, direction=None) -> Diagram:
        """Diagram with the maintained pairing and the supplied values."""
        pairs = []
        for bsid, dsid in self.pairing():
            dim = self.complex.simplices[bsid].dim
            if dsid is None:
                pairs.append(PersistencePair(dim, float(values[bsid]), math.inf, bsid, None))
            else:
                pairs.append(
                    PersistencePair(dim, float(values[bsid]), float(values[dsid]), bsid, dsid)
                )
        pairs.sort(key=lambda p: (p.dim, p.birth, p.death, p.birth_simplex))
        return Diagram(tuple(pairs), direction)

    # transposition ----------------------------------------------------------

    def _swap_rows_cols(self, i: int) -> None:
        R, U = self.R, self.U
        for j in range(len(R)):
            R[j] = _swap_bits(R[j], i)          # row swap in R
            U[j] = _swap_bits(U[j], i)          # column swap in U
        R[i], R[i + 1] = R[i + 1], R[i]          # column swap in R
        U[i], U[i + 1] = U[i + 1], U[i]          # row swap in U
        a, b = self.order[i], self.order[i + 1]
        self.order[i], self.order[i + 1] = b, a
        self.pos[a], self.pos[b] = i + 1, i

    def _rebuild_lows(self) -> None:
        self.low_to = {
            R_j.bit_length() - 1: j for j, R_j in enumerate(self.R) if R_j
        }

    def transpose(self, i: int) -> None:
        """Swap filtration positions i and i+1, repairing R and U in place.

        Raises ValueError for incident simplices (the swap would break
        face-before-coface validity).
        """
        R, U = self.R, self.U
        n = len(R)
        if not (0 <= i < n - 1):
            raise ValueError(f"position {i} out of range")
        a, b = self.order[i], self.order[i + 1]
        sa, sb = self.complex.simplices[a], self.complex.simplices[b]
        if sa.dim != sb.dim and (sb.contains(sa) or sa.contains(sb)):
            raise ValueError(f"cannot transpose incident simplices {a}, {b}")
        u_linked = bool((U[i] >> (i + 1)) & 1)
        i_birth = R[i] == 0
        i1_birth = R[i + 1] == 0

        if i_birth and i1_birth:
            if u_linked:
                U[i] ^= U[i + 1]  # column i of R is zero, so R is unchanged
            k = self.low_to.get(i)
            l = self.low_to.get(i + 1)
            conflict = k is not None and l is not None and bool((R[l] >> i) & 1)
            self._swap_rows_cols(i)
            if conflict:
                x, y = (k, l) if k < l else (l, k)
                R[y] ^= R[x]
                U[x] ^= U[y]
        elif not i_birth and not i1_birth:
            if u_linked:
                if R[i].bit_length() < R[i + 1].bit_length():
                    R[i + 1] ^= R[i]
                    U[i] ^= U[i + 1]
                    self._swap_rows_cols(i)
                else:
                    R[i + 1] ^= R[i]
                    U[i] ^= U[i + 1]
                    self._swap_rows_cols(i)
                    R[i + 1] ^= R[i]
                    U[i] ^= U[i + 1]
            else:
                self._swap_rows_cols(i)
        elif i_birth and not i1_birth:
            if u_linked:
                U[i] ^= U[i + 1]  # again no-op on R
            self._swap_rows_cols(i)
        else:  # death then birth
            if u_linked:
                R[i + 1] ^= R[i]
                U[i] ^= U[i + 1]
                self._swap_rows_cols(i)
                R[i + 1] ^= R[i]
                U[i] ^= U[i + 1]
            else:
                self._swap_rows_cols(i)
        self._rebuild_lows()

    # reordering ---------------------------------------------------------------

    def transpositions_to(self, target_order: Sequence[int]) -> int:
        """Bubble the current order into ``target_order`` via legal transpositions.

        Both orders must be filtration-valid, which guarantees no swap ever
        involves a face/coface pair.  Returns the number of transpositions.
        """
        rank = {int(sid): r for r, sid in enumerate(target_order)}
        perm = [rank[sid] for sid in self.order]
        count = 0
        n = len(perm)
        swapped = True
        while swapped:
            swapped = False
            for j in range(n - 1):
                if perm[j] > perm[j + 1]:
                    self.transpose(j)
                    perm[j], perm[j + 1] = perm[j + 1], perm[j]
                    count += 1
                    swapped = True
        return count


def transpose(state: PairingState, i: int) -> PairingState:
    """Functional wrapper over :meth:`PairingState.transpose` (mutates and returns)."""
    state.transpose(i)
    return state
