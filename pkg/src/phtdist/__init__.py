"""Exact and certified distances between persistent homology transforms."""

from .complexes import (
    Complex,
    InvalidComplexError,
    ComplexParseError,
    Simplex,
    betti_numbers,
    enclosing_radius,
    parse_complex,
    serialize_complex,
)
from .persistence import (
    Diagram,
    Filtration,
    PairingState,
    PersistencePair,
    compute_persistence,
    lower_star_filtration,
)
from .bottleneck import (
    BipartiteInstance,
    Matching,
    bottleneck_distance,
    build_instance,
    decide_matching,
    repair_matching,
)
from .curves import (
    CurvePiece,
    DifferenceCurve,
    EventPoint,
    curve_intersections,
    difference_curve,
    insertion_breakpoints,
    local_maxima,
    threshold_crossings,
)
from .oracle import (
    H_profile,
    evaluate_H,
    exhaustive_bottleneck,
    sampled_d1,
    sampled_dinf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
