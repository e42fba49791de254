"""Refined tropical descendant invariants of toric surfaces.

Exact Laurent-polynomial weights for marked vertices, a lattice-path
backend over rag rugs and their completions, and a direct enumeration
backend used as an independent oracle on small instances.
"""
from .direct import Limits, MarkedTreeType, compute_rd_direct, enumerate_types, solve_positions
from .errors import (
    Asymmetric,
    LimitExceeded,
    NonGeneric,
    OddShape,
    PreconditionError,
    ProfileMismatch,
    TropicalError,
    Unbalanced,
    UnmarkedMultivalent,
    Unsupported,
)
from .lattice import Degree, LatticePolygon, classify_cell, cubic_degree, newton_polygon, polygon_metrics
from .refined import (
    Laurent,
    RefinedValue,
    bracket_minus,
    bracket_plus,
    eval_y1,
    eval_y_minus1,
    pole_analysis,
    to_y_form,
)
from .subdivision import (
    StretchedConfig,
    compute,
    compute_nrd,
    compute_rd,
    enumerate_contributions,
    enumerate_rag_rugs,
)
from .svg import render_svg
from .weights import (
    MarkingProfile,
    normalization_factor,
    rd_from_labeled,
    vertex_weight_classical,
    vertex_weight_refined,
    wall_identity_sum,
)

__version__ = "0.1.0"
