"""Exact symplectic ball packings of rational and ruled 4-manifolds."""
from .constructions import (
    ShadowPacking,
    ShadowPiece,
    blowup_correspondence,
    build_ellipsoid_full,
    build_full_square_grid,
    build_grid_cp2,
    build_k34_trivial,
    build_rows_trivial,
    build_shells_twisted,
    build_stack_ball_highdim,
    build_strip_twisted,
    check_jiang_embedding,
    region_identity_figure9,
    verify,
    verify_stack,
)
from .errors import (
    BasisMismatch,
    BeyondDemazureRange,
    InvalidPolygon,
    RangeError,
    RegimeViolation,
    SympackError,
    VerificationFailure,
)
from .homology import (
    enumerate_exceptional_cp2,
    solve_diophantine_trivial,
    solve_diophantine_twisted,
)
from .packing import (
    PackingResult,
    jiang_lower_bound,
    packing_number,
    pk_cp2,
    pk_piecewise_trivial,
    pk_piecewise_twisted,
    pk_trivial_infimum,
    pk_twisted_infimum,
    stability_bounds,
)

__version__ = "0.1.0"
