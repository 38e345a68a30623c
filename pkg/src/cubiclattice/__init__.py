"""Exact lattice-point counting in dilated triangles of the simplest cubic fields."""

from .closedform import (
    assemble_count,
    delta_bounds_check,
    leftline_floor,
    rightline_floor,
    sum_leftline,
    sum_rightline,
    sum_topline,
    theorem_count,
    theta,
    topline_floor,
)
from .cubicfield import (
    CubicParams,
    FieldElement,
    RootInterval,
    eval_fa,
    floor_of,
    inverse,
    refine,
    rho_as_elements,
    seed_interval,
    sign,
)
from .errors import BudgetExceeded, CubicLatticeError, DomainError, RefinementError
from .interlace import QuadraticPoly, coeffs_from_point, count_interlacing, interlaces
from .triangle import (
    CountResult,
    SliceProfile,
    brute_force_count,
    count_by_slicing,
    discrepancy,
    edge_line,
    line_floor,
    point_in_triangle,
    slice_count,
    volume,
    x_range,
)

__version__ = "0.1.0"
