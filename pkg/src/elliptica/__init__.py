"""elliptica: elliptic functions, plane cubics and their tangency covering."""

from .errors import EllipticaError
from .lattice import (
    Lattice,
    LatticeClass,
    LatticeKind,
    TorusPoint,
    classify_lattice,
    eisenstein_series,
    half_periods,
    make_lattice,
    reduce_mod_lattice,
    torsion_points,
    torus_distance,
    weierstrass_invariants,
)
from .theta import theta, theta_shifted
from .divisors import (
    Divisor,
    PowerSums,
    abel_defect,
    contour_power_sums,
    divisor,
    jacobi_sum,
    locate_zeros,
    newton_elementary,
)
from .elliptic import (
    EllipticFunction,
    build_from_divisors,
    decompose_degree2,
    eval_elliptic,
    half_period_values,
    wp_function,
    wp_inverse,
    wp_pair,
    wp_stabilizer,
    wp_values,
)
from .sphere import INF, MobiusTransform, chordal, is_infinite
from .projective import (
    IntersectionList,
    ProjLine,
    ProjPoint,
    line_through,
    lines_meet,
    point_from_vec,
    proj_point,
)
from .cubic import (
    Cubic,
    embed_point,
    group_add,
    hesse_cubic,
    inflection_points,
    line_intersect_cubic,
    tangent_line,
    unembed,
    weierstrass_cubic,
)
from .hesse import (
    EPS,
    QEps,
    concurrency_scan,
    concurrency_scan_exact,
    hesse_data,
    hesse_j,
    is_equianharmonic,
)
from .covering import (
    Fiber,
    LoopPath,
    Permutation,
    branch_divisors_direct,
    branch_divisors_via_tangents,
    continue_fiber,
    critical_locus_check,
    lambda_fiber,
    monodromy_group,
    polar_conic,
    tangent_loop_library,
)

__all__ = [
    "EllipticaError",
    "Lattice",
    "LatticeClass",
    "LatticeKind",
    "TorusPoint",
    "classify_lattice",
    "eisenstein_series",
    "half_periods",
    "make_lattice",
    "reduce_mod_lattice",
    "torsion_points",
    "torus_distance",
    "weierstrass_invariants",
    "theta",
    "theta_shifted",
    "Divisor",
    "PowerSums",
    "abel_defect",
    "contour_power_sums",
    "divisor",
    "jacobi_sum",
    "locate_zeros",
    "newton_elementary",
    "EllipticFunction",
    "build_from_divisors",
    "decompose_degree2",
    "eval_elliptic",
    "half_period_values",
    "wp_function",
    "wp_inverse",
    "wp_pair",
    "wp_stabilizer",
    "wp_values",
    "INF",
    "MobiusTransform",
    "chordal",
    "is_infinite",
    "IntersectionList",
    "ProjLine",
    "ProjPoint",
    "line_through",
    "lines_meet",
    "point_from_vec",
    "proj_point",
    "Cubic",
    "embed_point",
    "group_add",
    "hesse_cubic",
    "inflection_points",
    "line_intersect_cubic",
    "tangent_line",
    "unembed",
    "weierstrass_cubic",
    "EPS",
    "QEps",
    "concurrency_scan",
    "concurrency_scan_exact",
    "hesse_data",
    "hesse_j",
    "is_equianharmonic",
    "Fiber",
    "LoopPath",
    "Permutation",
    "branch_divisors_direct",
    "branch_divisors_via_tangents",
    "continue_fiber",
    "critical_locus_check",
    "lambda_fiber",
    "monodromy_group",
    "polar_conic",
    "tangent_loop_library",
]
