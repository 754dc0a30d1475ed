"""Spectral curves of periodic bipartite dimer models on the hexagonal lattice.

Builds Kasteleyn matrices for d x d fundamental domains, computes their
characteristic polynomials, verifies the Harnack property through amoeba and
Ronkin-function numerics, and realizes the genus-zero / isoradial
correspondence, including Newton inversion of the boundary-point map.
"""

from .amoeba import (
    AmoebaGrid,
    AreaEstimate,
    HarnackCertificate,
    Hole,
    HoleReport,
    RealOval,
    amoeba_area,
    amoeba_membership,
    auto_window,
    detect_holes,
    facet_intercepts,
    gradient_ronkin,
    legendre_dual_residual,
    legendre_transform,
    monge_ampere_residual,
    rasterize_amoeba,
    ronkin,
    trace_real_ovals,
    two_to_one_check,
    verify_harnack,
    volume_difference,
)
from .divisor import (
    DivisorPoint,
    all_vertex_divisors,
    is_standard_divisor,
    left_null_vector,
    sign_change_count,
    vertex_divisor,
)
from .genus0 import (
    BoundaryTriple,
    Genus0Curve,
    IsoradialAngles,
    IsoradialReport,
    align_canonical,
    apply_mobius,
    boundary_map,
    evaluate_parametrization,
    find_isoradial_shift,
    implicitize,
    interior_value,
    invert_boundary,
    isoradial_spectral_check,
    isoradial_weights,
    jacobian_blocks,
    jacobian_kernel_vectors,
    jacobian_logABC,
    mobius_through,
    transport_gauge,
    validate_boundary_triple,
)
from .kasteleyn import (
    BivariatePolynomial,
    BoundaryPoints,
    ZigZagComparison,
    assemble_K,
    boundary_points,
    characteristic_polynomial,
    verify_boundary_vs_zigzag,
)
from .lattice import (
    EdgeWeights,
    GaugeVector,
    ZigZagCycle,
    all_zigzag_products,
    apply_gauge,
    apply_magnetic_field,
    loop_invariants,
    zigzag_closure_product,
    zigzag_product,
)
from .numerics import ComplexPoly, det_complex, periodic_quadrature, roots

__all__ = [
    "AmoebaGrid",
    "AreaEstimate",
    "BivariatePolynomial",
    "BoundaryPoints",
    "BoundaryTriple",
    "ComplexPoly",
    "DivisorPoint",
    "EdgeWeights",
    "GaugeVector",
    "Genus0Curve",
    "HarnackCertificate",
    "Hole",
    "HoleReport",
    "IsoradialAngles",
    "IsoradialReport",
    "RealOval",
    "ZigZagComparison",
    "ZigZagCycle",
    "align_canonical",
    "all_vertex_divisors",
    "all_zigzag_products",
    "amoeba_area",
    "amoeba_membership",
    "apply_gauge",
    "apply_magnetic_field",
    "apply_mobius",
    "assemble_K",
    "auto_window",
    "boundary_map",
    "boundary_points",
    "characteristic_polynomial",
    "det_complex",
    "detect_holes",
    "evaluate_parametrization",
    "facet_intercepts",
    "find_isoradial_shift",
    "gradient_ronkin",
    "implicitize",
    "interior_value",
    "invert_boundary",
    "is_standard_divisor",
    "isoradial_spectral_check",
    "isoradial_weights",
    "jacobian_blocks",
    "jacobian_kernel_vectors",
    "jacobian_logABC",
    "left_null_vector",
    "legendre_dual_residual",
    "legendre_transform",
    "loop_invariants",
    "mobius_through",
    "monge_ampere_residual",
    "periodic_quadrature",
    "rasterize_amoeba",
    "ronkin",
    "roots",
    "sign_change_count",
    "trace_real_ovals",
    "transport_gauge",
    "two_to_one_check",
    "validate_boundary_triple",
    "verify_boundary_vs_zigzag",
    "verify_harnack",
    "vertex_divisor",
    "volume_difference",
    "zigzag_closure_product",
    "zigzag_product",
]

__version__ = "0.1.0"
