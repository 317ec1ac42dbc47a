"""Riemann theta functions, prime forms and Szego kernels on explicit curves."""
from .algebra import (
    RiemannMatrix,
    ThetaCharacteristic,
    TruncationPolicy,
    enumerate_characteristics,
    parity,
    validate_riemann_matrix,
)
from .curves import (
    BundlePoint,
    DecomposableBundle,
    Sphere,
    SphereCoordinate,
    Torus,
    WeierstrassShifted,
    weierstrass_p_prime_rel,
    weierstrass_p_rel,
    zeros_and_df,
)
from .expansions import (
    DiagonalExpansion,
    diagonal_expansion,
    dlog_theta_tau,
    dlog_theta_z,
    extended_offset,
    log_pole_scan,
)
from .identities import (
    IdentityReport,
    composition_sign,
    verify_composition_identity,
    verify_degenerate_identity,
    verify_determinant_theorem,
    verify_divisor_behavior,
)
from .kernels import (
    det_szego_vs_theta_pullback,
    normalized_szego,
    prime_form,
    szego_line,
    szego_matrix,
)
from .theta import theta, theta1, theta_quasi_period_factor

__version__ = "0.1.0"
