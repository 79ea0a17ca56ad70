from .curve import (
    DiscreteCurve,
    FrenetData,
    aniso_curvature,
    curvature,
    curve_data,
    first_derivative,
    frenet,
    perp,
    second_derivative,
    special_velocity,
)
from .triod import TriodNetwork
from .junction import (
    AdmissibilityReport,
    JunctionLambdas,
    a0_min,
    admissibility_report,
    herring_residual,
    junction_frame,
    junction_identities,
    junction_lambdas,
    lambdas_from_frame,
    velocity_mismatch,
)
