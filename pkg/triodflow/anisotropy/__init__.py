from .anisotropy import (
    Anisotropy,
    dual_eval,
    ellipticity_bounds,
    phi_theta,
    polar_eval,
    polar_grad,
    polar_grad_theta,
    psi,
)
from .wulff import WulffBoundary, polygon_is_convex, wulff_boundary
