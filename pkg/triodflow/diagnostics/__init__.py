from .functionals import (
    CSV_HEADER,
    DiagnosticsRecord,
    aniso_lengths,
    check_dissipation,
    closed_kphi_norms,
    compute_record,
    curve_kphi_norms,
    interpolation_ratio,
    kphi_norms,
    length_rates,
    lengths,
)
from .evolution import evolution_law_residuals
from .rate_fit import RateFit, RateFitResult, rate_fit
from .steiner import SteinerPoint, SteinerResult, steiner_point, straight_energy, straight_herring
