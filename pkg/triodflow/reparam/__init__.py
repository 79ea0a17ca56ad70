from .resample import curve_spline, to_constant_speed
from .lempara import LemparaMap, ReparamSpec, end_parameters, lempara_reparam, reparametrize
from .compatible import CompatReport, MakeCompatible, compat_residuals, make_compatible
