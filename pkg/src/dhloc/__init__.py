"""Exact norm-square-localized Duistermaat-Heckman distributions.

The package computes twisted Duistermaat-Heckman distributions of
quasi-Hamiltonian spaces as locally finite sums of localized contributions:
point masses convolved with iterated ray measures and subspace Lebesgue
factors, indexed by the critical values of a moment-map norm square.  All
arithmetic is exact over the rationals.
"""

from .conedist import (ConeDistribution, ConeTerm, add, apply_diff_op, convolve,
                       delta, density_at, equal_on_samples, heaviside, lebesgue,
                       scale, support_contains, translate, weyl_pushforward)
from .localize import (FixedPointDatum, Model, Wall, contribution,
                       contributions_at, critical_values, eul_series_check,
                       euler_inverse_fourier, genericity_check, partial_sum,
                       polarize, weyl_orbit_contributions)
from .models import (builtin_s4, builtin_woodward_su3, load_model, resolve_model,
                     save_model)
from .rootdata import (DiffOp, RootDatum, build_root_datum, euler_operator,
                       pairing, stabilizer_roots, stiefel_face_hyperplanes,
                       weyl_apply)
from .truncpow import (VectorConfig, cone_contains, mc_fiber_volume,
                       trunc_power_derivative, trunc_power_eval)

__all__ = [
    "ConeDistribution", "ConeTerm", "DiffOp", "FixedPointDatum", "Model",
    "RootDatum", "VectorConfig", "Wall", "add", "apply_diff_op",
    "build_root_datum", "builtin_s4", "builtin_woodward_su3", "cone_contains",
    "contribution", "contributions_at", "convolve", "critical_values", "delta",
    "density_at", "equal_on_samples", "eul_series_check",
    "euler_inverse_fourier", "euler_operator", "genericity_check", "heaviside",
    "lebesgue", "load_model", "mc_fiber_volume", "pairing", "partial_sum",
    "polarize", "resolve_model", "save_model", "scale", "stabilizer_roots",
    "stiefel_face_hyperplanes", "support_contains", "translate",
    "trunc_power_derivative", "trunc_power_eval", "weyl_apply",
    "weyl_orbit_contributions", "weyl_pushforward",
]

__version__ = "0.1.0"
