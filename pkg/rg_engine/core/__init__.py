from .system import PerturbedSystem
from .collect import collect_G, collect_G_polynomial, compose_coefficient
from .derive import (
    RGResult,
    RGTransform,
    conjugacy_residual,
    residual_sup,
    rg_derive,
    rg_transform_symbolic,
)
from .gauge import apply_gauge, near_identity_factor
from .perturbation import regular_perturbation_coeffs, regular_perturbation_solution
