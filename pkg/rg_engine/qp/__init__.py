from .basis import FrequencyBasis, rational_gcd
from .poly import QPPoly, QPTerm, polynomial_from_terms
from .scalars import GaussianRational, ScalarMode, imaginary_unit, scalar
from .vector import QPVector
