from .compiled import CompiledJacobian, CompiledVector, GradedField, compile_jacobian, compile_vector
from .integrate import IntegratorConfig, IntegratorMethod, Trajectory, integrate, scipy_method
from .scans import (
    ErrorScanReport,
    LongIntervalReport,
    OrbitTrackingReport,
    error_scan,
    fit_slope,
    long_interval_check,
    orbit_tracking,
    regular_chain,
    rg_field,
    system_field,
)
from .invariant_sets import (
    FixedPoint,
    NumericField,
    RadialOrbit,
    RGField,
    Stability,
    classify,
    find_fixed_points,
    find_rg_fixed_points,
    newton,
    radial_orbits,
    seed_grid,
)
