from .charts import CriticalManifoldChart, central_difference, symbolic_chart
from .gsp import (
    SlowReduction,
    TangentStableSplit,
    gsp_reduce,
    invariance_residual,
    manifold_graph,
    reduced_field,
    stability_on_manifold,
    tangent_stable_split,
)
from .phase import (
    OscillatorSystem,
    PhaseDrift,
    PhaseModel,
    find_cycle,
    phase_drift,
    phase_reduce,
    symbolic_oscillator,
)
