"""Dense coding through amplitude damping with weak/reversal measurement protection."""

__version__ = "0.1.0"

from .channel import (
    amplitude_damping_kraus,
    apply_two_qubit_channel,
    completeness_defect,
    dilated_bell_evolution,
    product_kraus,
)
from .coding import (
    average_encoded_state,
    chi1_closed_form,
    encoding_unitaries,
    holevo_capacity,
)
from .errors import (
    DenseCodingError,
    InvalidDensityMatrix,
    InvalidDimensions,
    InvalidParameter,
    NotConverged,
    NotHermitian,
    NotXState,
    PostSelectionImpossible,
)
from .measurement import FilterOutcome, LocalFilter, apply_filter, reversal_filter, weak_filter
from .protocol import (
    PlanResult,
    SweepTable,
    bell_state,
    find_capacity_threshold,
    find_min_chi1,
    optimal_reversal_strength,
    rho2_closed_form,
    run_plan_a,
    run_plan_b,
    sweep,
)
from .qmat import (
    adjoint,
    hermitian_spectrum,
    partial_trace,
    tensor_product,
    von_neumann_entropy,
    xstate_spectrum,
)
from .trajectory import McEstimate, simulate_plan_b
