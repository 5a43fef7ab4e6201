from .bivariate import (
    FUNDAMENTAL,
    b11_angle,
    b11_level_alphas,
    build_b11_mixed,
    build_b11_pure,
    build_canonical,
    build_fundamental,
    build_mn_pin,
    mn_pin_probabilities,
    mn_pin_reference_angle,
)
from .common import MAX_QUBITS, QubitBudgetError, canonical_block_gates, var_major_layout
from .generic import LevelLoad, build_fabric, build_generic, level_loads, synthesizer_count
from .multivariate import (
    benchmark4_control_angles,
    benchmark4_spec,
    build_benchmark4,
    build_frechet3_pure,
    build_mb11_mixed,
    build_mb11_pure3,
    build_mirror_pure,
    control_width,
    cqg_target,
    level_factors,
    mirror_contexts,
)
