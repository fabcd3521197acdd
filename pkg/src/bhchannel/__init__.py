"""Quantum channels of black-hole horizons.

The package builds the truncated Fock-space isometries of reflecting and
absorbing horizons, splits their dual-rail channels into orthogonal blocks,
and evaluates coherent information and capacities.  Entropies are in bits.
"""

from .capacity import (
    CapacityResult,
    DualRailQubit,
    capacity_cloner,
    clone_fidelity,
    coherent_information,
    optimize_coherent_information,
    ppt_check,
    symmetric_channel_check,
    unruh_capacity,
    verify_direct_sum_lemma,
)
from .channels import (
    BlockChannel,
    absorbing_dual_rail_channel,
    anticlone_channel,
    block_depolarizing_apply,
    block_weights,
    cloning_apply,
    cloning_channel,
    cloning_complement_apply,
    complementary_channel,
    depolarizing_apply,
    depolarizing_channel,
    direct_sum_channel,
    dual_rail_channel_from_isometry,
    reflecting_dual_rail_channel,
    su2_generators,
)
from .estimators import (
    AbsorbingChannel,
    BlockDepolarizingChannel,
    CloningChannel,
    CoherentInformationMaximizer,
    ComplementaryCloningChannel,
    DepolarizingChannel,
    DepolarizingFit,
    HawkingVacuumChannel,
    ReflectingChannel,
)
from .exceptions import ContractViolation, DimensionError, ParameterError, StructureViolation
from .fock import (
    AbsorbParam,
    SqueezeParam,
    absorb_isometry_closed_form,
    absorb_isometry_expm,
    hawking_isometry,
    squeezer_vacuum_state,
    unruh_isometry,
)
from .linalg import kron, partial_trace, partial_transpose, von_neumann_entropy
from .representations import ChoiMatrix, StinespringIsometry, choi_of, stinespring_of

__version__ = "0.1.0"

__all__ = [
    "CapacityResult",
    "DualRailQubit",
    "capacity_cloner",
    "clone_fidelity",
    "coherent_information",
    "optimize_coherent_information",
    "ppt_check",
    "symmetric_channel_check",
    "unruh_capacity",
    "verify_direct_sum_lemma",
    "BlockChannel",
    "absorbing_dual_rail_channel",
    "anticlone_channel",
    "block_depolarizing_apply",
    "block_weights",
    "cloning_apply",
    "cloning_channel",
    "cloning_complement_apply",
    "complementary_channel",
    "depolarizing_apply",
    "depolarizing_channel",
    "direct_sum_channel",
    "dual_rail_channel_from_isometry",
    "reflecting_dual_rail_channel",
    "su2_generators",
    "AbsorbingChannel",
    "BlockDepolarizingChannel",
    "CloningChannel",
    "CoherentInformationMaximizer",
    "ComplementaryCloningChannel",
    "DepolarizingChannel",
    "DepolarizingFit",
    "HawkingVacuumChannel",
    "ReflectingChannel",
    "ContractViolation",
    "DimensionError",
    "ParameterError",
    "StructureViolation",
    "AbsorbParam",
    "SqueezeParam",
    "absorb_isometry_closed_form",
    "absorb_isometry_expm",
    "hawking_isometry",
    "squeezer_vacuum_state",
    "unruh_isometry",
    "kron",
    "partial_trace",
    "partial_transpose",
    "von_neumann_entropy",
    "ChoiMatrix",
    "StinespringIsometry",
    "choi_of",
    "stinespring_of",
    "__version__",
]
