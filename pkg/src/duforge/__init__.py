"""Ensembles of dual-unitary and 2-unitary gates from nearest-unitary maps."""
from .cartan2 import CartanCoords, canonical_gate, cartan_coords, chamber_trajectory
from .ensemble import EnsembleConfig, EnsembleReport, d5_asymptote_check, histogram, run_ensemble
from .gates import NamedGate, mols_pair, named_gate, ols_permutation
from .maps import (
    IterationTrace,
    apply_map,
    fit_decay,
    iterate,
    nearest_unitary,
    project_unitary,
)
from .measures import (
    GateClass,
    MeasureRecord,
    classify,
    entangling_power,
    entangling_power_mc,
    measure,
    op_entanglement,
    op_entanglement_swapped,
    schmidt_spectrum,
    trace_norm_realigned,
    tsallis_entropy,
)
from .sampling import RngSeed, cue_sample, haar_product_state
from .tensor_core import (
    BipartiteUnitary,
    FourPartyState,
    ame_state,
    bipartition_entropies,
    partial_transpose,
    realign,
    swap_gate,
    vectorize_operator,
)

__version__ = "0.1.0"
