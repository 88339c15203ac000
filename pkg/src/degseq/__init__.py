"""Degree sequences of hypergraphs and the degree-sequence zonotope."""
from .core import (
    EdgeSet,
    check_degree_vector,
    complement,
    degree_sequence,
    max_dimension,
    reflect,
)
from .counterexample import build_spec, emit_certificate, verify_face_nonrealizable, verify_span_lemma
from .errors import (
    ContractError,
    DimensionError,
    DimensionLimitError,
    DSPError,
    InputRangeError,
    ResourceLimitError,
)
from .oracle import ReachableSet, is_realizable, is_realizable_3uniform, reachable_set
from .realize import (
    IndexPartition,
    NotInZonotope,
    RealizationTrace,
    Realized,
    Undecided,
    claim1_step,
    claim2_step,
    realize,
    realize_interior,
    realize_main3,
    replay,
    swap_step,
    transport,
    trim_step,
)
from .reductions import closed_form_z, count_knapsack, linopt_over_Z, reduce_3uniform
from .zonotope import (
    Decomposition,
    Inside,
    Outside,
    SeparationCertificate,
    decompose_shifted,
    membership,
    support_function,
)

__version__ = "0.1.0"
