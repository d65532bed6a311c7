"""q-deformed and quantum divergence measures with tight total-variation bounds."""

from .bounds import (
    brute_force_min,
    counterexample_search,
    extremal_pair,
    gilardoni_infimum,
    jeffrey_min,
    jst_min,
    q_pinsker_gap,
    verify_classical_bounds,
)
from .classical import (
    Distribution,
    DivergenceSpec,
    binary_reduction,
    f_divergence,
    jeffrey_spec,
    jeffrey_tsallis,
    jeffrey_tsallis_spec,
    jensen_shannon_tsallis,
    jst_spec,
    q_exp,
    q_log,
    total_variation,
    tsallis_divergence,
    tsallis_spec,
)
from .coding import (
    BoundVariant,
    Code,
    HypothesisError,
    Source,
    avg_codelength_q,
    delta_dq,
    huffman_lengths,
    induced_distribution,
    kraft_sum,
    kraft_sum_q,
    prop3_check,
    redundancy_bound,
    shannon_fano_lengths,
    tsallis_entropy_base_d,
)
from .quantum import (
    DensityMatrix,
    chernoff_information,
    chernoff_min_closed_form,
    dominance_measurement,
    fidelity,
    quantum_f_divergence,
    quantum_jeffrey,
    quantum_relative_entropy,
    random_density_matrix,
    trace_distance,
    verify_quantum_bounds,
)
from .report import BoundReport

__version__ = "0.1.0"
