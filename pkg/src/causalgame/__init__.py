"""Process matrices, a bipartite guessing game, and causal-order tests.

The package models two parties wired through a shared higher-order
process, scores local strategies against it, bounds what any causally
ordered strategy can achieve, and searches both the strategy space and
a one-parameter process family for violations of those bounds.
"""

from .formats import dense_text, parse_process, pauli_text, read_process, write_process
from .game import (
    GameSpec,
    JointDistribution,
    NumericalIntegrityError,
    SignalingProfile,
    analytic_max_dbit,
    born,
    causal_bound,
    joint_distribution,
    signaling_profile,
    success_components,
    success_probability,
)
from .instruments import (
    ALICE_TABLE,
    BOB_TABLE,
    CJOperator,
    InfeasibleOperationError,
    Instrument,
    InstrumentReport,
    ObservableSpec,
    alice_general,
    alice_z,
    bob_branch,
    bob_general,
    instrument_validate,
)
from .optimizer import (
    OptimizationResult,
    OptimizerConfig,
    ansatz_min_eigenvalue,
    maximize_ansatz,
    maximize_instruments,
    projected_step,
    threshold_alpha,
)
from .oracle import (
    CausalDecision,
    DeterministicStrategy,
    enumerate_strategies,
    is_causal,
    oracle_bound,
    strategy_success,
)
from .processes import (
    ProcessMatrix,
    ValidityReport,
    causal_mixture,
    ordered_identity_channel_process,
    term_label,
    validate,
    w_ansatz,
    w_beta,
    w_beta_weights,
    w_ocb,
    witness_s,
    witness_value,
)
from .tensor import (
    DEFAULT_LAYOUT,
    PAULI,
    PAULI_LABELS,
    SubsystemLayout,
    hermitian_eigenvalues,
    kron_all,
    partial_trace,
    pauli_compose,
    pauli_decompose,
    pauli_word,
)

__all__ = [
    "ALICE_TABLE",
    "BOB_TABLE",
    "DEFAULT_LAYOUT",
    "PAULI",
    "PAULI_LABELS",
    "CJOperator",
    "CausalDecision",
    "DeterministicStrategy",
    "GameSpec",
    "InfeasibleOperationError",
    "Instrument",
    "InstrumentReport",
    "JointDistribution",
    "NumericalIntegrityError",
    "ObservableSpec",
    "OptimizationResult",
    "OptimizerConfig",
    "ProcessMatrix",
    "SignalingProfile",
    "SubsystemLayout",
    "ValidityReport",
    "alice_general",
    "alice_z",
    "analytic_max_dbit",
    "ansatz_min_eigenvalue",
    "bob_branch",
    "bob_general",
    "born",
    "causal_bound",
    "causal_mixture",
    "dense_text",
    "enumerate_strategies",
    "hermitian_eigenvalues",
    "instrument_validate",
    "is_causal",
    "joint_distribution",
    "kron_all",
    "maximize_ansatz",
    "maximize_instruments",
    "oracle_bound",
    "ordered_identity_channel_process",
    "parse_process",
    "partial_trace",
    "pauli_compose",
    "pauli_decompose",
    "pauli_text",
    "pauli_word",
    "projected_step",
    "read_process",
    "signaling_profile",
    "strategy_success",
    "success_components",
    "success_probability",
    "term_label",
    "threshold_alpha",
    "validate",
    "w_ansatz",
    "w_beta",
    "w_beta_weights",
    "w_ocb",
    "witness_s",
    "witness_value",
    "write_process",
]
