"""Directed-graph causal structures with cycles: admissibility by the
siblings-on-cycles criterion, canonical deterministic selection processes,
exhaustive consistency verification, and guessing games won with certainty
on suitable cycles."""

from .digraph import (
    Cycle,
    DiGraph,
    canonical_code,
    canonical_form,
    copa_ancestor_closure,
    enumerate_cycles,
    find_noncausal_cycle,
    find_source,
    format_graph,
    graph_code,
    graph_from_code,
    induced_subgraph,
    is_chordless_soc,
    is_induced_cycle,
    is_soc,
    parse_graph,
    relabel,
)
from .errors import (
    BudgetExceededError,
    GraphFormatError,
    InvariantError,
    SocgraphError,
    TableFormatError,
)
from .process import (
    DEFAULT_BUDGET,
    Alphabet,
    Experiment,
    ProcessTable,
    ProcessVerdict,
    SignalingTableWarning,
    antinomy_equivalence_holds,
    count_fixed_points,
    format_experiment,
    format_process_table,
    is_nonsignaling,
    is_process,
    parse_experiment,
    parse_process_table,
    quantum_lift,
    reduce_party,
)
from .model import (
    ModelTableView,
    SocModel,
    VerifyResult,
    build_model,
    check_faithfulness,
    model_process_table,
    predicted_fixed_point,
    receives_one,
    verify_consistency,
)
from .correlations import (
    CausalDecomposition,
    CorrelationTable,
    Instrument,
    binary_steering_instrument,
    evaluate,
    evaluate_column,
    max_causal_game_value,
    parse_instrument,
    peel_decompose,
    reconstruct,
)
from .games import (
    GameSpec,
    Strategy,
    build_violation_strategy,
    decode_setting,
    eligible_cycle,
    encode_setting,
    game_report,
    play,
    play_model,
    random_strategy_scan,
)
from .enumeration import (
    ClassificationRecord,
    classify_graph,
    count_classes,
    enumerate_digraphs,
    survey,
)

__all__ = [
    "Alphabet",
    "BudgetExceededError",
    "CausalDecomposition",
    "ClassificationRecord",
    "CorrelationTable",
    "Cycle",
    "DEFAULT_BUDGET",
    "DiGraph",
    "Experiment",
    "GameSpec",
    "GraphFormatError",
    "Instrument",
    "InvariantError",
    "ModelTableView",
    "ProcessTable",
    "ProcessVerdict",
    "SignalingTableWarning",
    "SocModel",
    "SocgraphError",
    "Strategy",
    "TableFormatError",
    "VerifyResult",
    "antinomy_equivalence_holds",
    "binary_steering_instrument",
    "build_model",
    "build_violation_strategy",
    "canonical_code",
    "canonical_form",
    "check_faithfulness",
    "classify_graph",
    "copa_ancestor_closure",
    "count_classes",
    "count_fixed_points",
    "decode_setting",
    "eligible_cycle",
    "encode_setting",
    "enumerate_cycles",
    "enumerate_digraphs",
    "evaluate",
    "evaluate_column",
    "find_noncausal_cycle",
    "find_source",
    "format_experiment",
    "format_graph",
    "format_process_table",
    "game_report",
    "graph_code",
    "graph_from_code",
    "induced_subgraph",
    "is_chordless_soc",
    "is_induced_cycle",
    "is_nonsignaling",
    "is_process",
    "is_soc",
    "max_causal_game_value",
    "model_process_table",
    "parse_experiment",
    "parse_graph",
    "parse_instrument",
    "parse_process_table",
    "peel_decompose",
    "play",
    "play_model",
    "predicted_fixed_point",
    "quantum_lift",
    "receives_one",
    "reconstruct",
    "reduce_party",
    "relabel",
    "survey",
    "verify_consistency",
]
