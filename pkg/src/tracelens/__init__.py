"""tracelens: frequent label-sequence mining over event-log DAGs.

Pipeline: ingest timestamped events into a windowed DAG, count paths per
vertex and length, sample every trace independently with probability p
without enumerating, sieve the sample stream through a bounded heavy-hitters
table, and verify candidates exactly with a second pass. Time scales with the
graph and the frequency threshold, not with the (potentially exponential)
number of paths; candidate space scales with the threshold, not with the
number of distinct traces.
"""

from .counting import PathCounts, count_traces, total_traces
from .dag import (
    DagDiagnostics,
    LabeledDag,
    Trace,
    Vertex,
    dumps,
    load_file,
    loads,
    save_file,
    topological_order,
    validate_dag,
)
from .enumeration import (
    Fingerprinter,
    all_traces,
    exact_frequencies,
    trace_fingerprint,
)
from .error_model import (
    ErrorTableRow,
    error_table,
    false_negative_prob,
    poisson_tail,
    recommend_C,
    sig_false_positive_prob,
    sig_false_positive_prob_inclusive,
)
from .errors import (
    BudgetExceededError,
    CountOverflowError,
    CycleError,
    DagFormatError,
    DuplicateEdgeError,
    InfeasibleSpecError,
    MalformedRowError,
    NonPositiveDeltaError,
    ThresholdTooSmallError,
    TooManyTracesError,
    TracelensError,
)
from .heavyhitters import (
    CandidateReport,
    CounterTable,
    MineResult,
    TopKResult,
    exact_second_pass,
    mg_candidates,
    mg_update,
    mine_frequent,
    top_k,
)
from .ingest import (
    EventRecord,
    LabelCodec,
    build_dag,
    clean_events,
    collapse_oscillations,
    dedup_repeats,
    parse_events,
)
from .sampling import (
    PlanEntry,
    SamplingPlan,
    choose_p,
    prepare_plan,
    sample_to_list,
    sample_traces_exact,
    sample_traces_paper,
    select_children,
)
from .synth import (
    BenchReport,
    PlantedSpec,
    bench_compare,
    disjoint_union,
    planted_dag,
    random_dag,
    skip_graph,
)

__version__ = "0.1.0"

__all__ = [
    "PathCounts", "count_traces", "total_traces",
    "DagDiagnostics", "LabeledDag", "Trace", "Vertex", "dumps", "loads",
    "load_file", "save_file", "topological_order", "validate_dag",
    "Fingerprinter", "all_traces", "exact_frequencies", "trace_fingerprint",
    "ErrorTableRow", "error_table", "false_negative_prob", "poisson_tail",
    "recommend_C", "sig_false_positive_prob", "sig_false_positive_prob_inclusive",
    "BudgetExceededError", "CountOverflowError", "CycleError", "DagFormatError",
    "DuplicateEdgeError", "InfeasibleSpecError", "MalformedRowError",
    "NonPositiveDeltaError", "ThresholdTooSmallError", "TooManyTracesError",
    "TracelensError",
    "CandidateReport", "CounterTable", "MineResult", "TopKResult",
    "exact_second_pass", "mg_candidates", "mg_update", "mine_frequent", "top_k",
    "EventRecord", "LabelCodec", "build_dag", "clean_events",
    "collapse_oscillations", "dedup_repeats", "parse_events",
    "PlanEntry", "SamplingPlan", "choose_p", "prepare_plan", "sample_to_list",
    "sample_traces_exact", "sample_traces_paper", "select_children",
    "BenchReport", "PlantedSpec", "bench_compare", "disjoint_union",
    "planted_dag", "random_dag", "skip_graph",
]
