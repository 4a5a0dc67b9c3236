"""Extensor-coded sensitivity oracles and dynamic parameterized solvers."""

from .algebra import (
    CodeVector,
    Extensor,
    TruncatedPoly,
    ext_add,
    ext_sub,
    lift,
    skew_mul,
    vandermonde,
    wedge_char2,
    wedge_naive,
    wedge_vectors,
)
from .errors import (
    CapabilityError,
    InstanceTooLargeError,
    InvalidUpdateError,
    ParseError,
    StateFormatError,
    UnknownHandleError,
    XtnoError,
)
from .fields import GF2m, INTEGERS, RingConfig, field_new, prf_tag
from .graphs import DirectedGraph, UndirectedGraph, UpdateBatch, parse_graph, parse_update_script
from .kpath_directed import (
    DETERMINISTIC,
    RANDOMIZED,
    KPathCounter,
    KPathOracle,
    QueryResult,
    approx_count_preprocess,
    preprocess,
)

__version__ = "0.1.0"

from .constrained import (
    ConstraintSpec,
    SubspaceCode,
    constrained_kpath_build,
    constrained_kpath_static,
    kwalk_one_repeat_build,
)
from .kpath_undirected import (
    UndirectedOracle,
    split_budgets,
    u_bipartite_preprocess,
    u_preprocess,
)
from .serial import load_state
from .sessions import DynamicSession
from .setcover import (
    CoverAtLeastState,
    DominatingState,
    ExactCoverState,
    MatchingState,
    PackingCounter,
    PackingState,
    PartialCoverState,
)
