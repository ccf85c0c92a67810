"""Secret-minimizing tree and chain partitions of information flow policies.

The package turns a partially ordered set of security labels into either a
tree partition (greedy, per-label optimal) or a chain partition (min-cost
flow over a unit network) and instantiates a PRF-chained key assignment on
top of it that needs no public information for derivation.
"""

from .chainpart import (
    ChainPartition,
    InvalidPartition,
    MalformedFlow,
    build_chain_network,
    chain_anchors,
    chain_secrets,
    flow_to_chain_partition,
    format_chain_partition,
    minimal_chain_partition,
    parse_chain_partition,
    validate_chain_partition,
)
from .crypto import (
    HMAC_SHA256,
    InconsistentAnchors,
    MalformedSigma,
    PrfSpec,
    SchemeReport,
    SchemeState,
    derive,
    label_name,
    parse_key_material,
    setup,
    verify_scheme,
    write_key_material,
)
from .netflow import (
    Flow,
    FlowEdge,
    Infeasible,
    InfeasibleFlow,
    Network,
    eliminate_lower_bounds,
    flow_cost,
    format_flow,
    is_feasible,
    min_cost_flow,
)
from .policy import (
    CycleDetected,
    IndexOutOfRange,
    Policy,
    PolicySyntaxError,
    down_set,
    from_edges,
    interval_poset,
    linear_extension,
    parse_policy,
    serialize_policy,
    up_set,
    width,
)
from .treepart import (
    AnchorMap,
    NotComparable,
    TreePartition,
    anchors,
    edge_weight,
    format_tree_partition,
    max_derivation_steps,
    minimal_tree_partition,
    node_weight,
    optimal_tree_partition,
    parse_tree_partition,
    secret_audience,
    total_secrets,
    validate_tree_partition,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorMap",
    "ChainPartition",
    "CycleDetected",
    "Flow",
    "FlowEdge",
    "HMAC_SHA256",
    "InconsistentAnchors",
    "IndexOutOfRange",
    "Infeasible",
    "InfeasibleFlow",
    "InvalidPartition",
    "MalformedFlow",
    "MalformedSigma",
    "Network",
    "NotComparable",
    "Policy",
    "PolicySyntaxError",
    "PrfSpec",
    "SchemeReport",
    "SchemeState",
    "TreePartition",
    "anchors",
    "build_chain_network",
    "chain_anchors",
    "chain_secrets",
    "derive",
    "down_set",
    "edge_weight",
    "eliminate_lower_bounds",
    "flow_cost",
    "flow_to_chain_partition",
    "format_chain_partition",
    "format_flow",
    "format_tree_partition",
    "from_edges",
    "interval_poset",
    "is_feasible",
    "label_name",
    "linear_extension",
    "max_derivation_steps",
    "min_cost_flow",
    "minimal_chain_partition",
    "minimal_tree_partition",
    "node_weight",
    "optimal_tree_partition",
    "parse_chain_partition",
    "parse_key_material",
    "parse_policy",
    "parse_tree_partition",
    "secret_audience",
    "serialize_policy",
    "setup",
    "total_secrets",
    "up_set",
    "validate_chain_partition",
    "validate_tree_partition",
    "verify_scheme",
    "width",
    "write_key_material",
]
