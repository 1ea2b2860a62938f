"""Partial-order data-flow security: provenance labels, label-inclusion
access decisions, and lattice analysis of multi-level flow networks."""

from .errors import PoflowError
from .model import Network, FlowSystem, build_network, build_flow_system
from .order import (
    EquivClass,
    Label,
    LabelTable,
    Poset,
    can_flow,
    compute_labels,
    condense,
    reachable_from,
    simulate_propagation,
)
from .pdp import (
    AliasStore,
    AuditRecord,
    Decision,
    PDPSession,
    Reason,
    Request,
    Verdict,
    decide,
    decide_system,
    evaluate_and_log,
    register_alias,
    resolve_alias,
)
from .lattice import (
    CompletionReport,
    LatticeReport,
    dedekind_macneille,
    induced_subnetwork,
    joins_of,
    lattice_check,
    meets_of,
    merge_networks,
)
from .conformance import (
    ConformanceReport,
    PolicySpec,
    Reconfigurator,
    add_channel,
    parse_policy,
    remove_channel,
    verify,
)
from .formats import export_dot, parse_network, render_labels, serialize_network

__version__ = "0.1.0"
