"""Network file format, text renderings, and DOT export.

Network files are line oriented, ``#`` starts a comment::

    flow sales
    entity S1 P1 P2
    channel S1 P1
    bichannel P1 P2
    flow stats
    entity A1S
    split P1 A1S

``split`` lines come after every flow section.
"""

from __future__ import annotations

from .conformance import ConformanceReport
from .errors import (
    DuplicateEntity,
    EntityInMultipleFlows,
    FlowIdCollision,
    ModelError,
    ParseError,
    PoflowError,
    SplitGroupSameFlow,
    SplitGroupTooSmall,
    SplitMemberUnknown,
    UndeclaredEntity,
    UnknownDirective,
)
from .lattice import CompletionReport, LatticeReport
from .model import FlowSystem, Network, build_flow_system, check_name
from .order import LabelTable

DIRECTIVES = ("flow", "entity", "channel", "bichannel", "split")

# per-flow edge colours; the first flow is solid, the rest dashed
EDGE_COLORS = ("black", "blue", "darkgreen", "red", "purple", "orange")


class _Flow:
    def __init__(self, flow_id: str, line: int):
        self.flow_id = flow_id
        self.line = line
        self.entities: list[str] = []
        self.entity_line: dict[str, int] = {}
        self.channels: list[tuple[str, str]] = []
        self.channel_line: dict[tuple[str, str], int] = {}


def parse_network(text: str) -> FlowSystem:
    flows: list[_Flow] = []
    splits: list[tuple[frozenset[str], int]] = []
    current: _Flow | None = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        directive, args = tokens[0], tokens[1:]
        if directive not in DIRECTIVES:
            raise UnknownDirective(directive, lineno)
        try:
            for name in args:
                check_name(name)
        except PoflowError as err:
            err.line = lineno
            raise
        if directive == "flow":
            if len(args) != 1:
                raise ParseError("usage: flow <flow_id>", lineno)
            if splits:
                raise ParseError("'flow' after 'split': split lines must come last", lineno)
            current = _Flow(args[0], lineno)
            flows.append(current)
            continue
        if directive == "split":
            if len(args) < 2:
                raise SplitGroupTooSmall(frozenset(args), lineno)
            splits.append((frozenset(args), lineno))
            current = None
            continue
        if current is None:
            where = "after 'split'" if splits else "before any 'flow'"
            raise ParseError(f"'{directive}' {where}", lineno)
        if directive == "entity":
            if not args:
                raise ParseError("usage: entity <name> [<name> ...]", lineno)
            for name in args:
                if name in current.entity_line:
                    raise DuplicateEntity(name, current.flow_id, lineno)
                current.entity_line[name] = lineno
                current.entities.append(name)
        else:
            if len(args) != 2:
                raise ParseError(f"usage: {directive} <src> <dst>", lineno)
            pairs = [(args[0], args[1])]
            if directive == "bichannel":
                pairs.append((args[1], args[0]))
            for pair in pairs:
                current.channels.append(pair)
                current.channel_line.setdefault(pair, lineno)

    networks = []
    for f in flows:
        # report the first bad channel in file order, not sorted order
        for pair in f.channels:
            for end in pair:
                if end not in f.entity_line:
                    raise UndeclaredEntity(end, pair, f.channel_line[pair])
        networks.append(Network(f.flow_id, frozenset(f.entities), frozenset(f.channels)))

    try:
        return build_flow_system(networks, [g for g, _ in splits])
    except ModelError as err:
        err.line = _locate(err, flows, splits)
        raise


def _locate(err: ModelError, flows: list[_Flow], splits) -> int | None:
    if isinstance(err, FlowIdCollision):
        return [f.line for f in flows if f.flow_id == err.flow_id][-1]
    if isinstance(err, EntityInMultipleFlows):
        second = [f for f in flows if f.flow_id == err.flows[1]][-1]
        return second.entity_line.get(err.entity)
    if isinstance(err, (SplitGroupTooSmall, SplitGroupSameFlow)):
        return next((line for g, line in splits if g == err.group), None)
    if isinstance(err, SplitMemberUnknown):
        return next((line for g, line in splits if err.entity in g), None)
    return None


def serialize_network(sys: FlowSystem) -> str:
    """Canonical text form; ``parse_network`` reads it back unchanged."""
    lines = []
    for net in sys.networks:
        lines.append(f"flow {net.flow_id}")
        if net.entities:
            lines.append("entity " + " ".join(net.sorted_entities()))
        lines += [f"channel {s} {d}" for s, d in net.sorted_channels()]
    for group in sorted(sorted(g) for g in sys.split_groups):
        lines.append("split " + " ".join(group))
    return "\n".join(lines) + "\n" if lines else ""


def render_labels(table: LabelTable) -> str:
    lines = [f"{e}: {table[e]}" for e in table]
    return "\n".join(lines) + "\n" if lines else ""


def render_system_labels(tables: list[LabelTable]) -> str:
    blocks = [f"flow {t.flow_id}\n" + render_labels(t) for t in tables]
    return "\n".join(blocks)


def render_set(names) -> str:
    return "{" + ",".join(sorted(names)) + "}"


def render_lattice(flow_id: str, report: LatticeReport, completion: CompletionReport | None = None) -> str:
    lines = [f"flow {flow_id}", f"lattice: {'yes' if report.is_lattice else 'no'}"]
    lines += [f"no join: {a} {b}" for a, b in report.join_failures]
    lines += [f"no meet: {a} {b}" for a, b in report.meet_failures]
    if completion is not None:
        lines.append(f"classes: {completion.original_size}")
        lines.append(f"completed: {completion.completed_size}")
        lines.append(f"void labels: {completion.void_labels}")
        lines += [f"void: {label}" for label in completion.void_elements]
    return "\n".join(lines) + "\n"


def render_conformance(report: ConformanceReport) -> str:
    lines = [f"conforms: {'yes' if report.conforms else 'no'}"]
    lines += [f"missing: {x} -> {y}" for x, y in report.missing_flows]
    lines += [f"forbidden: {a} {b}" for a, b in report.forbidden_flows]
    lines += [f"extra: {x} -> {y}" for x, y in report.extra_flows]
    return "\n".join(lines) + "\n"


def export_dot(sys: FlowSystem) -> str:
    out = ["digraph poflow {"]
    if sys.entities:
        out.append("  rankdir=LR;")
        out.append('  node [shape=box, fontname="Helvetica"];')
    for i, net in enumerate(sys.networks):
        style = "solid" if i == 0 else "dashed"
        color = EDGE_COLORS[i % len(EDGE_COLORS)]
        for e in net.sorted_entities():
            out.append(f'  "{e}";')
        for s, d in net.sorted_channels():
            out.append(f'  "{s}" -> "{d}" [style={style}, color={color}];')
    for k, group in enumerate(sorted(sorted(g) for g in sys.split_groups)):
        # a dotted cluster frame ties split parts together without adding an edge
        out.append(f"  subgraph cluster_split{k} {{")
        out.append('    rank=same; style=dotted; label="split";')
        out.append("    " + " ".join(f'"{e}";' for e in group))
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"
