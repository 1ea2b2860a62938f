"""Declarative flow policies, conformance checking, and reconfiguration.

Policy text is line oriented, ``#`` starts a comment::

    flow sales
    permit S1 P1
    equiv P1 P2
    forbid A1 A2

Everything not required by the policy is forbidden (default deny).  The
required relation is the reflexive-transitive closure of the permits plus
both directions of every equiv pair.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import (
    FlowMismatch,
    ParseError,
    PoflowError,
    UnknownChannel,
    UnknownDirective,
    UnsatisfiableSpec,
)
from .model import Channel, Network, check_name
from .order import LabelTable, compute_labels, reachable_from

DEFAULT_DENY = "DefaultDeny"


@dataclass(frozen=True)
class PolicySpec:
    flow_id: str
    permits: frozenset[Channel] = frozenset()
    equivs: frozenset[frozenset[str]] = frozenset()
    forbids: frozenset[frozenset[str]] = frozenset()
    closure_mode: str = DEFAULT_DENY

    @property
    def entities(self) -> frozenset[str]:
        names: set[str] = set()
        for s, d in self.permits:
            names |= {s, d}
        for group in self.equivs:
            names |= group
        for pair in self.forbids:
            names |= pair
        return frozenset(names)

    def required_edges(self) -> frozenset[Channel]:
        edges = set(self.permits)
        for group in self.equivs:
            for a, b in combinations(sorted(group), 2):
                edges |= {(a, b), (b, a)}
        return frozenset(edges)


@dataclass(frozen=True)
class ConformanceReport:
    conforms: bool
    missing_flows: tuple[Channel, ...]
    forbidden_flows: tuple[tuple[str, str], ...]
    extra_flows: tuple[Channel, ...]


def _required_network(spec: PolicySpec, entities: Iterable[str]) -> Network:
    return Network(spec.flow_id, frozenset(entities), spec.required_edges())


def _first_violated_forbid(spec: PolicySpec) -> tuple[str, str] | None:
    net = _required_network(spec, spec.entities)
    reach = {e: reachable_from(net, e) for e in net.entities}
    for pair in sorted(spec.forbids, key=sorted):
        names = sorted(pair)
        a, b = names[0], names[-1]
        if b in reach[a] or a in reach[b]:
            return (a, b)
    return None


def parse_policy(text: str) -> PolicySpec:
    flow_id = None
    permits: set[Channel] = set()
    equivs: set[frozenset[str]] = set()
    forbids: set[frozenset[str]] = set()
    forbid_line: dict[frozenset[str], int] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        directive, args = tokens[0], tokens[1:]
        try:
            for name in args:
                check_name(name)
        except PoflowError as err:
            err.line = lineno
            raise
        if directive == "flow":
            if flow_id is not None:
                raise ParseError("'flow' may appear only once", lineno)
            if len(args) != 1:
                raise ParseError("usage: flow <flow_id>", lineno)
            flow_id = args[0]
            continue
        if directive not in ("permit", "equiv", "forbid"):
            raise UnknownDirective(directive, lineno)
        if flow_id is None:
            raise ParseError("policy must start with 'flow <flow_id>'", lineno)
        if directive == "permit":
            if len(args) != 2:
                raise ParseError("usage: permit <src> <dst>", lineno)
            permits.add((args[0], args[1]))
        elif directive == "equiv":
            if len(set(args)) < 2:
                raise ParseError("usage: equiv <e1> <e2> [<e3> ...]", lineno)
            equivs.add(frozenset(args))
        else:
            if len(args) != 2:
                raise ParseError("usage: forbid <e1> <e2>", lineno)
            pair = frozenset(args)
            forbids.add(pair)
            forbid_line.setdefault(pair, lineno)

    if flow_id is None:
        raise ParseError("missing 'flow <flow_id>' line")
    spec = PolicySpec(flow_id, frozenset(permits), frozenset(equivs), frozenset(forbids))
    bad = _first_violated_forbid(spec)
    if bad is not None:
        raise UnsatisfiableSpec(bad, forbid_line[frozenset(bad)])
    return spec


def render_policy(spec: PolicySpec) -> str:
    lines = [f"flow {spec.flow_id}"]
    lines += [f"permit {s} {d}" for s, d in sorted(spec.permits)]
    lines += ["equiv " + " ".join(sorted(g)) for g in sorted(spec.equivs, key=sorted)]
    lines += ["forbid " + " ".join(sorted(p)) for p in sorted(spec.forbids, key=sorted)]
    return "\n".join(lines) + "\n"


def verify(net: Network, spec: PolicySpec) -> ConformanceReport:
    """Compare the network's CanFlow with the relation the policy requires."""
    if spec.flow_id != net.flow_id:
        raise FlowMismatch(net.flow_id, spec.flow_id)
    for e in sorted(spec.entities):
        net.require(e)
    required = _required_network(spec, net.entities)
    want = {e: reachable_from(required, e) for e in net.entities}
    have = {e: reachable_from(net, e) for e in net.entities}

    missing, extra = [], []
    for x in sorted(net.entities):
        missing += [(x, y) for y in sorted(want[x] - have[x])]
        extra += [(x, y) for y in sorted(have[x] - want[x])]
    forbidden = []
    for pair in sorted(spec.forbids, key=sorted):
        names = sorted(pair)
        a, b = names[0], names[-1]
        if b in have[a] or a in have[b]:
            forbidden.append((a, b))
    return ConformanceReport(
        conforms=not (missing or forbidden or extra),
        missing_flows=tuple(missing),
        forbidden_flows=tuple(forbidden),
        extra_flows=tuple(extra),
    )


def add_channel(
    net: Network, table: LabelTable, x: str, y: str
) -> tuple[Network, LabelTable]:
    """Add ``x -> y`` and update labels by forward propagation.

    Only entities reachable from ``y`` change: each gains Label(x).
    """
    net.require(x)
    net.require(y)
    if (x, y) in net.channels:
        return net, table
    new_net = net.with_channels(net.channels | {(x, y)})
    gained = table[x]
    labels = dict(table.labels)
    for z in reachable_from(new_net, y):
        if not gained <= labels[z]:
            labels[z] = labels[z] | gained
    return new_net, LabelTable(table.flow_id, labels)


def remove_channel(
    net: Network, table: LabelTable, x: str, y: str
) -> tuple[Network, LabelTable]:
    """Remove ``x -> y``; labels are recomputed from scratch."""
    if (x, y) not in net.channels:
        raise UnknownChannel((x, y))
    new_net = net.with_channels(net.channels - {(x, y)})
    return new_net, compute_labels(new_net)


def table_is_stale(table: LabelTable, net: Network) -> bool:
    """True when the table no longer covers exactly the network's entities."""
    return table.flow_id != net.flow_id or table.entities != net.entities


@dataclass
class Reconfigurator:
    """Holds a network and its labels; edits are applied one at a time."""

    network: Network
    table: LabelTable | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.table is None:
            self.table = compute_labels(self.network)

    def snapshot(self) -> tuple[Network, LabelTable]:
        with self._lock:
            return self.network, self.table

    def add(self, x: str, y: str) -> LabelTable:
        with self._lock:
            self.network, self.table = add_channel(self.network, self.table, x, y)
            return self.table

    def remove(self, x: str, y: str) -> LabelTable:
        with self._lock:
            self.network, self.table = remove_channel(self.network, self.table, x, y)
            return self.table
