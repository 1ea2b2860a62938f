"""Label-inclusion access decisions, the label store, and the audit trail.

The decision rule: a request moving data from ``x`` to ``y`` is granted
iff ``Label(x)`` is included in ``Label(y)``.  Decisions are computed from
label tables alone.  Every failure mode denies.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping

from .errors import DuplicateAlias, UnknownAlias
from .model import FlowSystem
from .order import Label, LabelTable, compute_labels


class Verdict(enum.Enum):
    GRANT = "GRANT"
    DENY = "DENY"


class Reason(enum.Enum):
    LABEL_INCLUDED = "LabelIncluded"
    LABEL_NOT_INCLUDED = "LabelNotIncluded"
    UNKNOWN_ENTITY = "UnknownEntity"
    UNKNOWN_FLOW = "UnknownFlow"


@dataclass(frozen=True)
class Request:
    flow_id: str
    src: str
    dst: str
    op_tag: str = ""


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    reason: Reason

    def __post_init__(self):
        if (self.verdict is Verdict.GRANT) != (self.reason is Reason.LABEL_INCLUDED):
            raise ValueError(f"inconsistent decision {self.verdict.value}/{self.reason.value}")

    @property
    def granted(self) -> bool:
        return self.verdict is Verdict.GRANT

    @classmethod
    def deny(cls, reason: Reason) -> Decision:
        return cls(Verdict.DENY, reason)


GRANT = Decision(Verdict.GRANT, Reason.LABEL_INCLUDED)


def decide(table: LabelTable, x: str, y: str) -> Decision:
    src, dst = table.get(x), table.get(y)
    if src is None or dst is None:
        return Decision.deny(Reason.UNKNOWN_ENTITY)
    if src <= dst:
        return GRANT
    return Decision.deny(Reason.LABEL_NOT_INCLUDED)


def decide_system(
    sys: FlowSystem, tables: Mapping[str, LabelTable], req: Request
) -> Decision:
    """Decide a request against a multi-flow system.

    Entities in two different flows never exchange data: their labels come
    from disjoint provenance, so the request is denied as not included.
    A request naming the wrong flow for its entities is denied as unknown.
    """
    if sys.network(req.flow_id) is None or req.flow_id not in tables:
        return Decision.deny(Reason.UNKNOWN_FLOW)
    fs, fd = sys.flow_of(req.src), sys.flow_of(req.dst)
    if fs is None or fd is None:
        return Decision.deny(Reason.UNKNOWN_ENTITY)
    if fs != fd:
        return Decision.deny(Reason.LABEL_NOT_INCLUDED)
    if fs != req.flow_id:
        return Decision.deny(Reason.UNKNOWN_ENTITY)
    return decide(tables[req.flow_id], req.src, req.dst)


@dataclass(frozen=True)
class AuditRecord:
    request: Request
    decision: Decision
    label_src: Label | None
    label_dst: Label | None
    sequence_no: int
    timestamp: str | None = None

    def line(self) -> str:
        text = (
            f"seq={self.sequence_no} flow={self.request.flow_id} "
            f"src={self.request.src} dst={self.request.dst} "
            f"verdict={self.decision.verdict.value} reason={self.decision.reason.value}"
        )
        if self.timestamp is not None:
            text += f" time={self.timestamp}"
        return text


class AliasStore:
    """Names for long labels ("Classified" for a big provenance set).

    The mapping is kept one-to-one: a name denotes one label and a label
    has at most one name.
    """

    def __init__(self):
        self._by_name: dict[str, Label] = {}
        self._by_label: dict[Label, str] = {}

    def register(self, alias_name: str, label: Label) -> AliasStore:
        if alias_name in self._by_name:
            raise DuplicateAlias(f"alias {alias_name} already registered")
        if label in self._by_label:
            raise DuplicateAlias(f"label {label} already named {self._by_label[label]}")
        self._by_name[alias_name] = label
        self._by_label[label] = alias_name
        return self

    def resolve(self, name: str) -> Label:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownAlias(name) from None

    def name_of(self, label: Label) -> str | None:
        return self._by_label.get(label)

    def __len__(self) -> int:
        return len(self._by_name)

    def items(self) -> list[tuple[str, Label]]:
        return sorted(self._by_name.items())


def register_alias(store: AliasStore, alias_name: str, label: Label) -> AliasStore:
    return store.register(alias_name, label)


def resolve_alias(store: AliasStore, name: str) -> Label:
    return store.resolve(name)


@dataclass
class PDPSession:
    """A decision point bound to one flow system.

    ``tables`` plays the policy information point: the per-flow label
    tables every decision reads.  The audit log is append-only and its
    sequence numbers stay strictly increasing under concurrent use.
    """

    system: FlowSystem
    tables: dict[str, LabelTable] = field(default_factory=dict)
    aliases: AliasStore = field(default_factory=AliasStore)
    timestamps: bool = False
    log: list[AuditRecord] = field(default_factory=list, init=False)

    def __post_init__(self):
        if not self.tables:
            self.tables = {n.flow_id: compute_labels(n) for n in self.system.networks}
        self._lock = threading.Lock()
        self._seq = 0

    def _label(self, entity: str) -> Label | None:
        flow = self.system.flow_of(entity)
        table = self.tables.get(flow) if flow is not None else None
        return table.get(entity) if table is not None else None

    def evaluate(self, req: Request) -> Decision:
        return decide_system(self.system, self.tables, req)

    def evaluate_and_log(self, req: Request) -> tuple[Decision, AuditRecord]:
        decision = self.evaluate(req)
        label_src, label_dst = self._label(req.src), self._label(req.dst)
        with self._lock:
            self._seq += 1
            stamp = datetime.now(timezone.utc).isoformat() if self.timestamps else None
            record = AuditRecord(req, decision, label_src, label_dst, self._seq, stamp)
            self.log.append(record)
        return decision, record

    def audit_lines(self) -> list[str]:
        with self._lock:
            return [r.line() for r in self.log]


def evaluate_and_log(session: PDPSession, req: Request) -> tuple[Decision, AuditRecord]:
    return session.evaluate_and_log(req)
