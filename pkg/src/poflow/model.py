"""Entities, channels, networks and multi-flow systems.

A :class:`Network` is one data flow: a set of named entities and the
directed channels between them.  A :class:`FlowSystem` groups several
entity-disjoint networks and records *split groups*, i.e. entities that
are parts of one real-world unit but sit in different flows (A1 and A1S).
Split groups are metadata only; they never create channels.

All values are immutable once built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DuplicateEntity,
    EmptyEntityName,
    EntityInMultipleFlows,
    FlowIdCollision,
    InvalidEntityName,
    SplitGroupSameFlow,
    SplitGroupTooSmall,
    SplitMemberUnknown,
    UndeclaredEntity,
    UnknownEntity,
)

NAME_RE = re.compile(r"[A-Za-z0-9_-]+")

Channel = tuple[str, str]


def check_name(name: str) -> str:
    if not isinstance(name, str) or name == "":
        raise EmptyEntityName()
    if not NAME_RE.fullmatch(name):
        raise InvalidEntityName(name)
    return name


@dataclass(frozen=True)
class Network:
    flow_id: str
    entities: frozenset[str]
    channels: frozenset[Channel]

    def __post_init__(self):
        object.__setattr__(self, "entities", frozenset(self.entities))
        object.__setattr__(self, "channels", frozenset(tuple(c) for c in self.channels))
        check_name(self.flow_id)
        for e in self.entities:
            check_name(e)
        for src, dst in sorted(self.channels):
            for end in (src, dst):
                if end not in self.entities:
                    raise UndeclaredEntity(end, (src, dst))

    @cached_property
    def successors(self) -> Mapping[str, tuple[str, ...]]:
        # self-channels are inert: CanFlow is reflexive anyway
        out: dict[str, list[str]] = {e: [] for e in self.entities}
        for src, dst in self.channels:
            if src != dst:
                out[src].append(dst)
        return {e: tuple(sorted(v)) for e, v in out.items()}

    @cached_property
    def predecessors(self) -> Mapping[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {e: [] for e in self.entities}
        for src, dst in self.channels:
            if src != dst:
                inc[dst].append(src)
        return {e: tuple(sorted(v)) for e, v in inc.items()}

    def sorted_entities(self) -> list[str]:
        return sorted(self.entities)

    def sorted_channels(self) -> list[Channel]:
        return sorted(self.channels)

    def require(self, entity: str) -> str:
        if entity not in self.entities:
            raise UnknownEntity(entity, f"flow {self.flow_id}")
        return entity

    def with_channels(self, channels: Iterable[Channel]) -> Network:
        return Network(self.flow_id, self.entities, frozenset(channels))

    def __repr__(self) -> str:
        return (
            f"Network({self.flow_id!r}, {len(self.entities)} entities, "
            f"{len(self.channels)} channels)"
        )


def build_network(
    flow_id: str, entities: Iterable[str], channels: Iterable[Channel] = ()
) -> Network:
    """Validate and build a network.

    Duplicate channels collapse; duplicate entity declarations are an error.
    """
    seen: set[str] = set()
    for e in entities:
        check_name(e)
        if e in seen:
            raise DuplicateEntity(e, flow_id)
        seen.add(e)
    return Network(flow_id, frozenset(seen), frozenset((s, d) for s, d in channels))


@dataclass(frozen=True)
class FlowSystem:
    networks: tuple[Network, ...]
    split_groups: frozenset[frozenset[str]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "networks", tuple(self.networks))
        object.__setattr__(
            self, "split_groups", frozenset(frozenset(g) for g in self.split_groups)
        )
        flows: dict[str, Network] = {}
        owner: dict[str, str] = {}
        for net in self.networks:
            if net.flow_id in flows:
                raise FlowIdCollision(net.flow_id)
            flows[net.flow_id] = net
            for e in sorted(net.entities):
                if e in owner:
                    raise EntityInMultipleFlows(e, (owner[e], net.flow_id))
                owner[e] = net.flow_id
        for group in sorted(self.split_groups, key=sorted):
            if len(group) < 2:
                raise SplitGroupTooSmall(group)
            used: set[str] = set()
            for e in sorted(group):
                if e not in owner:
                    raise SplitMemberUnknown(e)
                if owner[e] in used:
                    raise SplitGroupSameFlow(group, owner[e])
                used.add(owner[e])
        object.__setattr__(self, "_flows", flows)
        object.__setattr__(self, "_owner", owner)

    @property
    def flow_ids(self) -> list[str]:
        return [n.flow_id for n in self.networks]

    def network(self, flow_id: str) -> Network | None:
        return self._flows.get(flow_id)

    def flow_of(self, entity: str) -> str | None:
        """Flow id owning ``entity``, or None when no flow declares it."""
        return self._owner.get(entity)

    @property
    def entities(self) -> frozenset[str]:
        return frozenset(self._owner)

    def split_partners(self, entity: str) -> frozenset[str]:
        out: set[str] = set()
        for group in self.split_groups:
            if entity in group:
                out |= group
        out.discard(entity)
        return frozenset(out)


def build_flow_system(
    networks: Iterable[Network], split_groups: Iterable[Iterable[str]] = ()
) -> FlowSystem:
    return FlowSystem(tuple(networks), frozenset(frozenset(g) for g in split_groups))
