"""Exception hierarchy shared by every poflow module.

Errors raised while reading a file carry the offending line number in
``line`` so the CLI can point at it.
"""

from __future__ import annotations


class PoflowError(Exception):
    """Base class for all poflow errors."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is not None:
            return f"line {self.line}: {self.message}"
        return self.message


# structural validation (core model)

class ModelError(PoflowError):
    pass


class EmptyEntityName(ModelError):
    def __init__(self, line: int | None = None):
        super().__init__("entity name is empty", line)


class InvalidEntityName(ModelError):
    def __init__(self, name: str, line: int | None = None):
        super().__init__(f"invalid name {name!r}: use letters, digits, '_' or '-'", line)
        self.name = name


class DuplicateEntity(ModelError):
    def __init__(self, entity: str, flow_id: str, line: int | None = None):
        super().__init__(f"entity {entity} declared twice in flow {flow_id}", line)
        self.entity = entity
        self.flow_id = flow_id


class UndeclaredEntity(ModelError):
    def __init__(self, entity: str, channel: tuple[str, str], line: int | None = None):
        super().__init__(
            f"channel {channel[0]} -> {channel[1]} uses undeclared entity {entity}", line
        )
        self.entity = entity
        self.channel = channel


class FlowIdCollision(ModelError):
    def __init__(self, flow_id: str, line: int | None = None):
        super().__init__(f"flow id {flow_id} used twice", line)
        self.flow_id = flow_id


class EntityInMultipleFlows(ModelError):
    def __init__(self, entity: str, flows: tuple[str, str], line: int | None = None):
        super().__init__(f"entity {entity} appears in flows {flows[0]} and {flows[1]}", line)
        self.entity = entity
        self.flows = flows


class SplitGroupTooSmall(ModelError):
    def __init__(self, group: frozenset[str], line: int | None = None):
        super().__init__(f"split group {sorted(group)} needs at least two members", line)
        self.group = group


class SplitMemberUnknown(ModelError):
    def __init__(self, entity: str, line: int | None = None):
        super().__init__(f"split member {entity} is not in any flow", line)
        self.entity = entity


class SplitGroupSameFlow(ModelError):
    def __init__(self, group: frozenset[str], flow_id: str, line: int | None = None):
        super().__init__(
            f"split group {sorted(group)} has two members in flow {flow_id}", line
        )
        self.group = group
        self.flow_id = flow_id


class NameCollision(ModelError):
    def __init__(self, names: frozenset[str]):
        super().__init__(f"networks share entity names: {','.join(sorted(names))}")
        self.names = names


# lookups

class UnknownEntity(PoflowError):
    def __init__(self, entity: str, where: str = "network"):
        super().__init__(f"unknown entity {entity} in {where}")
        self.entity = entity


class UnknownClass(PoflowError):
    def __init__(self, cls: object):
        super().__init__(f"unknown equivalence class {cls!r}")


class UnknownChannel(PoflowError):
    def __init__(self, channel: tuple[str, str]):
        super().__init__(f"no channel {channel[0]} -> {channel[1]}")
        self.channel = channel


class UnknownFlow(PoflowError):
    def __init__(self, flow_id: str):
        super().__init__(f"unknown flow {flow_id}")
        self.flow_id = flow_id


class FlowMismatch(PoflowError):
    def __init__(self, expected: str, got: str):
        super().__init__(f"policy is for flow {got}, network is flow {expected}")


class DuplicateAlias(PoflowError):
    pass


class UnknownAlias(PoflowError):
    def __init__(self, name: str):
        super().__init__(f"no alias named {name}")
        self.name = name


# file formats

class ParseError(PoflowError):
    """Malformed network or policy text."""


class UnknownDirective(ParseError):
    def __init__(self, directive: str, line: int | None = None):
        super().__init__(f"unknown directive {directive!r}", line)
        self.directive = directive


class UnsatisfiableSpec(ParseError):
    def __init__(self, pair: tuple[str, str], line: int | None = None):
        super().__init__(
            f"forbid {pair[0]} {pair[1]} contradicts the flows the policy requires", line
        )
        self.pair = pair
