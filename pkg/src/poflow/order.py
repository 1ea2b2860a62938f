"""CanFlow, condensation into a partial order, and provenance labels.

CanFlow is the reflexive-transitive closure of the channel relation.  Its
strongly connected components are the equivalence classes; the classes
ordered by reachability form a partial order.  An entity's label is the
set of entity names whose data can reach it.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import UnknownEntity
from .model import Network, build_network


@dataclass(frozen=True)
class Label:
    """A provenance set, kept canonically sorted.

    ``a <= b`` is label inclusion.  The empty label is allowed; it only
    shows up as the bottom element of a completed lattice.
    """

    provenance: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "provenance", tuple(sorted(set(self.provenance))))

    @classmethod
    def of(cls, names: Iterable[str]) -> Label:
        return cls(tuple(names))

    @cached_property
    def names(self) -> frozenset[str]:
        return frozenset(self.provenance)

    def __le__(self, other: Label) -> bool:
        return self.names <= other.names

    def __lt__(self, other: Label) -> bool:
        return self.names < other.names

    def __or__(self, other: Label) -> Label:
        return Label(self.provenance + other.provenance)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __iter__(self) -> Iterator[str]:
        return iter(self.provenance)

    def __len__(self) -> int:
        return len(self.provenance)

    def __str__(self) -> str:
        return "{" + ",".join(self.provenance) + "}"


@dataclass(frozen=True)
class LabelTable:
    flow_id: str
    labels: Mapping[str, Label]

    def __getitem__(self, entity: str) -> Label:
        return self.labels[entity]

    def get(self, entity: str) -> Label | None:
        return self.labels.get(entity)

    def __contains__(self, entity: object) -> bool:
        return entity in self.labels

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def entities(self) -> frozenset[str]:
        return frozenset(self.labels)


@dataclass(frozen=True)
class EquivClass:
    id: int
    members: frozenset[str]

    @property
    def key(self) -> str:
        """Smallest member name; used for deterministic ordering."""
        return min(self.members) if self.members else ""

    def __str__(self) -> str:
        return "{" + ",".join(sorted(self.members)) + "}"


@dataclass(frozen=True)
class Poset:
    """A finite partial order over equivalence classes.

    ``classes[i].id == i`` and ids form a linear extension of the order.
    ``order`` holds every pair ``(a, b)`` with ``a <= b`` (reflexive and
    transitive).  ``class_of`` maps entity names to class ids.
    """

    classes: tuple[EquivClass, ...]
    order: frozenset[tuple[int, int]]
    class_of: Mapping[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.classes)

    @cached_property
    def _up(self) -> tuple[frozenset[int], ...]:
        up: list[set[int]] = [set() for _ in self.classes]
        for a, b in self.order:
            up[a].add(b)
        return tuple(frozenset(s) for s in up)

    @cached_property
    def _down(self) -> tuple[frozenset[int], ...]:
        down: list[set[int]] = [set() for _ in self.classes]
        for a, b in self.order:
            down[b].add(a)
        return tuple(frozenset(s) for s in down)

    def leq(self, a: int, b: int) -> bool:
        return (a, b) in self.order

    def above(self, a: int) -> frozenset[int]:
        """Ids ``b`` with ``a <= b``."""
        return self._up[a]

    def below(self, a: int) -> frozenset[int]:
        """Ids ``b`` with ``b <= a``."""
        return self._down[a]

    def class_named(self, entity: str) -> EquivClass:
        try:
            return self.classes[self.class_of[entity]]
        except KeyError:
            raise UnknownEntity(entity, "poset") from None

    def minimal(self) -> list[int]:
        return [c.id for c in self.classes if self._down[c.id] == {c.id}]

    def maximal(self) -> list[int]:
        return [c.id for c in self.classes if self._up[c.id] == {c.id}]

    def violations(self) -> list[str]:
        """Partial-order law violations; empty for a valid poset."""
        out = []
        ids = range(len(self.classes))
        for c in self.classes:
            if c.id != self.classes.index(c):
                out.append(f"class {c} has id {c.id} at a different position")
        for a, b in self.order:
            if a not in ids or b not in ids:
                out.append(f"pair ({a},{b}) names an unknown class")
        if out:
            return out
        for a in ids:
            if (a, a) not in self.order:
                out.append(f"not reflexive at {a}")
        for a, b in self.order:
            if a != b and (b, a) in self.order:
                out.append(f"not antisymmetric: {a} and {b}")
            for c in self._up[b]:
                if (a, c) not in self.order:
                    out.append(f"not transitive: {a}<={b}<={c}")
        return out

    @classmethod
    def from_pairs(cls, elements: Iterable[str], pairs: Iterable[tuple[str, str]] = ()) -> Poset:
        """Poset generated by ``pairs`` read as ``a <= b``; cycles collapse."""
        return condense(build_network("poset", list(elements), pairs))


def reachable_from(net: Network, x: str) -> frozenset[str]:
    """Every entity ``y`` with ``x`` CanFlow ``y``, including ``x``."""
    net.require(x)
    seen = {x}
    queue = deque([x])
    succ = net.successors
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return frozenset(seen)


def can_flow(net: Network, x: str, y: str) -> bool:
    net.require(y)
    return y in reachable_from(net, x)


def _tarjan(net: Network) -> list[list[str]]:
    # iterative Tarjan; components come out sinks-first
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    succ = net.successors
    counter = 0
    for root in sorted(net.entities):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            nbrs = succ[v]
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if w not in index:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def condense(net: Network) -> Poset:
    """Quotient the network by mutual reachability.

    Class ids follow a topological order of the condensation (sources
    first); ties between incomparable classes go to the class with the
    lexicographically smallest member.
    """
    comps = [frozenset(c) for c in _tarjan(net)]
    comp_of = {e: i for i, c in enumerate(comps) for e in c}
    preds: list[set[int]] = [set() for _ in comps]
    succs: list[set[int]] = [set() for _ in comps]
    for src, dst in net.channels:
        a, b = comp_of[src], comp_of[dst]
        if a != b:
            succs[a].add(b)
            preds[b].add(a)

    indeg = [len(p) for p in preds]
    heap = [(min(comps[i]), i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    topo: list[int] = []
    while heap:
        _, i = heapq.heappop(heap)
        topo.append(i)
        for j in succs[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (min(comps[j]), j))

    new_id = {old: new for new, old in enumerate(topo)}
    classes = tuple(EquivClass(new_id[old], comps[old]) for old in topo)
    below: list[frozenset[int]] = []
    for old in topo:
        down = {new_id[old]}
        for p in preds[old]:
            down |= below[new_id[p]]
        below.append(frozenset(down))
    order = frozenset((a, b) for b, down in enumerate(below) for a in down)
    class_of = {e: new_id[comp_of[e]] for e in net.entities}
    return Poset(classes, order, class_of)


def compute_labels(net: Network) -> LabelTable:
    """Provenance label of every entity, built bottom-up over the condensation."""
    poset = condense(net)
    preds: list[set[int]] = [set() for _ in poset.classes]
    for src, dst in net.channels:
        a, b = poset.class_of[src], poset.class_of[dst]
        if a != b:
            preds[b].add(a)
    class_labels: list[frozenset[str]] = []
    # ids are topological, so every predecessor is already labelled
    for c in poset.classes:
        names = set(c.members)
        for p in preds[c.id]:
            names |= class_labels[p]
        class_labels.append(frozenset(names))
    by_class = [Label.of(names) for names in class_labels]
    return LabelTable(net.flow_id, {e: by_class[poset.class_of[e]] for e in net.entities})


def simulate_propagation(net: Network, source: str) -> frozenset[str]:
    """Inject a token at ``source`` and copy it across channels until nothing changes.

    Deliberately naive: this is the reference the closure code is tested against.
    """
    if source not in net.entities:
        raise UnknownEntity(source, f"flow {net.flow_id}")
    holders = {source}
    changed = True
    while changed:
        changed = False
        for src, dst in net.channels:
            if src in holders and dst not in holders:
                holders.add(dst)
                changed = True
    return frozenset(holders)
