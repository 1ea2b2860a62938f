"""Lattice tests, joins and meets, Dedekind-MacNeille completion, and
union/subset operations on networks.

A poset is a lattice when every pair of elements has a least upper bound
and a greatest lower bound.  The completion adds the fewest elements
("void labels", assigned to no entity) needed to make it one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import NameCollision, UnknownClass, UnknownEntity
from .model import Network
from .order import EquivClass, Label, Poset


@dataclass(frozen=True)
class LatticeReport:
    is_lattice: bool
    join_failures: tuple[tuple[EquivClass, EquivClass], ...]
    meet_failures: tuple[tuple[EquivClass, EquivClass], ...]


@dataclass(frozen=True)
class CompletionReport:
    original_size: int
    completed_size: int
    void_labels: int
    void_elements: tuple[Label, ...]
    lattice: Poset = field(repr=False)
    embedding: dict[int, int] = field(repr=False)


def _class_id(p: Poset, c: EquivClass | int) -> int:
    cid = c.id if isinstance(c, EquivClass) else c
    if not isinstance(cid, int) or not 0 <= cid < len(p.classes):
        raise UnknownClass(c)
    if isinstance(c, EquivClass) and p.classes[cid] != c:
        raise UnknownClass(c)
    return cid


def _minimal(p: Poset, ids: frozenset[int]) -> frozenset[int]:
    return frozenset(u for u in ids if not any(v != u and p.leq(v, u) for v in ids))


def _maximal(p: Poset, ids: frozenset[int]) -> frozenset[int]:
    return frozenset(u for u in ids if not any(v != u and p.leq(u, v) for v in ids))


def joins_of(p: Poset, a: EquivClass | int, b: EquivClass | int) -> frozenset[int]:
    """Minimal common upper bounds of ``a`` and ``b`` (class ids).

    A singleton result is the join; empty or larger means none exists.
    """
    i, j = _class_id(p, a), _class_id(p, b)
    return _minimal(p, p.above(i) & p.above(j))


def meets_of(p: Poset, a: EquivClass | int, b: EquivClass | int) -> frozenset[int]:
    i, j = _class_id(p, a), _class_id(p, b)
    return _maximal(p, p.below(i) & p.below(j))


def lattice_check(p: Poset) -> LatticeReport:
    """Report every pair without a unique join or meet.

    The empty poset is not a lattice (it has no top or bottom), although it
    has no failing pair.
    """
    ordered = sorted(p.classes, key=lambda c: (c.key, c.id))
    joins, meets = [], []
    for a, b in combinations(ordered, 2):
        if p.leq(a.id, b.id) or p.leq(b.id, a.id):
            continue
        if len(joins_of(p, a.id, b.id)) != 1:
            joins.append((a, b))
        if len(meets_of(p, a.id, b.id)) != 1:
            meets.append((a, b))
    ok = bool(p.classes) and not joins and not meets
    return LatticeReport(ok, tuple(joins), tuple(meets))


def _provenance(p: Poset, ids: Iterable[int]) -> Label:
    names: set[str] = set()
    for i in ids:
        names |= p.classes[i].members
    return Label.of(names)


def dedekind_macneille(p: Poset) -> CompletionReport:
    """Complete ``p`` to the smallest lattice it order-embeds into.

    Cuts are the down-sets ``L(U(X))``; each is an intersection of
    principal down-sets, so the family is grown by intersecting with one
    principal down-set at a time (the whole set is the empty intersection).
    Cuts are named by the provenance of the classes they contain.
    """
    n = len(p.classes)
    everything = frozenset(range(n))
    cuts = {everything}
    for c in range(n):
        principal = p.below(c)
        cuts |= {cut & principal for cut in cuts}

    def sort_key(cut):
        return (len(cut), sorted(_provenance(p, cut).provenance), sorted(cut))

    ordered = sorted(cuts, key=sort_key)
    index = {cut: i for i, cut in enumerate(ordered)}
    classes = tuple(
        EquivClass(i, frozenset(_provenance(p, cut).provenance)) for i, cut in enumerate(ordered)
    )
    order = frozenset(
        (i, j)
        for i, a in enumerate(ordered)
        for j, b in enumerate(ordered)
        if a <= b
    )
    embedding = {c: index[p.below(c)] for c in range(n)}
    image = set(embedding.values())
    voids = tuple(_provenance(p, cut) for i, cut in enumerate(ordered) if i not in image)
    return CompletionReport(
        original_size=n,
        completed_size=len(ordered),
        void_labels=len(ordered) - n,
        void_elements=voids,
        lattice=Poset(classes, order, {}),
        embedding=embedding,
    )


def merge_networks(
    n1: Network,
    n2: Network,
    shared_names_allowed: bool = False,
    flow_id: str | None = None,
) -> Network:
    """Union of two networks; same-named entities are identified when allowed."""
    shared = n1.entities & n2.entities
    if shared and not shared_names_allowed:
        raise NameCollision(shared)
    return Network(
        flow_id or n1.flow_id,
        n1.entities | n2.entities,
        n1.channels | n2.channels,
    )


def induced_subnetwork(n: Network, keep: Iterable[str]) -> Network:
    keep = frozenset(keep)
    for e in sorted(keep):
        if e not in n.entities:
            raise UnknownEntity(e, f"flow {n.flow_id}")
    return Network(
        n.flow_id,
        keep,
        frozenset((s, d) for s, d in n.channels if s in keep and d in keep),
    )
