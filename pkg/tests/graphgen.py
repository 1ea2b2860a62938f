"""Generators and brute-force oracles shared by the test modules.

Nothing here imports the closure or completion code it is used to check.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations, product

from poflow.model import FlowSystem, Network, build_flow_system

FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


def names(n: int, prefix: str = "n") -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def all_digraphs(n: int):
    """Every digraph on ``n`` labelled nodes without self-loops."""
    nodes = names(n)
    arcs = [(a, b) for a in nodes for b in nodes if a != b]
    for bits in range(1 << len(arcs)):
        chans = [arcs[i] for i in range(len(arcs)) if bits >> i & 1]
        yield Network("g", frozenset(nodes), frozenset(chans))


def random_network(rng: random.Random, n: int, p: float = 0.25, flow_id: str = "g",
                   prefix: str = "n", self_loops: bool = False) -> Network:
    nodes = names(n, prefix)
    chans = [(a, b) for a in nodes for b in nodes
             if (a != b or self_loops) and rng.random() < p]
    return Network(flow_id, frozenset(nodes), frozenset(chans))


def random_flow_system(rng: random.Random) -> FlowSystem:
    k = rng.randint(0, 3)
    nets = []
    for i in range(k):
        n = rng.randint(0, 6)
        nets.append(random_network(rng, n, rng.random() * 0.5, f"f{i}", f"e{i}_",
                                   self_loops=True))
    groups = []
    populated = [net for net in nets if net.entities]
    if len(populated) >= 2:
        for _ in range(rng.randint(0, 2)):
            chosen = rng.sample(populated, rng.randint(2, len(populated)))
            groups.append({rng.choice(sorted(net.entities)) for net in chosen})
    return build_flow_system(nets, groups)


def closure_matrix(nodes, channels) -> dict[str, set[str]]:
    """Reflexive-transitive closure by Warshall's algorithm."""
    reach = {a: {a} for a in nodes}
    for a, b in channels:
        reach[a].add(b)
    for k in nodes:
        for i in nodes:
            if k in reach[i]:
                reach[i] |= reach[k]
    return reach


# posets given as (n, leq) where leq is a set of index pairs, reflexive+transitive

def _is_transitive(n: int, rel: set[tuple[int, int]]) -> bool:
    return all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)


def all_posets(n: int) -> list[frozenset[tuple[int, int]]]:
    """Every poset on ``n`` elements up to isomorphism, as reflexive relations.

    Each poset has a linear extension, so strict relations contained in
    ``i < j`` cover every isomorphism type; duplicates are removed with a
    canonical form taken over all relabellings.
    """
    strict = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    out = []
    perms = list(permutations(range(n)))
    for bits in range(1 << len(strict)):
        rel = {strict[k] for k in range(len(strict)) if bits >> k & 1}
        if not _is_transitive(n, rel):
            continue
        canon = min(tuple(sorted((p[a], p[b]) for a, b in rel)) for p in perms)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(frozenset(rel | {(i, i) for i in range(n)}))
    return out


def random_poset(rng: random.Random, n: int, p: float) -> frozenset[tuple[int, int]]:
    strict = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p}
    reach = closure_matrix(range(n), strict)
    return frozenset((a, b) for a in range(n) for b in reach[a])


def brute_is_lattice(elements, leq) -> bool:
    """Pairwise least-upper / greatest-lower bound existence, by scanning."""
    elements = list(elements)
    if not elements:
        return False
    for a, b in product(elements, repeat=2):
        ups = [u for u in elements if leq(a, u) and leq(b, u)]
        if not any(all(leq(u, v) for v in ups) for u in ups):
            return False
        downs = [d for d in elements if leq(d, a) and leq(d, b)]
        if not any(all(leq(v, d) for v in downs) for d in downs):
            return False
    return True


def brute_cuts(n: int, leq: frozenset[tuple[int, int]]) -> set[frozenset[int]]:
    """All sets L(U(X)) over every subset X of the elements."""
    elems = range(n)
    cuts = set()
    for r in range(n + 1):
        for xs in combinations(elems, r):
            ups = [u for u in elems if all((x, u) in leq for x in xs)]
            lows = frozenset(d for d in elems if all((d, u) in leq for u in ups))
            cuts.add(lows)
    return cuts
