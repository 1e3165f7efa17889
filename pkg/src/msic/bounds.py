"""Clique-style sandwich bounds on the hyper-minrank.

Upper bound: partition the receivers into cliques that one sender can
serve with a single XOR (mutual side info inside the clique, all of it
stored at the serving sender).  The partition size certifies itself:
we build the induced one-row-per-clique code and verify it.

Lower bound: in the complement hypergraph, a vertex set that forms a
full directed clique with self-loops inside some sender's projection,
and that meets the per-sender hypothesis everywhere else, forces that
many independent rows in any valid selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple
from itertools import combinations

from .codec import LinearCode, verify_code
from .hypergraph import (
    HyperEdge,
    build,
    complement,
    sender_projection_pairs,
)
from .instance import Instance, check_valid

__all__ = [
    "ImplementableClique",
    "CliqueCover",
    "ComplementCliqueWitness",
    "enumerate_implementable_cliques",
    "clique_cover_upper",
    "complement_clique_lower",
    "induced_code",
    "receiver_projection",
    "is_valid_clique",
    "EXACT_NODE_CAP",
]

EXACT_NODE_CAP = 500_000

COND_CONTAINS = "contains-clique"
COND_NO_LOOPS = "no-self-loops"


@dataclass(frozen=True)
class ImplementableClique:
    """Receivers with mutual side info, all stored at one sender."""

    receivers: FrozenSet[int]
    sender: int


@dataclass(frozen=True)
class CliqueCover:
    cliques: Tuple[ImplementableClique, ...]
    exact: bool


@dataclass(frozen=True)
class ComplementCliqueWitness:
    """A complement clique meeting the per-sender hypothesis.

    sender_conditions[n-1] records which branch sender n satisfies:
    its projection contains the whole clique, or it has no self-loop
    on any clique vertex.
    """

    vertices: FrozenSet[int]
    host_sender: int
    edges: FrozenSet[Tuple[int, int]]
    sender_conditions: Tuple[str, ...]


def _clique_key(c: ImplementableClique) -> Tuple:
    return (tuple(sorted(c.receivers)), c.sender)


def enumerate_implementable_cliques(inst: Instance) -> List[ImplementableClique]:
    """Every nonempty subset of some sender's store with mutual side info."""
    check_valid(inst)
    found = set()
    for n in range(1, inst.N + 1):
        store = sorted(inst.sender_stores[n - 1])
        for size in range(1, len(store) + 1):
            for subset in combinations(store, size):
                if all(
                    k2 in inst.side_info[k - 1]
                    for k in subset
                    for k2 in subset
                    if k2 != k
                ):
                    found.add(ImplementableClique(frozenset(subset), n))
    return sorted(found, key=_clique_key)


def _greedy_cover(
    cliques: List[ImplementableClique], K: int
) -> List[ImplementableClique]:
    order = sorted(cliques, key=lambda c: (-len(c.receivers),) + _clique_key(c))
    uncovered = set(range(1, K + 1))
    chosen = []
    while uncovered:
        pick = next(c for c in order if c.receivers <= uncovered)
        chosen.append(pick)
        uncovered -= pick.receivers
    return chosen


def _exact_cover(
    cliques: List[ImplementableClique],
    K: int,
    seed: List[ImplementableClique],
) -> Tuple[List[ImplementableClique], bool]:
    """Branch-and-bound set partition on the lowest uncovered receiver."""
    order = sorted(cliques, key=lambda c: (-len(c.receivers),) + _clique_key(c))
    by_receiver: Dict[int, List[ImplementableClique]] = {
        k: [c for c in order if k in c.receivers] for k in range(1, K + 1)
    }
    max_size = max(len(c.receivers) for c in cliques)
    best = list(seed)
    best_m = len(seed)
    nodes = 0
    capped = False

    def rec(uncovered: FrozenSet[int], parts: List[ImplementableClique]) -> None:
        nonlocal best, best_m, nodes, capped
        if capped:
            return
        nodes += 1
        if nodes > EXACT_NODE_CAP:
            capped = True
            return
        if not uncovered:
            if len(parts) < best_m:
                best_m = len(parts)
                best = parts.copy()
            return
        needed = -(-len(uncovered) // max_size)
        if len(parts) + needed >= best_m:
            return
        k = min(uncovered)
        for c in by_receiver[k]:
            if c.receivers <= uncovered:
                parts.append(c)
                rec(uncovered - c.receivers, parts)
                parts.pop()

    rec(frozenset(range(1, K + 1)), [])
    return best, capped


def induced_code(cover: CliqueCover, inst: Instance) -> LinearCode:
    """One all-ones transmission per clique, sent by its serving sender."""
    per_sender: List[List[int]] = [[] for _ in range(inst.N)]
    for c in cover.cliques:
        mask = 0
        for k in c.receivers:
            mask |= 1 << (k - 1)
        per_sender[c.sender - 1].append(mask)
    return LinearCode(K=inst.K, senders=tuple(tuple(v) for v in per_sender))


def clique_cover_upper(
    inst: Instance, mode: str = "exact"
) -> Tuple[int, CliqueCover]:
    """Smallest found partition of [K] into implementable cliques.

    Exact mode proves minimality by branch and bound; if the node cap
    trips, the best partition found so far is returned with
    exact=False.  The induced code is verified before returning, so m
    transmissions provably suffice.
    """
    check_valid(inst)
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    cliques = enumerate_implementable_cliques(inst)
    greedy = _greedy_cover(cliques, inst.K)
    if mode == "greedy":
        chosen, exact = greedy, False
    else:
        chosen, capped = _exact_cover(cliques, inst.K, greedy)
        exact = not capped
    cover = CliqueCover(cliques=tuple(chosen), exact=exact)
    code = induced_code(cover, inst)
    if not verify_code(code, inst, mode="algebraic"):
        raise RuntimeError("induced cover code failed verification")
    return len(chosen), cover


def complement_clique_lower(
    inst: Instance,
) -> Tuple[int, Optional[ComplementCliqueWitness]]:
    """Largest complement clique satisfying the per-sender hypothesis.

    The returned value never exceeds the hyper-minrank.  A feasible
    instance always admits a singleton witness, so 0 only appears for
    degenerate inputs rejected elsewhere.
    """
    check_valid(inst)
    comp = complement(build(inst))
    pairs = sender_projection_pairs(comp)
    for size in range(inst.K, 0, -1):
        for vertices in combinations(range(1, inst.K + 1), size):
            edges = frozenset((a, b) for a in vertices for b in vertices)
            hosts = [
                n for n in range(1, inst.N + 1) if edges <= pairs[n - 1]
            ]
            if not hosts:
                continue
            conditions = []
            for n in range(1, inst.N + 1):
                p = pairs[n - 1]
                if edges <= p:
                    conditions.append(COND_CONTAINS)
                elif all((k, k) not in p for k in vertices):
                    conditions.append(COND_NO_LOOPS)
                else:
                    break
            if len(conditions) < inst.N:
                continue
            witness = ComplementCliqueWitness(
                vertices=frozenset(vertices),
                host_sender=hosts[0],
                edges=edges,
                sender_conditions=tuple(conditions),
            )
            return size, witness
    return 0, None


def receiver_projection(edges: Iterable[HyperEdge]) -> FrozenSet[int]:
    """Receivers appearing as the first coordinate of some edge."""
    return frozenset(e.k for e in edges)


def is_valid_clique(edges: Iterable[HyperEdge]) -> bool:
    """Parity predicate on the sender-side pairs of a hypergraphic clique.

    Collects the unordered sender pairs of the cross-sender edges and
    requires every touched sender to have odd degree; with no
    cross-sender edges the condition holds vacuously.  Cliqueness of
    the input is assumed, not checked.
    """
    cs = {frozenset((e.n, e.n2)) for e in edges if e.n != e.n2}
    if not cs:
        return True
    degree: Dict[int, int] = {}
    for pair in cs:
        for n in pair:
            degree[n] = degree.get(n, 0) + 1
    return all(d % 2 == 1 for d in degree.values())
