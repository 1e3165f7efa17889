"""Side-information hypergraph, composite adjacency and fitting tests.

Edges are 4-tuples (k, k2, n, n2): receiver k, message k2, sender pair
{n, n2}.  Three classes exist:

  demand   (k, k, n, n)    sender n stores the demanded message k
  cached   (k, k2, n, n)   receiver k already holds k2 and sender n stores it
  coupled  (k, k2, n, n2)  n != n2 both store k2, which k neither holds nor wants

The composite adjacency of a hypergraph (or of a selected sub-hypergraph)
is a list of N bit matrices A_1..A_N, one K x K block per sender.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .gf2 import gf2_rank
from .instance import Instance, derive_stats

__all__ = [
    "HyperEdge",
    "SideInfoHypergraph",
    "CompositeAdjacency",
    "SubChoice",
    "build",
    "adjacency",
    "sub_adjacency",
    "is_valid_sub",
    "fits",
    "complement",
    "sender_projection_pairs",
    "choice_sort_key",
]

DEMAND = "demand"
CACHED = "cached"
COUPLED = "coupled"


@dataclass(frozen=True, order=True)
class HyperEdge:
    k: int
    k2: int
    n: int
    n2: int
    kind: str

    def __post_init__(self):
        if self.kind == DEMAND:
            if self.k != self.k2 or self.n != self.n2:
                raise ValueError(f"demand edge must have k==k2 and n==n2: {self}")
        elif self.kind == CACHED:
            if self.k == self.k2 or self.n != self.n2:
                raise ValueError(f"cached edge must have k!=k2 and n==n2: {self}")
        elif self.kind == COUPLED:
            if self.k == self.k2 or self.n >= self.n2:
                raise ValueError(f"coupled edge must have k!=k2 and n<n2: {self}")
        else:
            raise ValueError(f"unknown edge kind {self.kind!r}")

    def senders(self) -> FrozenSet[int]:
        return frozenset((self.n, self.n2))


@dataclass(frozen=True)
class SideInfoHypergraph:
    inst: Instance
    demand: FrozenSet[HyperEdge]
    cached: FrozenSet[HyperEdge]
    coupled: FrozenSet[HyperEdge]

    def all_edges(self) -> FrozenSet[HyperEdge]:
        return self.demand | self.cached | self.coupled


@dataclass(frozen=True)
class CompositeAdjacency:
    """N blocks of K rows; row bit m-1 is the column for message m."""

    K: int
    N: int
    blocks: Tuple[Tuple[int, ...], ...]

    def entry(self, k: int, k2: int, n: int) -> int:
        return (self.blocks[n - 1][k - 1] >> (k2 - 1)) & 1

    def sum_rank(self) -> int:
        return sum(gf2_rank(block) for block in self.blocks)

    def to_lists(self) -> List[List[List[int]]]:
        return [
            [[(row >> j) & 1 for j in range(self.K)] for row in block]
            for block in self.blocks
        ]


@dataclass(frozen=True)
class SubChoice:
    """One edge selection per receiver, normalized.

    demand_senders[k-1]   senders whose demand edge for k is selected
    cached_edges[k-1]     selected cached edges as (message, sender) pairs
    coupled_senders[k-1]  pairs (message k2, even sender set), k2 ascending,
                          empty sender sets omitted
    """

    demand_senders: Tuple[FrozenSet[int], ...]
    cached_edges: Tuple[FrozenSet[Tuple[int, int]], ...]
    coupled_senders: Tuple[Tuple[Tuple[int, FrozenSet[int]], ...], ...]


def build(inst: Instance) -> SideInfoHypergraph:
    """All demand, cached and coupled edges of an instance."""
    stats = derive_stats(inst)
    demand = set()
    cached = set()
    coupled = set()
    for k in range(1, inst.K + 1):
        for n in stats.availability[k - 1]:
            demand.add(HyperEdge(k, k, n, n, DEMAND))
        for m in inst.side_info[k - 1]:
            for n in stats.availability[m - 1]:
                cached.add(HyperEdge(k, m, n, n, CACHED))
        for k2 in range(1, inst.K + 1):
            if k2 == k or k2 in inst.side_info[k - 1]:
                continue
            holders = sorted(stats.availability[k2 - 1])
            for i, n in enumerate(holders):
                for n2 in holders[i + 1:]:
                    coupled.add(HyperEdge(k, k2, n, n2, COUPLED))
    return SideInfoHypergraph(
        inst=inst,
        demand=frozenset(demand),
        cached=frozenset(cached),
        coupled=frozenset(coupled),
    )


def adjacency(hg: SideInfoHypergraph) -> CompositeAdjacency:
    """Composite adjacency of the full hypergraph.

    Demand and cached positions are 1; a position covered only by
    coupled edges carries the parity of the number of partner senders.
    """
    inst = hg.inst
    stats = derive_stats(inst)
    blocks = []
    for n in range(1, inst.N + 1):
        rows = []
        store = inst.sender_stores[n - 1]
        for k in range(1, inst.K + 1):
            row = 0
            for k2 in range(1, inst.K + 1):
                if k2 == k:
                    bit = 1 if k in store else 0
                elif k2 in inst.side_info[k - 1]:
                    bit = 1 if k2 in store else 0
                elif n in stats.availability[k2 - 1]:
                    bit = (stats.replication[k2 - 1] - 1) & 1
                else:
                    bit = 0
                row |= bit << (k2 - 1)
            rows.append(row)
        blocks.append(tuple(rows))
    return CompositeAdjacency(K=inst.K, N=inst.N, blocks=tuple(blocks))


def _check_choice(choice: SubChoice, inst: Instance) -> None:
    stats = derive_stats(inst)
    if (
        len(choice.demand_senders) != inst.K
        or len(choice.cached_edges) != inst.K
        or len(choice.coupled_senders) != inst.K
    ):
        raise ValueError("choice must carry one entry per receiver")
    for k in range(1, inst.K + 1):
        dsel = choice.demand_senders[k - 1]
        if not dsel <= stats.availability[k - 1]:
            raise ValueError(f"receiver {k}: demand senders {sorted(dsel)} not all store {k}")
        if len(dsel) % 2 != 1:
            raise ValueError(f"receiver {k}: selected demand edge count must be odd")
        for m, n in choice.cached_edges[k - 1]:
            if m not in inst.side_info[k - 1] or n not in stats.availability[m - 1]:
                raise ValueError(f"receiver {k}: ({m},{n}) is not a cached edge")
        for k2, senders in choice.coupled_senders[k - 1]:
            if k2 == k or k2 in inst.side_info[k - 1]:
                raise ValueError(f"receiver {k}: message {k2} admits no coupled edges")
            if not senders or len(senders) % 2 != 0:
                raise ValueError(f"receiver {k}: coupled sender set for {k2} must be even and non-empty")
            if not senders <= stats.availability[k2 - 1]:
                raise ValueError(f"receiver {k}: coupled senders for {k2} must all store {k2}")


def sub_adjacency(choice: SubChoice, inst: Instance) -> CompositeAdjacency:
    """Composite adjacency of the sub-hypergraph selected by `choice`."""
    _check_choice(choice, inst)
    rows = [[0] * inst.K for _ in range(inst.N)]
    for k in range(1, inst.K + 1):
        for n in choice.demand_senders[k - 1]:
            rows[n - 1][k - 1] |= 1 << (k - 1)
        for m, n in choice.cached_edges[k - 1]:
            rows[n - 1][k - 1] |= 1 << (m - 1)
        for k2, senders in choice.coupled_senders[k - 1]:
            for n in senders:
                rows[n - 1][k - 1] |= 1 << (k2 - 1)
    return CompositeAdjacency(
        K=inst.K, N=inst.N, blocks=tuple(tuple(r) for r in rows)
    )


def is_valid_sub(edges: Iterable[HyperEdge], hg: SideInfoHypergraph) -> bool:
    """True iff edges all belong to hg and every receiver's selected
    demand-edge count is odd."""
    chosen = set(edges)
    if not chosen <= hg.all_edges():
        return False
    for k in range(1, hg.inst.K + 1):
        count = sum(1 for e in chosen if e.kind == DEMAND and e.k == k)
        if count % 2 != 1:
            return False
    return True


def fits(A: CompositeAdjacency, hg: SideInfoHypergraph) -> Optional[SubChoice]:
    """Witness selection whose sub-adjacency equals A, or None.

    Classification per row k: a diagonal 1 must be a demand edge, a 1 in
    a side-information column must be a cached edge, and any other 1
    joins the coupled sender set of its column, which must then be an
    even subset of that message's holders.
    """
    inst = hg.inst
    stats = derive_stats(inst)
    if A.K != inst.K or A.N != inst.N or len(A.blocks) != inst.N:
        return None
    demand_sel: List[FrozenSet[int]] = []
    cached_sel: List[FrozenSet[Tuple[int, int]]] = []
    coupled_sel: List[Tuple[Tuple[int, FrozenSet[int]], ...]] = []
    for k in range(1, inst.K + 1):
        dset = set()
        cset = set()
        touched: Dict[int, set] = {}
        for n in range(1, inst.N + 1):
            row = A.blocks[n - 1][k - 1]
            for k2 in range(1, inst.K + 1):
                if not (row >> (k2 - 1)) & 1:
                    continue
                if k2 == k:
                    if n not in stats.availability[k - 1]:
                        return None
                    dset.add(n)
                elif k2 in inst.side_info[k - 1]:
                    if n not in stats.availability[k2 - 1]:
                        return None
                    cset.add((k2, n))
                else:
                    if n not in stats.availability[k2 - 1]:
                        return None
                    touched.setdefault(k2, set()).add(n)
        if len(dset) % 2 != 1:
            return None
        for senders in touched.values():
            if len(senders) % 2 != 0:
                return None
        demand_sel.append(frozenset(dset))
        cached_sel.append(frozenset(cset))
        coupled_sel.append(
            tuple((k2, frozenset(t)) for k2, t in sorted(touched.items()))
        )
    return SubChoice(
        demand_senders=tuple(demand_sel),
        cached_edges=tuple(cached_sel),
        coupled_senders=tuple(coupled_sel),
    )


def complement(hg: SideInfoHypergraph) -> SideInfoHypergraph:
    """Complement hypergraph: marks pairs a sender serves in no way.

    Demand edges are copied.  For k != k2, the edge (k, k2, n, n) exists
    iff no edge of hg serves the pair through sender n: not cached at n,
    and no coupled edge for (k, k2) touches n.  Exclusions win whenever
    the two readings collide.  The result has no coupled edges.
    """
    inst = hg.inst
    blocked: Dict[Tuple[int, int], set] = {}
    for e in hg.cached:
        blocked.setdefault((e.k, e.k2), set()).add(e.n)
    for e in hg.coupled:
        blocked.setdefault((e.k, e.k2), set()).update((e.n, e.n2))
    off_diag = set()
    for k in range(1, inst.K + 1):
        for k2 in range(1, inst.K + 1):
            if k2 == k:
                continue
            taken = blocked.get((k, k2), set())
            for n in range(1, inst.N + 1):
                if n not in taken:
                    off_diag.add(HyperEdge(k, k2, n, n, CACHED))
    return SideInfoHypergraph(
        inst=inst,
        demand=hg.demand,
        cached=frozenset(off_diag),
        coupled=frozenset(),
    )


def sender_projection_pairs(hg: SideInfoHypergraph) -> Tuple[FrozenSet[Tuple[int, int]], ...]:
    """Per sender n, the directed pairs (k, k2) of same-sender edges (n, n)."""
    pairs: List[set] = [set() for _ in range(hg.inst.N)]
    for e in hg.demand | hg.cached:
        if e.n == e.n2:
            pairs[e.n - 1].add((e.k, e.k2))
    return tuple(frozenset(p) for p in pairs)


def choice_sort_key(choice: SubChoice, inst: Instance) -> Tuple[int, ...]:
    """Flat integer key realizing the canonical order on selections.

    Per receiver: demand mask over sorted holders, cached mask over the
    (message, sender)-sorted cached edge list, then one mask per
    coupled-eligible message in ascending order.  Receiver 1 is most
    significant.
    """
    stats = derive_stats(inst)
    key: List[int] = []
    for k in range(1, inst.K + 1):
        holders = sorted(stats.availability[k - 1])
        dmask = 0
        for i, n in enumerate(holders):
            if n in choice.demand_senders[k - 1]:
                dmask |= 1 << i
        key.append(dmask)
        edge_list = [
            (m, n)
            for m in sorted(inst.side_info[k - 1])
            for n in sorted(stats.availability[m - 1])
        ]
        cmask = 0
        for i, edge in enumerate(edge_list):
            if edge in choice.cached_edges[k - 1]:
                cmask |= 1 << i
        key.append(cmask)
        chosen = dict(choice.coupled_senders[k - 1])
        for k2 in range(1, inst.K + 1):
            if k2 == k or k2 in inst.side_info[k - 1]:
                continue
            senders = chosen.get(k2, frozenset())
            mask = 0
            for i, n in enumerate(sorted(stats.availability[k2 - 1])):
                if n in senders:
                    mask |= 1 << i
            key.append(mask)
    return tuple(key)
