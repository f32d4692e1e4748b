"""Constructive gadget generators for the three hardness reductions.

Each generator turns a source-problem input (Partition, Hitting Set, Equitable
Coloring) into a fair-division instance whose HEF/EF certificates correspond
to source-problem solutions. Gadgets double as adversarial test-instance
factories; manifests map gadget agents/goods back to source elements so
witnesses can be extracted in both directions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .core import Allocation, HiddenSet, Instance


# ---------------------------------------------------------------------------
# Partition -> HEF-k existence (identical valuations)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionInput:
    """Multiset of positive integers and the hidden-goods budget k."""

    values: tuple[int, ...]
    k: int

    def __post_init__(self):
        if not self.values:
            raise ValueError("values must be non-empty")
        if any(int(x) <= 0 for x in self.values):
            raise ValueError("partition values must be positive")
        if self.k < 0:
            raise ValueError("k must be non-negative")
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))

    @property
    def half_sum(self) -> int:
        """T; odd totals round up, making the gadget a guaranteed no-instance."""
        return (sum(self.values) + 1) // 2


@dataclass(frozen=True)
class PartitionManifest:
    source: PartitionInput
    main_goods: tuple[int, ...]   # good index of each x_i
    extra_good: int               # the T-valued good
    dummy_goods: tuple[int, ...]  # the 4T-valued goods


def partition_gadget(inp: PartitionInput) -> tuple[Instance, PartitionManifest]:
    """k+3 identical agents; goods x_1..x_n, one good at T, k dummies at 4T."""
    n = len(inp.values)
    t = inp.half_sum
    row = list(inp.values) + [t] + [4 * t] * inp.k
    inst = Instance.from_rows([row] * (inp.k + 3))
    manifest = PartitionManifest(
        source=inp,
        main_goods=tuple(range(n)),
        extra_good=n,
        dummy_goods=tuple(range(n + 1, n + 1 + inp.k)),
    )
    return inst, manifest


def partition_witness(manifest: PartitionManifest, subset: set[int]) -> tuple[Allocation, HiddenSet]:
    """HEF-k certificate from a Partition solution Y (indices into values).

    Y's goods to agent 0, the rest of the mains to agent 1, the T good to
    agent 2, one dummy each to the remaining agents; hide all dummies.
    """
    inp = manifest.source
    bundles: list[list[int]] = [[] for _ in range(inp.k + 3)]
    for i, g in enumerate(manifest.main_goods):
        bundles[0 if i in subset else 1].append(g)
    bundles[2].append(manifest.extra_good)
    for idx, g in enumerate(manifest.dummy_goods):
        bundles[3 + idx].append(g)
    return (
        Allocation(tuple(tuple(b) for b in bundles)),
        HiddenSet(frozenset(manifest.dummy_goods)),
    )


def solve_partition(values: tuple[int, ...]) -> set[int] | None:
    """Brute-force Partition: indices summing to half the total, else None."""
    total = sum(values)
    if total % 2:
        return None
    target = total // 2
    idx = range(len(values))
    for r in range(len(values) + 1):
        for combo in combinations(idx, r):
            if sum(values[i] for i in combo) == target:
                return set(combo)
    return None


# ---------------------------------------------------------------------------
# Hitting Set -> HEF-k verification (binary valuations)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HittingSetInput:
    """Universe {1..p}, non-empty families over it, and the budget k."""

    universe_size: int
    families: tuple[tuple[int, ...], ...]
    k: int

    def __post_init__(self):
        fams = tuple(tuple(sorted(set(int(x) for x in f))) for f in self.families)
        object.__setattr__(self, "families", fams)
        if self.universe_size < 1:
            raise ValueError("universe must be non-empty")
        for f in fams:
            if not f:
                raise ValueError("families must be non-empty")
            if any(not 1 <= x <= self.universe_size for x in f):
                raise ValueError(f"family {f} leaves the universe [1, {self.universe_size}]")
        if self.k < 0:
            raise ValueError("k must be non-negative")


@dataclass(frozen=True)
class HittingSetManifest:
    source: HittingSetInput
    main_goods: tuple[int, ...]                 # good index of each universe element
    family_dummy_goods: tuple[tuple[int, ...], ...]  # per family, its |F_i|-1 goods
    main_agent: int


def hitting_set_gadget(inp: HittingSetInput) -> tuple[Instance, Allocation, HittingSetManifest]:
    """q dummy agents + 1 main agent; the main agent holds all main goods.

    Each dummy agent approves its own |F_i|-1 filler goods plus the main goods
    of its family, so it envies the main agent by exactly one unit: the input
    allocation's aggregate envy is q.
    """
    p, q = inp.universe_size, len(inp.families)
    main_goods = tuple(range(p))
    family_goods: list[tuple[int, ...]] = []
    next_good = p
    for f in inp.families:
        cnt = len(f) - 1
        family_goods.append(tuple(range(next_good, next_good + cnt)))
        next_good += cnt
    m = next_good
    vals = np.zeros((q + 1, m), dtype=np.int64)
    vals[q, :p] = 1  # main agent approves the main goods
    for i, f in enumerate(inp.families):
        for x in f:
            vals[i, x - 1] = 1
        for g in family_goods[i]:
            vals[i, g] = 1
    inst = Instance(vals)
    bundles = [list(family_goods[i]) for i in range(q)] + [list(main_goods)]
    alloc = Allocation(tuple(tuple(b) for b in bundles))
    manifest = HittingSetManifest(
        source=inp,
        main_goods=main_goods,
        family_dummy_goods=tuple(family_goods),
        main_agent=q,
    )
    return inst, alloc, manifest


def hitting_set_from_hidden(manifest: HittingSetManifest, hidden: HiddenSet) -> set[int]:
    """Y = {x_j : g_j hidden}: the hitting set extracted from a certificate."""
    return {g + 1 for g in hidden.goods if g in set(manifest.main_goods)}


def solve_hitting_set(universe_size: int, families, k: int) -> set[int] | None:
    """Brute-force smallest hitting set of size <= k, else None."""
    elements = range(1, universe_size + 1)
    for r in range(0, k + 1):
        for combo in combinations(elements, r):
            chosen = set(combo)
            if all(chosen & set(f) for f in families):
                return chosen
    return None


# ---------------------------------------------------------------------------
# Equitable Coloring -> EF existence (binary valuations)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..num_vertices-1."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_connected(self) -> bool:
        if self.num_vertices <= 1:
            return True
        adj: dict[int, list[int]] = {v: [] for v in range(self.num_vertices)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices


@dataclass(frozen=True)
class ColoringInput:
    graph: Graph
    colors: int

    def __post_init__(self):
        if self.colors < 3:
            raise ValueError("the construction assumes at least 3 colors")


@dataclass(frozen=True)
class ColoringManifest:
    source: ColoringInput
    work_graph: Graph            # after augmentation
    work_colors: int             # l after augmentation (connectivity bumps it)
    vertex_goods: tuple[int, ...]   # good index per work-graph vertex
    edge_goods: tuple[int, ...]     # good index per work-graph edge
    edge_agents: tuple[int, ...]    # agent index per work-graph edge
    dummy_agents: tuple[int, ...]
    added_vertices: tuple[int, ...]
    added_edges: tuple[tuple[int, int], ...]


def _augment_connectivity(g: Graph, colors: int) -> tuple[Graph, int, list[int], list[tuple[int, int]]]:
    """Footnote gadget: l-clique plus apex vertices joined to the clique and
    everything else; raises the color count to l+1. Equitable l-colorability
    of the original equals equitable (l+1)-colorability of the result."""
    n, l = g.num_vertices, colors
    xs = list(range(n, n + l))
    ys = list(range(n + l, n + l + n // l + 1))
    new_edges = list(g.edges)
    new_edges += [(a, b) for a, b in combinations(xs, 2)]
    for y in ys:
        new_edges += [(x, y) for x in xs]
        new_edges += [(v, y) for v in range(n)]
    g2 = Graph(n + len(xs) + len(ys), tuple(new_edges))
    return g2, l + 1, xs + ys, [e for e in g2.edges if e not in set(g.edges)]


def _augment_degree(g: Graph, colors: int) -> tuple[Graph, list[int], list[tuple[int, int]]]:
    """Footnote gadget: every vertex of degree <= 1 gets a pendant l-clique,
    joined to all clique members except the first and last."""
    added_v: list[int] = []
    added_e: list[tuple[int, int]] = []
    while True:
        deg = g.degrees()
        low = [v for v in range(g.num_vertices) if deg[v] <= 1]
        if not low:
            return g, added_v, added_e
        n = g.num_vertices
        edges = list(g.edges)
        for v in low:
            clique = list(range(n, n + colors))
            n += colors
            added_v += clique
            fresh = [(a, b) for a, b in combinations(clique, 2)]
            fresh += [(v, w) for w in clique[1:-1]]
            edges += fresh
            added_e += fresh
        g = Graph(n, tuple(edges))


def coloring_gadget(inp: ColoringInput) -> tuple[Instance, ColoringManifest]:
    """Edge agents approve every edge good plus their two endpoints' vertex
    goods; dummy agents approve every vertex good. EF allocations of the
    gadget correspond to equitable colorings of the (augmented) graph."""
    g, l = inp.graph, inp.colors
    added_v: list[int] = []
    added_e: list[tuple[int, int]] = []
    if not g.is_connected():
        g, l, av, ae = _augment_connectivity(g, l)
        added_v += av
        added_e += ae
    g, av, ae = _augment_degree(g, l)
    added_v += av
    added_e += ae

    nv, edges = g.num_vertices, g.edges
    me = len(edges)
    num_agents = me + l
    num_goods = nv + me
    vals = np.zeros((num_agents, num_goods), dtype=np.int64)
    # goods: vertex goods first (0..nv-1), then edge goods
    for idx, (u, v) in enumerate(edges):
        vals[idx, u] = 1
        vals[idx, v] = 1
        vals[idx, nv:] = 1
    for d in range(l):
        vals[me + d, :nv] = 1
    inst = Instance(vals)
    manifest = ColoringManifest(
        source=inp,
        work_graph=g,
        work_colors=l,
        vertex_goods=tuple(range(nv)),
        edge_goods=tuple(range(nv, nv + me)),
        edge_agents=tuple(range(me)),
        dummy_agents=tuple(range(me, me + l)),
        added_vertices=tuple(added_v),
        added_edges=tuple(added_e),
    )
    return inst, manifest


def coloring_witness(manifest: ColoringManifest, coloring: list[int]) -> Allocation:
    """EF allocation from an equitable coloring of the work graph: each edge
    good to its edge agent, each vertex good to the dummy of its color."""
    me = len(manifest.edge_goods)
    l = manifest.work_colors
    bundles: list[list[int]] = [[] for _ in range(me + l)]
    for idx, g in enumerate(manifest.edge_goods):
        bundles[idx].append(g)
    for v, c in enumerate(coloring):
        bundles[me + c].append(manifest.vertex_goods[v])
    return Allocation(tuple(tuple(b) for b in bundles))


def coloring_from_allocation(manifest: ColoringManifest, alloc: Allocation) -> list[int] | None:
    """Extract a coloring (vertex -> dummy index) if all vertex goods sit with
    dummy agents; None otherwise."""
    me = len(manifest.edge_goods)
    coloring = [-1] * len(manifest.vertex_goods)
    for d in range(manifest.work_colors):
        for good in alloc.bundles[me + d]:
            if good < len(manifest.vertex_goods):
                coloring[good] = d
    return coloring if all(c >= 0 for c in coloring) else None


def solve_equitable_coloring(g: Graph, colors: int) -> list[int] | None:
    """Brute-force equitable proper coloring (equal class sizes), else None."""
    n = g.num_vertices
    if n % colors != 0:
        return None
    size = n // colors
    for assign in product(range(colors), repeat=n):
        counts = [0] * colors
        for c in assign:
            counts[c] += 1
        if any(c != size for c in counts):
            continue
        if all(assign[u] != assign[v] for u, v in g.edges):
            return list(assign)
    return None
