"""The four EF1 allocation algorithms: round-robin, envy-graph cycle
elimination, exact maximum Nash welfare, and the Fisher-market EF1+PO local
search (re-exported from `market`).

All solvers are deterministic given (instance, config).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import Allocation, CapacityError, Instance, observed_matrix, own_utilities

DEFAULT_MNW_NODE_BUDGET = 200_000_000


@dataclass(frozen=True)
class SolverConfig:
    """Shared solver knobs.

    agent_order: round-robin pick order (and the agent tie-break order);
    good_order: the envy-graph processing order; both default to identity.
    """

    agent_order: tuple[int, ...] | None = None
    good_order: tuple[int, ...] | None = None
    rng_seed: int = 0
    mnw_node_budget: int = DEFAULT_MNW_NODE_BUDGET

    def agents(self, inst: Instance) -> list[int]:
        order = self.agent_order
        if order is None:
            return list(range(inst.num_agents))
        if sorted(order) != list(range(inst.num_agents)):
            raise ValueError(f"agent_order must be a permutation of 0..{inst.num_agents - 1}")
        return list(order)

    def goods(self, inst: Instance) -> list[int]:
        order = self.good_order
        if order is None:
            return list(range(inst.num_goods))
        if sorted(order) != list(range(inst.num_goods)):
            raise ValueError(f"good_order must be a permutation of 0..{inst.num_goods - 1}")
        return list(order)

    @classmethod
    def randomized(cls, inst: Instance, seed: int) -> "SolverConfig":
        """Random agent/good permutations drawn from the given seed."""
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        return cls(
            agent_order=tuple(int(a) for a in rng.permutation(inst.num_agents)),
            good_order=tuple(int(g) for g in rng.permutation(inst.num_goods)),
            rng_seed=seed,
        )


DEFAULT_CONFIG = SolverConfig()


def round_robin(inst: Instance, config: SolverConfig = DEFAULT_CONFIG) -> Allocation:
    """Agents pick in cyclic order; each takes a most-valued remaining good.

    Ties go to the lowest good index. Output is EF1 and sEF1.
    """
    sigma = config.agents(inst)
    vals = inst.valuations
    remaining = sorted(range(inst.num_goods))
    bundles: list[list[int]] = [[] for _ in range(inst.num_agents)]
    turn = 0
    while remaining:
        agent = sigma[turn % len(sigma)]
        pick = max(remaining, key=lambda g: (vals[agent, g], -g))
        bundles[agent].append(pick)
        remaining.remove(pick)
        turn += 1
    return Allocation(tuple(tuple(b) for b in bundles))


def _first_envy_cycle(envies: np.ndarray) -> list[int]:
    """First directed cycle found by DFS over agents in index order.

    envies[i, h] is True when i envies h. Caller guarantees a cycle exists
    (every agent envied implies one).
    """
    n = envies.shape[0]
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    parent = [-1] * n
    for start in range(n):
        if color[start] != 0:
            continue
        stack = [(start, 0)]
        color[start] = 1
        while stack:
            node, nxt = stack.pop()
            advanced = False
            for h in range(nxt, n):
                if not envies[node, h]:
                    continue
                if color[h] == 1:
                    cycle = [h]
                    cur = node
                    while cur != h:
                        cycle.append(cur)
                        cur = parent[cur]
                    cycle.reverse()
                    return cycle
                if color[h] == 0:
                    stack.append((node, h + 1))
                    parent[h] = node
                    color[h] = 1
                    stack.append((h, 0))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
    raise AssertionError("unreachable: no cycle in a source-free envy graph")


def envy_graph(inst: Instance, config: SolverConfig = DEFAULT_CONFIG) -> Allocation:
    """Envy-cycle elimination: give each good to an unenvied agent.

    While nobody is unenvied, rotate bundles along an envy cycle (each agent
    takes its successor's bundle, strictly gaining utility). After the last
    good, cycles are resolved once more so the output always has an unenvied
    agent. Output is EF1 and sEF1.
    """
    n = inst.num_agents
    vals = inst.valuations
    bundles: list[list[int]] = [[] for _ in range(n)]

    def envy_matrix() -> np.ndarray:
        util = np.array([int(vals[i, b].sum()) if b else 0 for i, b in enumerate(bundles)])
        obs = np.zeros((n, n), dtype=np.int64)
        for h, b in enumerate(bundles):
            if b:
                obs[:, h] = vals[:, b].sum(axis=1)
        env = obs > util[:, None]
        np.fill_diagonal(env, False)
        return env

    def resolve_until_source() -> None:
        while True:
            env = envy_matrix()
            unenvied = [h for h in range(n) if not env[:, h].any()]
            if unenvied:
                return
            cycle = _first_envy_cycle(env)
            rotated = [bundles[cycle[(idx + 1) % len(cycle)]] for idx in range(len(cycle))]
            for idx, agent in enumerate(cycle):
                bundles[agent] = rotated[idx]

    for g in config.goods(inst):
        resolve_until_source()
        env = envy_matrix()
        target = min(h for h in range(n) if not env[:, h].any())
        bundles[target].append(g)
    resolve_until_source()
    return Allocation(tuple(tuple(b) for b in bundles))


def mnw(inst: Instance, config: SolverConfig = DEFAULT_CONFIG) -> Allocation:
    """Exact Nash-optimal allocation (branch and bound).

    Convention: maximize the number of agents with positive utility, then the
    product of those utilities, then take the lexicographically smallest
    assignment vector. Output is EF1 and PO.
    """
    owner, nodes = kernels.mnw_assign(inst.valuations, config.mnw_node_budget)
    if owner is None:
        raise CapacityError(f"MNW search exceeded node budget {config.mnw_node_budget}")
    return Allocation.from_owner_vector(owner, inst.num_agents)


def nash_value(inst: Instance, alloc: Allocation) -> tuple[int, int]:
    """(count of positive utilities, product over those agents); empty product 1."""
    utils = own_utilities(inst, alloc)
    positive = [int(u) for u in utils if u > 0]
    prod = 1
    for u in positive:
        prod *= u
    return len(positive), prod


def brute_force_mnw(inst: Instance) -> Allocation:
    """Reference Nash optimum by full enumeration (same convention as `mnw`).

    Test oracle; walks all n^m assignment vectors in lexicographic order and
    keeps the first strict maximum, which is exactly the lex-min tie-break.
    """
    from itertools import product

    n, m = inst.num_agents, inst.num_goods
    best: tuple[int, int] | None = None
    best_owner: tuple[int, ...] | None = None
    vals = inst.valuations
    for owner in product(range(n), repeat=m):
        utils = [0] * n
        for g, a in enumerate(owner):
            utils[a] += int(vals[a, g])
        cp = sum(1 for u in utils if u > 0)
        prod = 1
        for u in utils:
            if u > 0:
                prod *= u
        if best is None or (cp, prod) > best:
            best = (cp, prod)
            best_owner = owner
    return Allocation.from_owner_vector(best_owner, n)


from .market import ef1_po_market, MarketState  # noqa: E402  (re-export)

ALGORITHMS = {
    "round-robin": round_robin,
    "envy-graph": envy_graph,
    "mnw": mnw,
    "ef1-po": ef1_po_market,
}
