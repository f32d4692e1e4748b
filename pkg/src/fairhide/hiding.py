"""Residual-envy machinery: greedy hiding, exact minimum hidden sets, kappa-opt.

kappa(A, I) is the fewest goods whose withholding makes allocation A envy-free;
kappa_opt(I) minimizes that over all allocations. Hiding goods of bundle h only
lowers what others observe of h, so both the residual envy and the exact
minimum decompose per bundle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .core import (
    Allocation,
    CapacityError,
    HiddenSet,
    Instance,
    envy_report,
    observed_matrix,
    own_utilities,
)


class SearchBoundExceeded(Exception):
    """Exact search proved the answer exceeds the caller-supplied bound.

    Not a failure mode: carries the bound that was exhausted.
    """

    def __init__(self, bound: int, message: str | None = None):
        self.bound = bound
        super().__init__(message or f"no certificate within bound {bound}")


@dataclass(frozen=True)
class HidingResult:
    """A hidden set with its residual envy and provenance."""

    hidden: HiddenSet
    residual: int
    optimal: bool
    steps: int

    @property
    def size(self) -> int:
        return len(self.hidden)


class ResidualEnvyOracle:
    """Evaluator of the residual envy f for one fixed (instance, allocation).

    Immutable after construction; all evaluation state is local to each call,
    so oracles are safe to share across threads.
    """

    def __init__(self, inst: Instance, alloc: Allocation):
        alloc.validate(inst)
        self.instance = inst
        self.allocation = alloc
        self.owner = alloc.owner_vector(inst.num_goods)
        self.owner.setflags(write=False)
        self.own = own_utilities(inst, alloc)
        self.own.setflags(write=False)
        self.observed = observed_matrix(inst, alloc)  # obs[i, h] with nothing hidden
        self.observed.setflags(write=False)
        self.initial_envy = self._aggregate(self.observed)  # E = f(empty set)

    def _aggregate(self, obs: np.ndarray) -> int:
        pair = np.maximum(obs - self.own[:, None], 0)
        np.fill_diagonal(pair, 0)
        return int(pair.sum())

    def f(self, hidden: Iterable[int]) -> int:
        """Residual envy after hiding the given goods."""
        obs = self.observed.copy()
        for g in set(hidden):
            h = int(self.owner[g])
            obs[:, h] -= self.instance.valuations[:, g]
        return self._aggregate(obs)

    def bundle_requirements(self, h: int) -> tuple[list[int], list[int], list[int]]:
        """Bundle h's goods, its enviers, and each envier's deficit."""
        goods = list(self.allocation.bundles[h])
        enviers = [
            i
            for i in range(self.instance.num_agents)
            if i != h and self.observed[i, h] > self.own[i]
        ]
        deficits = [int(self.observed[i, h] - self.own[i]) for i in enviers]
        return goods, enviers, deficits


def greedy_hide(oracle: ResidualEnvyOracle) -> HidingResult:
    """Greedy supermodular minimization of the residual envy.

    Repeatedly hides the good with the largest envy reduction (ties to the
    lowest good index) until f reaches 0. The returned set has size at most
    kappa(A, I) * ln(E) + 1, and at most m since every step makes progress.
    """
    inst = oracle.instance
    m = inst.num_goods
    vals = inst.valuations
    own = oracle.own
    obs = oracle.observed.copy()
    hidden: list[int] = []
    in_s = np.zeros(m, dtype=bool)

    def marginal(j: int) -> int:
        h = int(oracle.owner[j])
        before = np.maximum(obs[:, h] - own, 0)
        after = np.maximum(obs[:, h] - vals[:, j] - own, 0)
        before[h] = 0
        after[h] = 0
        return int((before - after).sum())

    while oracle._aggregate(obs) >= 1:
        best_gain, best_good = 0, -1
        for j in range(m):
            if in_s[j]:
                continue
            gain = marginal(j)
            if gain > best_gain:  # strict: ties keep the lowest index
                best_gain, best_good = gain, j
        # f >= 1 guarantees some envied bundle holds a positively-valued good
        h = int(oracle.owner[best_good])
        obs[:, h] -= vals[:, best_good]
        in_s[best_good] = True
        hidden.append(best_good)
    hs = HiddenSet(frozenset(hidden))
    return HidingResult(hidden=hs, residual=0, optimal=len(hs) == 0, steps=len(hidden))


def exact_min_hide(oracle: ResidualEnvyOracle, max_k: int | None = None) -> HidingResult:
    """Smallest hidden set certifying HEF for the oracle's allocation.

    Decomposes per bundle (hiding in bundle h only affects envy toward h) and
    returns the lexicographically smallest witness of minimum size: the union
    of per-bundle lex-min covers. Raises SearchBoundExceeded if `max_k` is
    given and the minimum exceeds it.
    """
    inst = oracle.instance
    chosen: list[int] = []
    steps = 0
    for h in range(inst.num_agents):
        goods, enviers, deficits = oracle.bundle_requirements(h)
        if not enviers:
            continue
        env_vals = inst.valuations[np.ix_(enviers, goods)]
        size, mask = kernels.min_cover(env_vals, deficits)
        steps += 1
        for pos in range(len(goods)):
            if mask >> pos & 1:
                chosen.append(goods[pos])
        if max_k is not None and len(chosen) > max_k:
            raise SearchBoundExceeded(max_k)
    return HidingResult(
        hidden=HiddenSet(frozenset(chosen)), residual=0, optimal=True, steps=steps
    )


def kappa(inst: Instance, alloc: Allocation) -> int:
    """kappa(A, I): minimum number of goods to hide under allocation A."""
    return exact_min_hide(ResidualEnvyOracle(inst, alloc)).size


DEFAULT_NODE_BUDGET = 50_000_000


def optimal_kappa(
    inst: Instance,
    max_k: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[int, Allocation, HiddenSet]:
    """kappa_opt(I) with a witness allocation and hidden set.

    Deepens k = 0, 1, ... running a branch-and-bound existence search per
    level; k = n-1 always succeeds (uniform hiding bound), so the loop is
    finite. Raises CapacityError (carrying the best proven lower bound) when
    the node budget runs out, or SearchBoundExceeded when `max_k` is hit.
    """
    n, m = inst.num_agents, inst.num_goods
    hard_cap = min(n - 1, m)
    cap = hard_cap if max_k is None else min(max_k, hard_cap)
    budget_left = node_budget
    for k in range(cap + 1):
        status, owner, nodes = kernels.hefk_exists(inst.valuations, k, budget_left)
        budget_left -= nodes
        if status == 1:
            alloc = Allocation.from_owner_vector(owner, n)
            witness = exact_min_hide(ResidualEnvyOracle(inst, alloc))
            return k, alloc, witness.hidden
        if status == -1:
            raise CapacityError(
                f"optimal_kappa exhausted node budget {node_budget}; proven kappa_opt >= {k}"
            )
    if max_k is not None and max_k < hard_cap:
        raise SearchBoundExceeded(max_k)
    raise AssertionError("unreachable: a uHEF(n-1) allocation always exists")


def regret(inst: Instance, alloc: Allocation, kappa_opt: int) -> tuple[int, Fraction]:
    """(kappa(A,I) - kappa_opt, same normalized by n-1).

    Single-agent instances have no envy; normalized regret is 0 by convention.
    """
    r = kappa(inst, alloc) - kappa_opt
    if inst.num_agents == 1:
        return r, Fraction(0)
    return r, Fraction(r, inst.num_agents - 1)


def residual_envy(inst: Instance, alloc: Allocation, hidden: HiddenSet) -> int:
    """f(S) evaluated from the definition."""
    return envy_report(inst, alloc, hidden).aggregate
