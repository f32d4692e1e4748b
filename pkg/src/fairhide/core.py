"""Instance/allocation data model, envy computation, and fairness predicates.

Agents and goods are 0-indexed everywhere. Valuations are additive with
non-negative integer entries; an agent's value for a bundle is the sum of its
entries over the bundle, and the empty bundle is worth 0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class StructureError(ValueError):
    """Malformed instance/allocation input (bad shapes, overlap, bad index)."""


class CapacityError(RuntimeError):
    """A bounded search exceeded its state guard or node budget."""


@dataclass(frozen=True)
class Instance:
    """n agents, m goods, and an (n, m) matrix of non-negative integer values."""

    valuations: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.valuations, dtype=np.int64)
        if vals.ndim != 2:
            raise StructureError(f"valuations must be 2-D, got shape {vals.shape}")
        if vals.shape[0] < 1:
            raise StructureError("at least one agent required")
        if (vals < 0).any():
            raise StructureError("valuations must be non-negative integers")
        vals.setflags(write=False)
        object.__setattr__(self, "valuations", vals)

    @property
    def num_agents(self) -> int:
        return self.valuations.shape[0]

    @property
    def num_goods(self) -> int:
        return self.valuations.shape[1]

    @property
    def is_binary(self) -> bool:
        return bool((self.valuations <= 1).all())

    @property
    def is_identical(self) -> bool:
        return bool((self.valuations == self.valuations[0]).all())

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Instance":
        arr = np.array(rows, dtype=object)
        try:
            arr = np.array([list(r) for r in rows], dtype=np.int64)
        except (ValueError, TypeError, OverflowError) as exc:
            raise StructureError(f"ragged or non-integer valuation rows: {exc}") from None
        return cls(arr)

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        """Parse the strict instance file format {"n":..,"m":..,"valuations":[[..]]}."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructureError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict) or not {"n", "m", "valuations"} <= set(data):
            raise StructureError('instance JSON needs keys "n", "m", "valuations"')
        n, m, rows = data["n"], data["m"], data["valuations"]
        if not isinstance(rows, list) or len(rows) != n:
            raise StructureError(f"expected {n} valuation rows, got {len(rows) if isinstance(rows, list) else type(rows)}")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != m:
                raise StructureError(f"row {i} must have exactly {m} entries")
        inst = cls.from_rows(rows)
        if inst.num_goods != m:
            raise StructureError("valuation row length disagrees with m")
        return inst

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.num_agents, "m": self.num_goods, "valuations": self.valuations.tolist()}
        )

    def value(self, agent: int, goods: Iterable[int]) -> int:
        """Additive value of a good set for one agent."""
        return bundle_value(self, agent, goods)


@dataclass(frozen=True)
class Allocation:
    """Complete partition of the goods into one bundle per agent (may be empty)."""

    bundles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "bundles", tuple(tuple(sorted(int(g) for g in b)) for b in self.bundles)
        )

    @property
    def num_agents(self) -> int:
        return len(self.bundles)

    @property
    def num_goods(self) -> int:
        return sum(len(b) for b in self.bundles)

    def validate(self, inst: Instance) -> None:
        if len(self.bundles) != inst.num_agents:
            raise StructureError(
                f"allocation has {len(self.bundles)} bundles for {inst.num_agents} agents"
            )
        seen: set[int] = set()
        for b in self.bundles:
            for g in b:
                if not 0 <= g < inst.num_goods:
                    raise StructureError(f"good index {g} out of range [0, {inst.num_goods})")
                if g in seen:
                    raise StructureError(f"good {g} assigned to more than one bundle")
                seen.add(g)
        if len(seen) != inst.num_goods:
            missing = sorted(set(range(inst.num_goods)) - seen)
            raise StructureError(f"allocation is not a complete partition; missing goods {missing}")

    def owner_vector(self, num_goods: int) -> np.ndarray:
        owner = np.full(num_goods, -1, dtype=np.int64)
        for h, b in enumerate(self.bundles):
            for g in b:
                owner[g] = h
        return owner

    @classmethod
    def from_owner_vector(cls, owner: Sequence[int], num_agents: int) -> "Allocation":
        bundles: list[list[int]] = [[] for _ in range(num_agents)]
        for g, a in enumerate(owner):
            bundles[int(a)].append(g)
        return cls(tuple(tuple(b) for b in bundles))

    @classmethod
    def from_json(cls, text: str) -> "Allocation":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructureError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict) or "bundles" not in data:
            raise StructureError('allocation JSON needs key "bundles"')
        bundles = data["bundles"]
        if not isinstance(bundles, list) or not all(isinstance(b, list) for b in bundles):
            raise StructureError('"bundles" must be a list of lists of good indices')
        return cls(tuple(tuple(b) for b in bundles))

    def to_json(self) -> str:
        return json.dumps({"bundles": [list(b) for b in self.bundles]})


@dataclass(frozen=True)
class HiddenSet:
    """Set of withheld goods; owners still see their own hidden goods."""

    goods: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "goods", frozenset(int(g) for g in self.goods))

    def validate(self, inst: Instance) -> None:
        for g in self.goods:
            if not 0 <= g < inst.num_goods:
                raise StructureError(f"hidden good {g} out of range [0, {inst.num_goods})")

    def is_uniform_for(self, alloc: Allocation) -> bool:
        """At most one hidden good per bundle."""
        return all(len(self.goods.intersection(b)) <= 1 for b in alloc.bundles)

    def __len__(self) -> int:
        return len(self.goods)

    def sorted(self) -> list[int]:
        return sorted(self.goods)


EMPTY_HIDDEN = HiddenSet(frozenset())


@dataclass(frozen=True)
class EnvyReport:
    """Pairwise residual envy and its aggregate.

    pairwise[i, h] = max(0, v_i(A_h \\ S) - v_i(A_i)); aggregate is the sum of
    all off-diagonal entries (the paper-level E when S is empty, f(S) otherwise).
    """

    pairwise: np.ndarray
    aggregate: int


def bundle_value(inst: Instance, agent: int, goods: Iterable[int]) -> int:
    """Sum of one agent's valuations over a good set."""
    if not 0 <= agent < inst.num_agents:
        raise IndexError(f"agent {agent} out of range [0, {inst.num_agents})")
    idx = [int(g) for g in goods]
    for g in idx:
        if not 0 <= g < inst.num_goods:
            raise IndexError(f"good {g} out of range [0, {inst.num_goods})")
    if not idx:
        return 0
    return int(inst.valuations[agent, idx].sum())


def _bundle_indicator(inst: Instance, alloc: Allocation) -> np.ndarray:
    ind = np.zeros((inst.num_agents, inst.num_goods), dtype=np.int64)
    for h, b in enumerate(alloc.bundles):
        if b:
            ind[h, list(b)] = 1
    return ind


def observed_matrix(inst: Instance, alloc: Allocation, hidden: HiddenSet = EMPTY_HIDDEN) -> np.ndarray:
    """obs[i, h] = v_i(A_h \\ S): what agent i sees of agent h's bundle."""
    vis = inst.valuations.copy()
    if hidden.goods:
        vis[:, list(hidden.goods)] = 0
    return vis @ _bundle_indicator(inst, alloc).T


def own_utilities(inst: Instance, alloc: Allocation) -> np.ndarray:
    """u[i] = v_i(A_i), hidden goods included (owners see their own)."""
    return np.array([bundle_value(inst, i, b) for i, b in enumerate(alloc.bundles)], dtype=np.int64)


def envy_report(inst: Instance, alloc: Allocation, hidden: HiddenSet = EMPTY_HIDDEN) -> EnvyReport:
    """Pairwise envy after hiding `hidden`; aggregate is E (empty S) or f(S)."""
    alloc.validate(inst)
    hidden.validate(inst)
    obs = observed_matrix(inst, alloc, hidden)
    own = own_utilities(inst, alloc)
    pairwise = np.maximum(obs - own[:, None], 0)
    np.fill_diagonal(pairwise, 0)
    pairwise.setflags(write=False)
    return EnvyReport(pairwise=pairwise, aggregate=int(pairwise.sum()))


def is_hef(inst: Instance, alloc: Allocation, hidden: HiddenSet) -> bool:
    """Envy-free once the hidden goods are withheld from observers."""
    return envy_report(inst, alloc, hidden).aggregate == 0


def is_ef(inst: Instance, alloc: Allocation) -> bool:
    return is_hef(inst, alloc, EMPTY_HIDDEN)


def is_ef1(inst: Instance, alloc: Allocation) -> bool:
    """Per envied pair, some single good of the envied bundle kills the envy."""
    alloc.validate(inst)
    obs = observed_matrix(inst, alloc)
    own = own_utilities(inst, alloc)
    vals = inst.valuations
    for h, b in enumerate(alloc.bundles):
        if not b:
            continue  # empty bundles are never envied
        best_drop = vals[:, list(b)].max(axis=1)
        if ((obs[:, h] - best_drop) > own).any():
            return False
    return True


def is_sef1(inst: Instance, alloc: Allocation) -> bool:
    """One good per bundle whose removal pacifies every observer at once."""
    alloc.validate(inst)
    obs = observed_matrix(inst, alloc)
    own = own_utilities(inst, alloc)
    vals = inst.valuations
    for h, b in enumerate(alloc.bundles):
        if not b:
            continue
        if not any(((obs[:, h] - vals[:, g]) <= own).all() for g in b):
            return False
    return True


def is_uhef(inst: Instance, alloc: Allocation, k: int) -> bool:
    """Some hidden set of size <= k with at most one good per bundle gives HEF.

    A uniform hidden set needs exactly one good from every envied bundle (and
    can skip unenvied ones), so the check decomposes per bundle: every envied
    bundle must contain a single good whose removal pacifies all its enviers.
    """
    alloc.validate(inst)
    if k < 0:
        raise ValueError("k must be non-negative")
    obs = observed_matrix(inst, alloc)
    own = own_utilities(inst, alloc)
    vals = inst.valuations
    needed = 0
    for h, b in enumerate(alloc.bundles):
        if (obs[:, h] <= own).all():
            continue  # nobody envies h
        if not b:
            return False  # unreachable: empty bundles observe as 0
        if not any(((obs[:, h] - vals[:, g]) <= own).all() for g in b):
            return False
        needed += 1
    return needed <= k


def unenvied_agents(inst: Instance, alloc: Allocation) -> list[int]:
    """Agents with no incoming envy edge in the envy graph."""
    pairwise = envy_report(inst, alloc).pairwise
    return [h for h in range(inst.num_agents) if (pairwise[:, h] == 0).all()]


def is_pareto_optimal(
    inst: Instance,
    alloc: Allocation,
    state_guard: int = 10**8,
    node_budget: int | None = None,
) -> bool:
    """Exhaustive Pareto-optimality oracle over all n^m allocations.

    Intended as a test oracle on small instances. Raises CapacityError when
    n^m exceeds `state_guard` (caller should skip the check) or the branch
    budget runs out.
    """
    alloc.validate(inst)
    n, m = inst.num_agents, inst.num_goods
    if n**m > state_guard:
        raise CapacityError(f"{n}^{m} allocations exceed the state guard {state_guard}")
    from . import kernels

    targets = own_utilities(inst, alloc)
    budget = node_budget if node_budget is not None else 4 * state_guard
    status = kernels.find_dominating(inst.valuations, targets, budget)
    if status < 0:
        raise CapacityError("Pareto search exceeded its node budget")
    return status == 0
