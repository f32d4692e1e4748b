"""EF1 + Pareto-optimal allocation via Fisher-market local search.

Integral market with exact rational prices. The invariant maintained at every
step is MBB consistency: each agent owns only goods maximizing its value/price
ratio, which makes the allocation fractionally Pareto optimal throughout. The
loop runs transfers along maximum-bang-per-buck alternating paths and price
rises on the least spender's hierarchy until the least spender is price-envy-
free up to one good (pEF1) toward everyone, or until no agent can move.

Both exits imply EF1 and sEF1: under pEF1 the max-price good of each bundle
pacifies every observer; in the stuck case each observer either satisfies pEF1
itself or values everything outside its own hierarchy at zero while hierarchy
bundles minus their connecting good cost no more than the observer's spending.

Agents that value nothing and goods that nobody values sit outside the market:
such agents receive nothing, such goods go to agent 0 at the end (they cannot
affect any envy comparison or Pareto improvement).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Allocation, CapacityError, Instance


@dataclass(frozen=True)
class MarketState:
    """Snapshot of prices, ownership, and per-agent best value/price ratios."""

    prices: tuple[Fraction, ...]
    allocation: Allocation
    mbb_ratio: tuple[Fraction, ...]

    def check_consistency(self, inst: Instance) -> None:
        """Every positively-valued owned good must sit at its owner's MBB ratio."""
        for j, p in enumerate(self.prices):
            if p <= 0:
                raise AssertionError(f"price of good {j} is not positive")
        for i, bundle in enumerate(self.allocation.bundles):
            for g in bundle:
                v = int(inst.valuations[i, g])
                if v > 0 and Fraction(v) / self.prices[g] != self.mbb_ratio[i]:
                    raise AssertionError(
                        f"agent {i} owns good {g} at ratio below its MBB ratio"
                    )


class _Market:
    def __init__(self, inst: Instance):
        self.inst = inst
        vals = inst.valuations
        self.n, self.m = vals.shape
        self.active_agents = [i for i in range(self.n) if vals[i].sum() > 0]
        self.market_goods = [j for j in range(self.m) if vals[:, j].sum() > 0]
        self.dead_goods = [j for j in range(self.m) if vals[:, j].sum() == 0]
        self.price: dict[int, Fraction] = {}
        self.owner: dict[int, int] = {}
        self.bundles: dict[int, set[int]] = {i: set() for i in range(self.n)}
        for j in self.market_goods:
            col = vals[:, j]
            a = int(col.argmax())  # argmax breaks ties toward the lowest index
            self.price[j] = Fraction(int(col[a]))
            self.owner[j] = a
            self.bundles[a].add(j)

    # -- elementary queries -------------------------------------------------

    def spending(self, i: int) -> Fraction:
        return sum((self.price[j] for j in self.bundles[i]), Fraction(0))

    def alpha(self, i: int) -> Fraction:
        best = Fraction(0)
        for j in self.market_goods:
            v = int(self.inst.valuations[i, j])
            if v > 0:
                r = Fraction(v) / self.price[j]
                if r > best:
                    best = r
        return best

    def mbb_goods(self, i: int, alpha: Fraction) -> list[int]:
        return [
            j
            for j in self.market_goods
            if self.inst.valuations[i, j] > 0
            and Fraction(int(self.inst.valuations[i, j])) / self.price[j] == alpha
        ]

    def state(self) -> MarketState:
        prices = tuple(self.price.get(j, Fraction(1)) for j in range(self.m))
        alloc = self.allocation()
        ratios = tuple(self.alpha(i) for i in range(self.n))
        return MarketState(prices=prices, allocation=alloc, mbb_ratio=ratios)

    def allocation(self) -> Allocation:
        bundles = [sorted(self.bundles[i]) for i in range(self.n)]
        bundles[0] = sorted(bundles[0] + self.dead_goods)
        return Allocation(tuple(tuple(b) for b in bundles))

    def assert_mbb(self) -> None:
        for i in self.active_agents:
            a = self.alpha(i)
            for g in self.bundles[i]:
                v = int(self.inst.valuations[i, g])
                assert v > 0 and Fraction(v) / self.price[g] == a, (
                    f"MBB violated: agent {i}, good {g}"
                )

    # -- hierarchy ----------------------------------------------------------

    def hierarchy(self, root: int):
        """BFS over alternating MBB-good/ownership edges from `root`.

        Returns (members in discovery order, level, connecting good, MBB
        predecessor agent). Deterministic: goods and agents scanned ascending.
        """
        level = {root: 0}
        conn_good: dict[int, int] = {}
        pred: dict[int, int] = {}
        frontier = [root]
        members = [root]
        while frontier:
            nxt: list[int] = []
            for i in sorted(frontier):
                a = self.alpha(i)
                for g in sorted(self.mbb_goods(i, a)):
                    h = self.owner[g]
                    if h not in level:
                        level[h] = level[i] + 1
                        conn_good[h] = g
                        pred[h] = i
                        members.append(h)
                        nxt.append(h)
            frontier = nxt
        return members, level, conn_good, pred

    def find_violator(self, members, level, conn_good, threshold: Fraction):
        """Shallowest (then lowest-index) member whose bundle minus its
        connecting good still costs more than the threshold spending."""
        candidates = [h for h in members if h in conn_good]
        candidates.sort(key=lambda h: (level[h], h))
        for h in candidates:
            g = conn_good[h]
            if self.spending(h) - self.price[g] > threshold:
                return h, g
        return None

    def pef1_ok(self, i: int) -> bool:
        """p(A_i) >= p(A_h) - max price in A_h, for every other active agent."""
        si = self.spending(i)
        for h in self.active_agents:
            if h == i or not self.bundles[h]:
                continue
            sh = self.spending(h)
            if si < sh - max(self.price[j] for j in self.bundles[h]):
                return False
        return True

    def price_rise_factor(self, members, hier_goods):
        """beta = min(beta1, beta2): beta1 first new MBB edge out of the
        hierarchy, beta2 spending crossing with the cheapest outsider.
        None when neither factor is finite and > 1 (no move possible)."""
        beta1: Fraction | None = None
        outside = [j for j in self.market_goods if j not in hier_goods]
        for i in members:
            if i not in self.active_agents:
                continue
            a = self.alpha(i)
            for j in outside:
                v = int(self.inst.valuations[i, j])
                if v > 0:
                    b = a * self.price[j] / v
                    if beta1 is None or b < beta1:
                        beta1 = b
        beta2: Fraction | None = None
        inside_min = min(self.spending(i) for i in members if i in self.active_agents)
        outsiders = [i for i in self.active_agents if i not in members]
        if outsiders and inside_min > 0:
            out_min = min(self.spending(i) for i in outsiders)
            if out_min > inside_min:
                beta2 = out_min / inside_min
        best = None
        for b in (beta1, beta2):
            if b is not None and b > 1 and (best is None or b < best):
                best = b
        return best


def ef1_po_market(inst: Instance, config=None) -> Allocation:
    """EF1 + fractionally Pareto-optimal allocation (pseudopolynomial time).

    `config` is accepted for interface uniformity; the procedure is fully
    deterministic and ignores it.
    """
    mkt = _Market(inst)
    if not mkt.active_agents or not mkt.market_goods:
        return mkt.allocation()
    maxv = int(inst.valuations.max())
    cap = 10 * mkt.n * mkt.m * maxv * maxv + 100
    for _ in range(cap):
        mkt.assert_mbb()
        order = sorted(mkt.active_agents, key=lambda i: (mkt.spending(i), i))
        if mkt.pef1_ok(order[0]):
            return mkt.allocation()  # least spender pEF1 => all pairs pEF1
        moved = False
        for c in order:
            if mkt.pef1_ok(c):
                continue
            members, level, conn_good, pred = mkt.hierarchy(c)
            viol = mkt.find_violator(members, level, conn_good, mkt.spending(c))
            if viol is not None:
                h, g = viol
                mkt.bundles[h].discard(g)
                mkt.bundles[pred[h]].add(g)
                mkt.owner[g] = pred[h]
                moved = True
                break
            hier_goods = {j for i in members for j in mkt.bundles[i]}
            beta = mkt.price_rise_factor(members, hier_goods)
            if beta is not None:
                for j in hier_goods:
                    mkt.price[j] *= beta
                moved = True
                break
        if not moved:
            return mkt.allocation()  # stuck everywhere: EF1/sEF1 hold (see module doc)
    raise CapacityError(f"market loop exceeded its iteration cap {cap}")


def market_state(inst: Instance) -> MarketState:
    """Initial market snapshot (each good at its max value, owned by an argmax
    agent); mainly for tests asserting MBB consistency."""
    return _Market(inst).state()
