"""Greedy hiding, exact minimum hidden sets, kappa-opt, and regret."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from fairhide import Allocation, HiddenSet, Instance, is_ef, is_hef
from fairhide.hiding import (
    ResidualEnvyOracle,
    SearchBoundExceeded,
    exact_min_hide,
    greedy_hide,
    kappa,
    optimal_kappa,
    regret,
    residual_envy,
)
from conftest import (
    binary_group_ef_allocation,
    binary_group_instance,
    binary_group_nash_form,
    identical_scarce_instance,
)


def random_pair(rng, max_agents=4, max_goods=7, binary=False):
    n = int(rng.integers(2, max_agents + 1))
    m = int(rng.integers(n, max_goods + 1))
    if binary:
        vals = (rng.random((n, m)) < 0.6).astype(np.int64)
    else:
        vals = rng.integers(0, 8, size=(n, m)).astype(np.int64)
    inst = Instance(vals)
    owner = rng.integers(0, n, size=m)
    return inst, Allocation.from_owner_vector(owner, n)


class TestGreedy:
    def test_chain_takes_first_four_goods(self, chain_instance, chain_diagonal):
        result = greedy_hide(ResidualEnvyOracle(chain_instance, chain_diagonal))
        assert result.hidden.sorted() == [0, 1, 2, 3]
        assert result.steps == 4
        assert result.residual == 0

    def test_ef_allocation_hides_nothing(self, intro_instance, intro_underlined):
        result = greedy_hide(ResidualEnvyOracle(intro_instance, intro_underlined))
        assert result.size == 0 and result.steps == 0

    def test_hitting_gadget_prefers_shared_good(self):
        from fairhide.reductions import HittingSetInput, hitting_set_gadget

        inst, alloc, _ = hitting_set_gadget(
            HittingSetInput(universe_size=2, families=((1,), (1, 2)), k=1)
        )
        oracle = ResidualEnvyOracle(inst, alloc)
        assert oracle.initial_envy == 2
        result = greedy_hide(oracle)
        assert result.hidden.sorted() == [0]  # hiding g1 clears both enviers at once

    def test_greedy_result_certifies_hef(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            inst, alloc = random_pair(rng)
            result = greedy_hide(ResidualEnvyOracle(inst, alloc))
            assert is_hef(inst, alloc, result.hidden)


class TestExactMinHide:
    def test_circled_needs_all_six(self, intro_instance, intro_circled):
        result = exact_min_hide(ResidualEnvyOracle(intro_instance, intro_circled))
        assert result.size == 6
        assert result.optimal

    def test_chain_diagonal_needs_four(self, chain_instance, chain_diagonal):
        assert kappa(chain_instance, chain_diagonal) == 4

    def test_gap_allocation_needs_exactly_first_two(self, gap_instance, gap_allocation):
        result = exact_min_hide(ResidualEnvyOracle(gap_instance, gap_allocation))
        assert result.hidden.sorted() == [0, 1]

    def test_max_k_exceeded_signals(self, intro_instance, intro_circled):
        with pytest.raises(SearchBoundExceeded):
            exact_min_hide(ResidualEnvyOracle(intro_instance, intro_circled), max_k=5)

    def test_zero_iff_ef_and_certifies(self):
        rng = np.random.default_rng(23)
        for _ in range(60):
            inst, alloc = random_pair(rng)
            result = exact_min_hide(ResidualEnvyOracle(inst, alloc))
            assert (result.size == 0) == is_ef(inst, alloc)
            assert is_hef(inst, alloc, result.hidden)

    def test_matches_global_lexicographic_enumeration(self):
        """Per-bundle decomposition equals the naive subset search, witness included."""
        rng = np.random.default_rng(5)
        for _ in range(40):
            inst, alloc = random_pair(rng, max_agents=3, max_goods=6)
            result = exact_min_hide(ResidualEnvyOracle(inst, alloc))
            m = inst.num_goods
            naive = None
            for size in range(m + 1):
                for subset in combinations(range(m), size):
                    if is_hef(inst, alloc, HiddenSet(frozenset(subset))):
                        naive = sorted(subset)
                        break
                if naive is not None:
                    break
            assert result.hidden.sorted() == naive

    def test_relevant_good_restriction_is_lossless(self):
        """Hiding a good no envier values never changes f."""
        rng = np.random.default_rng(17)
        for _ in range(40):
            inst, alloc = random_pair(rng, binary=True)
            oracle = ResidualEnvyOracle(inst, alloc)
            relevant = set()
            for h in range(inst.num_agents):
                goods, enviers, _ = oracle.bundle_requirements(h)
                relevant |= {g for g in goods if any(inst.valuations[i, g] for i in enviers)}
            for g in set(range(inst.num_goods)) - relevant:
                assert residual_envy(inst, alloc, HiddenSet(frozenset({g}))) == oracle.initial_envy


class TestSupermodularity:
    def test_no_violations_on_1000_draws(self):
        rng = np.random.default_rng(99)
        checked = 0
        while checked < 1000:
            inst, alloc = random_pair(rng)
            m = inst.num_goods
            s = set(int(g) for g in rng.choice(m, size=rng.integers(0, m), replace=False))
            t = s | set(int(g) for g in rng.choice(m, size=rng.integers(0, m), replace=False))
            outside = [j for j in range(m) if j not in t]
            if not outside:
                continue
            j = int(rng.choice(outside))
            f = lambda S: residual_envy(inst, alloc, HiddenSet(frozenset(S)))
            gain_s = f(s) - f(s | {j})
            gain_t = f(t) - f(t | {j})
            assert gain_s >= gain_t
            checked += 1


class TestGreedyBound:
    def test_logarithmic_bound_against_exact(self):
        """Greedy never beats exact and respects the ln(E) guarantee."""
        import math

        rng = np.random.default_rng(3)
        for _ in range(150):
            inst, alloc = random_pair(rng)
            oracle = ResidualEnvyOracle(inst, alloc)
            if oracle.initial_envy < 2:
                continue
            g = greedy_hide(oracle)
            e = exact_min_hide(oracle)
            assert g.size >= e.size
            assert g.size <= e.size * math.log(oracle.initial_envy) + 1


class TestOptimalKappa:
    def test_chain_optimum_is_one(self, chain_instance):
        k, alloc, hidden = optimal_kappa(chain_instance)
        assert k == 1
        assert len(hidden) <= 1
        assert is_hef(chain_instance, alloc, hidden)

    def test_intro_optimum_is_zero(self, intro_instance):
        k, alloc, hidden = optimal_kappa(intro_instance)
        assert k == 0
        assert is_ef(intro_instance, alloc)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_identical_scarce_family(self, n):
        k, _, _ = optimal_kappa(identical_scarce_instance(n))
        assert k == n - 1

    def test_never_exceeds_n_minus_one(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            inst, _ = random_pair(rng, binary=True)
            k, alloc, hidden = optimal_kappa(inst)
            assert k <= inst.num_agents - 1
            assert is_hef(inst, alloc, hidden)
            assert len(hidden) <= k

    def test_lower_bounds_every_allocation(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            inst, alloc = random_pair(rng, max_agents=3, max_goods=5)
            k, _, _ = optimal_kappa(inst)
            assert k <= kappa(inst, alloc)

    def test_max_k_bound_signals(self, chain_instance):
        with pytest.raises(SearchBoundExceeded):
            optimal_kappa(chain_instance, max_k=0)


class TestRegret:
    def test_chain_nash_regret(self, chain_instance, chain_diagonal):
        r, norm = regret(chain_instance, chain_diagonal, kappa_opt=1)
        assert r == 3
        assert norm == Fraction(3, 4)

    def test_ef_allocation_zero_regret(self, intro_instance, intro_underlined):
        r, norm = regret(intro_instance, intro_underlined, kappa_opt=0)
        assert r == 0 and norm == 0

    def test_binary_group_family_regret(self):
        """t=5: the EF allocation certifies kappa_opt=0 while the canonical
        Nash-form allocation must hide at least t-3 goods."""
        t = 5
        inst = binary_group_instance(t)
        assert is_ef(inst, binary_group_ef_allocation(t))
        nash_form = binary_group_nash_form(t)
        r, norm = regret(inst, nash_form, kappa_opt=0)
        assert r >= t - 3
        assert norm >= Fraction(t - 3, 2 * t)

    def test_single_agent_convention(self):
        inst = Instance.from_rows([[5, 2]])
        alloc = Allocation(((0, 1),))
        r, norm = regret(inst, alloc, kappa_opt=0)
        assert r == 0 and norm == 0
