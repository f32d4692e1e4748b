"""Raw search-kernel implementations, nopython-compatible.

Loaded twice by `fairhide.kernels`: once as-is (pure-Python path) and once
with every function numba-jitted (fast path). Do not import this module
directly; use `fairhide.kernels`.
"""
import math

import numpy as np


def _greedy_cover_count(values, nvals, deficit, scratch):
    """Fewest items (largest first) from values[:nvals] summing to >= deficit."""
    for x in range(nvals):
        scratch[x] = values[x]
    covered = 0
    y = 0
    while covered < deficit:
        bi = y
        for x in range(y + 1, nvals):
            if scratch[x] > scratch[bi]:
                bi = x
        tv = scratch[bi]
        scratch[bi] = scratch[y]
        scratch[y] = tv
        covered += scratch[y]
        y += 1
    return y


def _min_cover(env_vals, deficits):
    """Exact smallest subset of bundle positions covering every envier.

    env_vals: (e, b) int64, each envier's value per bundle good (b <= 62);
    deficits: (e,) int64, all positive. Returns (size, mask) where mask is the
    lexicographically smallest optimal subset, bit x = position x.
    """
    e, b = env_vals.shape
    scratch = np.zeros(b, dtype=np.int64)
    lb = 1
    for i in range(e):
        c = _greedy_cover_count(env_vals[i], b, deficits[i], scratch)
        if c > lb:
            lb = c
    comb = np.zeros(b, dtype=np.int64)
    for s in range(lb, b + 1):
        for x in range(s):
            comb[x] = x
        while True:
            ok = True
            for i in range(e):
                tot = 0
                for x in range(s):
                    tot += env_vals[i, comb[x]]
                if tot < deficits[i]:
                    ok = False
                    break
            if ok:
                mask = np.int64(0)
                for x in range(s):
                    mask |= np.int64(1) << comb[x]
                return s, mask
            # next combination in lexicographic order
            pos = s - 1
            while pos >= 0 and comb[pos] == b - s + pos:
                pos -= 1
            if pos < 0:
                break
            comb[pos] += 1
            for x in range(pos + 1, s):
                comb[x] = comb[x - 1] + 1
    return b, (np.int64(1) << b) - np.int64(1)  # unreachable: hiding all always covers


def _leaf_kappa(vals, own, obs, bundle_goods, bundle_size, limit):
    """Sum of exact per-bundle minimum hide sizes, aborting above `limit`."""
    n = vals.shape[0]
    total = 0
    for h in range(n):
        bs = bundle_size[h]
        ne = 0
        for i in range(n):
            if i != h and obs[i, h] > own[i]:
                ne += 1
        if ne == 0:
            continue
        env_vals = np.zeros((ne, bs), dtype=np.int64)
        deficits = np.zeros(ne, dtype=np.int64)
        r = 0
        for i in range(n):
            if i != h and obs[i, h] > own[i]:
                for x in range(bs):
                    env_vals[r, x] = vals[i, bundle_goods[h, x]]
                deficits[r] = obs[i, h] - own[i]
                r += 1
        kh, _ = _min_cover(env_vals, deficits)
        total += kh
        if total > limit:
            return total
    return total


def _hefk_exists(vals, k, node_budget, prev_same, agent_order):
    """Does some allocation admit a hidden set of size <= k eliminating envy?

    DFS over goods (columns already in branch order); a partial allocation is
    pruned when its committed envy already needs more than k hidden goods, no
    matter how the remaining goods are assigned. Returns (status, assign, nodes)
    with status 1 found / 0 exhausted / -1 budget.
    """
    n, m = vals.shape
    assign = np.full(m, -1, dtype=np.int64)
    choice = np.full(m, -1, dtype=np.int64)
    own = np.zeros(n, dtype=np.int64)
    obs = np.zeros((n, n), dtype=np.int64)
    remval = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for j in range(m):
            s += vals[i, j]
        remval[i] = s
    bundle_goods = np.full((n, m), -1, dtype=np.int64)
    bundle_size = np.zeros(n, dtype=np.int64)
    scratch = np.zeros(m, dtype=np.int64)
    gather = np.zeros(m, dtype=np.int64)
    nodes = 0
    t = 0
    while t >= 0:
        oi = choice[t]
        if oi >= 0:
            a = agent_order[t, oi]
            own[a] -= vals[a, t]
            for i in range(n):
                obs[i, a] -= vals[i, t]
                remval[i] += vals[i, t]
            bundle_size[a] -= 1
            assign[t] = -1
        oi += 1
        floor = -1
        if prev_same[t] >= 0:
            floor = assign[prev_same[t]]
        descended = False
        while oi < n:
            a = agent_order[t, oi]
            if a < floor:
                oi += 1
                continue
            nodes += 1
            if nodes > node_budget:
                return -1, assign, nodes
            own[a] += vals[a, t]
            for i in range(n):
                obs[i, a] += vals[i, t]
                remval[i] -= vals[i, t]
            bundle_goods[a, bundle_size[a]] = t
            bundle_size[a] += 1
            assign[t] = a
            # committed-envy lower bound on the hidden-set size
            lb = 0
            for h in range(n):
                bs = bundle_size[h]
                if bs == 0:
                    continue
                worst = 0
                for i in range(n):
                    if i == h:
                        continue
                    d = obs[i, h] - own[i] - remval[i]
                    if d <= 0:
                        continue
                    for x in range(bs):
                        gather[x] = vals[i, bundle_goods[h, x]]
                    c = _greedy_cover_count(gather, bs, d, scratch)
                    if c > worst:
                        worst = c
                lb += worst
                if lb > k:
                    break
            if lb > k:
                own[a] -= vals[a, t]
                for i in range(n):
                    obs[i, a] -= vals[i, t]
                    remval[i] += vals[i, t]
                bundle_size[a] -= 1
                assign[t] = -1
                oi += 1
                continue
            choice[t] = oi
            descended = True
            break
        if not descended:
            choice[t] = -1
            t -= 1
            continue
        if t == m - 1:
            if _leaf_kappa(vals, own, obs, bundle_goods, bundle_size, k) <= k:
                return 1, assign, nodes
            # failed leaf: loop advances choice[t]
        else:
            t += 1
    return 0, assign, nodes


def _find_dominating(vals, targets, node_budget, prev_same, agent_order):
    """Search for an allocation Pareto-dominating the target utility vector.

    Returns (status, nodes): 1 a dominating allocation exists, 0 none,
    -1 budget exhausted.
    """
    n, m = vals.shape
    assign = np.full(m, -1, dtype=np.int64)
    choice = np.full(m, -1, dtype=np.int64)
    own = np.zeros(n, dtype=np.int64)
    remval = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for j in range(m):
            s += vals[i, j]
        remval[i] = s
    total_target = 0
    for i in range(n):
        total_target += targets[i]
        if remval[i] < targets[i]:
            return 0, 0  # target unreachable, nothing can dominate it either
    nodes = 0
    if m == 0:
        return 0, 0  # utilities are all forced to 0; no strict improvement
    t = 0
    while t >= 0:
        oi = choice[t]
        if oi >= 0:
            a = agent_order[t, oi]
            own[a] -= vals[a, t]
            for i in range(n):
                remval[i] += vals[i, t]
            assign[t] = -1
        oi += 1
        floor = -1
        if prev_same[t] >= 0:
            floor = assign[prev_same[t]]
        descended = False
        while oi < n:
            a = agent_order[t, oi]
            if a < floor:
                oi += 1
                continue
            nodes += 1
            if nodes > node_budget:
                return -1, nodes
            own[a] += vals[a, t]
            for i in range(n):
                remval[i] -= vals[i, t]
            assign[t] = a
            feasible = True
            for i in range(n):
                if own[i] + remval[i] < targets[i]:
                    feasible = False
                    break
            if not feasible:
                own[a] -= vals[a, t]
                for i in range(n):
                    remval[i] += vals[i, t]
                assign[t] = -1
                oi += 1
                continue
            choice[t] = oi
            descended = True
            break
        if not descended:
            choice[t] = -1
            t -= 1
            continue
        if t == m - 1:
            tot = 0
            for i in range(n):
                tot += own[i]
            if tot > total_target:
                return 1, nodes  # >= everywhere by feasibility, > somewhere
        else:
            t += 1
    return 0, nodes


def _nash_logbound(own, remval, budget_total):
    """Upper bound (log space) on the product of positive utilities.

    Relaxation: agent i may gain x_i <= remval_i with sum x <= budget (each
    remaining good contributes its column max to exactly one agent). Agents
    already positive contribute log(own_i + x_i); agents at zero contribute at
    most x_i / e, since log(g) <= g / e for every positive gain g. The mixed
    concave program solves by water-filling on the positive agents down to
    marginal value 1/e, with any leftover budget routed to zero agents at rate
    1/e (their marginal is constant, so only the total matters).
    """
    n = own.shape[0]
    inv_e = 1.0 / math.e
    used_at_e = 0.0  # budget positives absorb before their marginal drops to 1/e
    zero_caps = 0.0
    pos_caps = 0.0
    for i in range(n):
        cap = float(remval[i])
        if own[i] > 0:
            pos_caps += cap
            gain = math.e - float(own[i])
            if gain > 0.0:
                used_at_e += gain if gain < cap else cap
        else:
            zero_caps += cap

    if used_at_e <= budget_total <= used_at_e + zero_caps:
        # positives water-filled to marginal 1/e, zeros absorb the leftover
        s = (budget_total - used_at_e) * inv_e
        for i in range(n):
            if own[i] > 0:
                cap = float(remval[i])
                gain = math.e - float(own[i])
                if gain < 0.0:
                    gain = 0.0
                if gain > cap:
                    gain = cap
                s += math.log(float(own[i]) + gain)
        return s

    if budget_total > used_at_e + zero_caps:
        # zeros saturate; the rest pushes positives below marginal 1/e
        s = zero_caps * inv_e
        pos_budget = budget_total - zero_caps
        if pos_budget >= pos_caps:
            for i in range(n):
                if own[i] > 0:
                    s += math.log(float(own[i]) + float(remval[i]))
            return s
        lo = 1e-18
        hi = inv_e
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            used = 0.0
            for i in range(n):
                if own[i] > 0:
                    gain = 1.0 / mid - float(own[i])
                    if gain > 0.0:
                        cap = float(remval[i])
                        used += gain if gain < cap else cap
            if used > pos_budget:
                lo = mid
            else:
                hi = mid
        lam = lo  # the smaller multiplier over-allocates: bound stays an overestimate
        for i in range(n):
            if own[i] > 0:
                cap = float(remval[i])
                gain = 1.0 / lam - float(own[i])
                if gain < 0.0:
                    gain = 0.0
                if gain > cap:
                    gain = cap
                s += math.log(float(own[i]) + gain)
        return s

    # positives alone exhaust the budget before reaching marginal 1/e
    lo = inv_e
    hi = 1.0
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        used = 0.0
        for i in range(n):
            if own[i] > 0:
                gain = 1.0 / mid - float(own[i])
                if gain > 0.0:
                    cap = float(remval[i])
                    used += gain if gain < cap else cap
        if used > budget_total:
            lo = mid
        else:
            hi = mid
    lam = lo  # the smaller multiplier over-allocates: bound stays an overestimate
    s = 0.0
    for i in range(n):
        if own[i] > 0:
            cap = float(remval[i])
            gain = 1.0 / lam - float(own[i])
            if gain < 0.0:
                gain = 0.0
            if gain > cap:
                gain = cap
            s += math.log(float(own[i]) + gain)
    return s


def _int_product_at_most(own, remval, limit):
    """True iff prod_i max(1, own_i + remval_i) <= limit, overflow-safely.

    Sound integer upper bound on any completion's product of positive
    utilities (ignores that each good goes to one agent); used to prune exact
    ties that float log bounds cannot separate.
    """
    if limit < 1:
        return False
    n = own.shape[0]
    p = np.int64(1)
    for i in range(n):
        f = own[i] + remval[i]
        if f < 1:
            f = 1
        if p > limit // f:
            return False
        p *= f
    return p <= limit


def _mnw_phase1(vals, node_budget, prev_same, agent_order, suffix_max, use_int,
                init_cp, init_prod, init_log):
    """Optimal (positive-count, product) value of any allocation.

    (init_cp, init_prod, init_log) seed the incumbent with an achievable value
    (a greedy allocation computed by the caller), so pruning starts at the
    root. Returns (best_cp, best_prod, best_logprod, nodes, status); the int
    product is authoritative when use_int, otherwise log space decides.
    """
    n, m = vals.shape
    assign = np.full(m, -1, dtype=np.int64)
    choice = np.full(m, -1, dtype=np.int64)
    own = np.zeros(n, dtype=np.int64)
    remval = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for j in range(m):
            s += vals[i, j]
        remval[i] = s
    best_cp = init_cp
    best_prod = init_prod
    best_log = init_log
    nodes = 0
    if m == 0:
        return 0, np.int64(1), 0.0, 0, 0
    t = 0
    while t >= 0:
        oi = choice[t]
        if oi >= 0:
            a = agent_order[t, oi]
            own[a] -= vals[a, t]
            for i in range(n):
                remval[i] += vals[i, t]
            assign[t] = -1
        oi += 1
        floor = -1
        if prev_same[t] >= 0:
            floor = assign[prev_same[t]]
        descended = False
        while oi < n:
            a = agent_order[t, oi]
            if a < floor:
                oi += 1
                continue
            nodes += 1
            if nodes > node_budget:
                return best_cp, best_prod, best_log, nodes, -1
            own[a] += vals[a, t]
            for i in range(n):
                remval[i] -= vals[i, t]
            assign[t] = a
            prune = False
            if best_cp >= 0:
                cp_bound = 0
                for i in range(n):
                    if own[i] > 0 or remval[i] > 0:
                        cp_bound += 1
                if cp_bound < best_cp:
                    prune = True
                elif cp_bound == best_cp:
                    if use_int and _int_product_at_most(own, remval, best_prod):
                        prune = True
                    else:
                        logbound = _nash_logbound(own, remval, float(suffix_max[t + 1]))
                        if logbound < best_log - 1e-9:
                            prune = True
            if prune:
                own[a] -= vals[a, t]
                for i in range(n):
                    remval[i] += vals[i, t]
                assign[t] = -1
                oi += 1
                continue
            choice[t] = oi
            descended = True
            break
        if not descended:
            choice[t] = -1
            t -= 1
            continue
        if t == m - 1:
            cp = 0
            prod = np.int64(1)
            logprod = 0.0
            for i in range(n):
                if own[i] > 0:
                    cp += 1
                    if use_int:
                        prod *= own[i]
                    logprod += math.log(float(own[i]))
            better = False
            if cp > best_cp:
                better = True
            elif cp == best_cp:
                if use_int:
                    better = prod > best_prod
                else:
                    better = logprod > best_log + 1e-12
            if better:
                best_cp = cp
                best_prod = prod
                best_log = logprod
        else:
            t += 1
    return best_cp, best_prod, best_log, nodes, 0


def _mnw_phase2(vals, target_cp, target_prod, target_log, node_budget, suffix_max, use_int):
    """Lexicographically smallest assignment vector achieving the phase-1 value.

    Goods in index order, agents ascending: the first optimum leaf found in DFS
    is the lex-min. Returns (status, assign, nodes).
    """
    n, m = vals.shape
    assign = np.full(m, -1, dtype=np.int64)
    choice = np.full(m, -1, dtype=np.int64)
    own = np.zeros(n, dtype=np.int64)
    remval = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for j in range(m):
            s += vals[i, j]
        remval[i] = s
    nodes = 0
    if m == 0:
        return 1, assign, 0
    t = 0
    while t >= 0:
        a = choice[t]
        if a >= 0:
            own[a] -= vals[a, t]
            for i in range(n):
                remval[i] += vals[i, t]
            assign[t] = -1
        a += 1
        descended = False
        while a < n:
            nodes += 1
            if nodes > node_budget:
                return -1, assign, nodes
            own[a] += vals[a, t]
            for i in range(n):
                remval[i] -= vals[i, t]
            assign[t] = a
            cp_bound = 0
            for i in range(n):
                if own[i] > 0 or remval[i] > 0:
                    cp_bound += 1
            prune = cp_bound < target_cp
            if not prune and cp_bound == target_cp:
                if use_int and _int_product_at_most(own, remval, target_prod - 1):
                    prune = True
                else:
                    logbound = _nash_logbound(own, remval, float(suffix_max[t + 1]))
                    if logbound < target_log - 1e-9:
                        prune = True
            if prune:
                own[a] -= vals[a, t]
                for i in range(n):
                    remval[i] += vals[i, t]
                assign[t] = -1
                a += 1
                continue
            choice[t] = a
            descended = True
            break
        if not descended:
            choice[t] = -1
            t -= 1
            continue
        if t == m - 1:
            cp = 0
            prod = np.int64(1)
            logprod = 0.0
            for i in range(n):
                if own[i] > 0:
                    cp += 1
                    if use_int:
                        prod *= own[i]
                    logprod += math.log(float(own[i]))
            hit = cp == target_cp
            if hit:
                if use_int:
                    hit = prod == target_prod
                else:
                    hit = abs(logprod - target_log) < 1e-7
            if hit:
                return 1, assign, nodes
        else:
            t += 1
    return 0, assign, nodes
