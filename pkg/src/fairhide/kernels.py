"""Hot search kernels: HEF-k existence, Pareto domination, MNW branch-and-bound.

The raw implementations live in `fairhide._kernel_impl` and are loaded twice:
once untouched (pure-Python path) and once with every function numba-jitted.
The environment variable FAIRHIDE_NUMBA=0 makes the library run on the pure
path (slow; for debugging and the jit-vs-python benchmark). Both module
instances stay importable as `py_impl` / `jit_impl` regardless of the flag.

Searches branch over goods in a fixed contention order (descending column max,
then column sum, then index) and break symmetry between identical goods: within
a class of identical valuation columns, owners must be non-decreasing. Both are
sound: results are order-independent and any allocation can be canonicalized by
permuting identical goods.
"""
from __future__ import annotations

import importlib.util
import os

import numpy as np

from . import _kernel_impl as py_impl

NUMBA_ENABLED = os.environ.get("FAIRHIDE_NUMBA", "1").strip().lower() not in ("0", "false", "no")

_KERNEL_NAMES = [
    "_greedy_cover_count",
    "_min_cover",
    "_leaf_kappa",
    "_hefk_exists",
    "_find_dominating",
    "_nash_logbound",
    "_int_product_at_most",
    "_mnw_phase1",
    "_mnw_phase2",
]

# Leaf products beyond this are compared in log space instead of exact int64.
_INT_PRODUCT_LIMIT = 2**62


def _load_jitted():
    """Fresh copy of the impl module with every kernel njit-compiled.

    A separate module instance keeps the jitted functions' global lookups
    (kernels calling kernels) inside the jitted copy, leaving `py_impl` pure.
    """
    from numba import njit

    spec = importlib.util.find_spec("fairhide._kernel_impl")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    for name in _KERNEL_NAMES:
        setattr(mod, name, njit(cache=True)(getattr(mod, name)))
    return mod


jit_impl = _load_jitted() if NUMBA_ENABLED else None
_impl = jit_impl if NUMBA_ENABLED else py_impl


# ---------------------------------------------------------------------------
# Array-preparation wrappers (plain Python; cheap relative to the searches)
# ---------------------------------------------------------------------------

def _as_matrix(vals) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(vals, dtype=np.int64))


def branch_order(vals: np.ndarray) -> np.ndarray:
    """Contention order for branching: descending col max, col sum, then index."""
    colmax = vals.max(axis=0) if vals.shape[0] else np.zeros(vals.shape[1], dtype=np.int64)
    colsum = vals.sum(axis=0)
    m = vals.shape[1]
    return np.array(sorted(range(m), key=lambda j: (-colmax[j], -colsum[j], j)), dtype=np.int64)


def identical_column_links(vals: np.ndarray) -> np.ndarray:
    """prev_same[t] = latest earlier column identical to column t, else -1."""
    m = vals.shape[1]
    prev = np.full(m, -1, dtype=np.int64)
    for t in range(m):
        for s in range(t - 1, -1, -1):
            if (vals[:, t] == vals[:, s]).all():
                prev[t] = s
                break
    return prev


def desc_value_agent_order(vals: np.ndarray) -> np.ndarray:
    """Per-good agent try order: descending value, ties by agent index."""
    n, m = vals.shape
    order = np.empty((m, n), dtype=np.int64)
    for j in range(m):
        order[j] = sorted(range(n), key=lambda a: (-vals[a, j], a))
    return order


def hefk_exists(vals, k: int, node_budget: int, impl=None) -> tuple[int, np.ndarray | None, int]:
    """Does some allocation admit a hidden set of size <= k eliminating envy?

    Returns (status, owner_vector or None, nodes_used); status 1 found,
    0 exhausted without a witness, -1 node budget ran out.
    """
    impl = impl or _impl
    v = _as_matrix(vals)
    n, m = v.shape
    if m == 0:
        return 1, np.zeros(0, dtype=np.int64), 0
    order = branch_order(v)
    vo = np.ascontiguousarray(v[:, order])
    status, assign, nodes = impl._hefk_exists(
        vo, np.int64(k), np.int64(node_budget), identical_column_links(vo), desc_value_agent_order(vo)
    )
    if status != 1:
        return int(status), None, int(nodes)
    owner = np.empty(m, dtype=np.int64)
    owner[order] = assign
    return 1, owner, int(nodes)


def find_dominating(vals, targets, node_budget: int, impl=None) -> int:
    """1 if some allocation Pareto-dominates `targets`, 0 if none, -1 on budget."""
    impl = impl or _impl
    v = _as_matrix(vals)
    t = np.ascontiguousarray(np.asarray(targets, dtype=np.int64))
    if v.shape[1] == 0:
        return 0
    order = branch_order(v)
    vo = np.ascontiguousarray(v[:, order])
    status, _ = impl._find_dominating(
        vo, t, np.int64(node_budget), identical_column_links(vo), desc_value_agent_order(vo)
    )
    return int(status)


def min_cover(env_vals, deficits, impl=None) -> tuple[int, int]:
    """Exact min-size cover over bundle positions; lexicographically-smallest mask."""
    impl = impl or _impl
    ev = _as_matrix(env_vals)
    d = np.ascontiguousarray(np.asarray(deficits, dtype=np.int64))
    if ev.shape[0] == 0:
        return 0, 0
    size, mask = impl._min_cover(ev, d)
    return int(size), int(mask)


def _greedy_nash_value(v: np.ndarray, order: np.ndarray, use_int: bool) -> tuple[int, int, float]:
    """(count, product, log product) of a greedy allocation: each good, in
    branch order, goes to the approving agent with the best marginal product
    (zero-utility agents first). Seeds the phase-1 incumbent."""
    import math

    n = v.shape[0]
    util = np.zeros(n, dtype=np.int64)
    for j in order:
        col = v[:, j]
        best_a, best_key = -1, None
        for a in range(n):
            if col[a] == 0:
                continue
            # lexicographic: make a zero agent positive, then largest log gain
            key = (1 if util[a] == 0 else 0, math.log(util[a] + col[a]) - (math.log(util[a]) if util[a] else 0.0))
            if best_key is None or key > best_key:
                best_a, best_key = a, key
        if best_a >= 0:
            util[best_a] += col[best_a]
    cp = int((util > 0).sum())
    prod = 1
    logp = 0.0
    for u in util:
        if u > 0:
            if use_int:
                prod *= int(u)
            logp += math.log(float(u))
    return cp, prod if use_int else 0, logp


def mnw_assign(vals, node_budget: int, impl=None) -> tuple[np.ndarray | None, int]:
    """Exact Nash-optimal owner vector under the lexicographic convention.

    Phase 1 finds the optimal (positive count, product) value; phase 2 returns
    the lexicographically smallest assignment vector achieving it. Returns
    (None, nodes) when the node budget runs out.
    """
    impl = impl or _impl
    v = _as_matrix(vals)
    n, m = v.shape
    if m == 0:
        return np.zeros(0, dtype=np.int64), 0
    # exact int64 products unless the theoretical maximum could overflow
    upper = 1
    for i in range(n):
        upper *= max(1, int(v[i].sum()))
        if upper >= _INT_PRODUCT_LIMIT:
            break
    use_int = upper < _INT_PRODUCT_LIMIT

    order = branch_order(v)
    vo = np.ascontiguousarray(v[:, order])
    colmax_o = vo.max(axis=0)
    suffix_o = np.zeros(m + 1, dtype=np.int64)
    for t in range(m - 1, -1, -1):
        suffix_o[t] = suffix_o[t + 1] + colmax_o[t]
    seed_cp, seed_prod, seed_log = _greedy_nash_value(v, order, use_int)
    cp, prod, logp, nodes1, status = impl._mnw_phase1(
        vo,
        np.int64(node_budget),
        identical_column_links(vo),
        desc_value_agent_order(vo),
        suffix_o,
        use_int,
        np.int64(seed_cp),
        np.int64(seed_prod),
        seed_log,
    )
    if status == -1:
        return None, int(nodes1)

    colmax = v.max(axis=0)
    suffix = np.zeros(m + 1, dtype=np.int64)
    for t in range(m - 1, -1, -1):
        suffix[t] = suffix[t + 1] + colmax[t]
    budget2 = node_budget - int(nodes1)
    status2, assign, nodes2 = impl._mnw_phase2(
        v, np.int64(cp), np.int64(prod), logp, np.int64(max(budget2, 1)), suffix, use_int
    )
    if status2 != 1:
        return None, int(nodes1) + int(nodes2)
    return assign, int(nodes1) + int(nodes2)
