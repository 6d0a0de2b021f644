"""Lazy greedy engines built on the max-heap of stale upper bounds.

Submodularity makes every stored gain an upper bound on the pair's current
gain, so the find-max loop only refreshes the top entry: once a refreshed
gain beats the next-best stored bound, the search can stop early. The three
instantiations differ in how a stale entry is refreshed:

* naive lazy: recompute the quadratic form x_e^T A^-1 x_e;
* factorization lazy: refactorize A^-1 = U^T U after each selection and
  refresh as ||z_i - z_j||^2, with the z vectors either precomputed for all
  samples or memoized on first use within the iteration;
* scalar lazy: entries carry the iteration stamp of their last refresh and
  are adapted by subtracting (rho_{l,i} - rho_{l,j})^2 over every iteration
  since, from a stored history of rho rows.
"""

from __future__ import annotations

import time

import numpy as np

from . import linalg
from .design import DesignState, Pair, comparison_feature, init_design
from .greedy import _resolve_pool, factorization_gains
from .heap import HeapEntry, LazyHeap, beats
from .errors import StaleStampCorruption
from .trace import SelectionTrace


class RhoHistory:
    """Dense per-iteration record of rho_{l,i} = v_l . x_i.

    Rows are appended as selections happen. In memoize mode individual
    entries are filled on demand from the saved v vectors; a row's fill mask
    tracks which samples have been computed. Rows never invalidate: v_l is
    fixed once iteration l completes.
    """

    def __init__(self, x: np.ndarray, k_max: int):
        self._x = x
        n = x.shape[0]
        self.rho = np.zeros((k_max, n))
        self.v = np.zeros((k_max, x.shape[1]))
        self._filled = np.zeros((k_max, n), dtype=bool)
        self.filled_rows = 0
        self.computed = 0

    def append_precomputed(self, v: np.ndarray) -> None:
        k = self.filled_rows
        self.v[k] = v
        self.rho[k] = self._x @ v
        self._filled[k] = True
        self.computed += self._x.shape[0]
        self.filled_rows += 1

    def append_lazy(self, v: np.ndarray) -> None:
        k = self.filled_rows
        self.v[k] = v
        self.filled_rows += 1

    def column(self, start: int, stop: int, i: int) -> np.ndarray:
        """rho_{l,i} for start <= l < stop, filling missing entries."""
        missing = np.flatnonzero(~self._filled[start:stop, i]) + start
        if missing.size:
            self.rho[missing, i] = self.v[missing] @ self._x[i]
            self._filled[missing, i] = True
            self.computed += missing.size
        return self.rho[start:stop, i]


class _ZCache:
    """Memoized z_i = U x_i with generation-counter invalidation."""

    def __init__(self, x: np.ndarray):
        self._x = x
        self._z = np.zeros_like(x)
        self._gen = np.full(x.shape[0], -1)
        self.generation = 0
        self.u: np.ndarray | None = None
        self.computed = 0

    def invalidate(self, u: np.ndarray) -> None:
        self.u = u
        self.generation += 1

    def get(self, i: int) -> np.ndarray:
        if self._gen[i] != self.generation:
            self._z[i] = self.u @ self._x[i]
            self._gen[i] = self.generation
            self.computed += 1
        return self._z[i]


def _accepts(fresh: HeapEntry, top: HeapEntry) -> bool:
    """Early-exit rule: refreshed gain >= best stored bound, pair order on ties."""
    return fresh.gain > top.gain or (fresh.gain == top.gain and fresh.pair < top.pair)


def _run_lazy(variant, x, absolute_set, k, lam, pool, initial, refresh, update, memo_counter=None):
    """Shared skeleton: heap build, lazy find-max loop, per-selection update.

    `initial` produces the gain array for the empty set; `refresh(entry, it)`
    returns the entry's current gain; `update(pair, it)` applies a selection.
    """
    n = x.shape[0]
    pi, pj = _resolve_pool(n, pool)
    if k > len(pi):
        raise ValueError(f"k={k} exceeds candidate pool of {len(pi)} pairs")
    clock = time.perf_counter

    t0 = clock()
    gains0 = initial(pi, pj)
    heap = LazyHeap(
        HeapEntry(float(g), 0, (int(i), int(j))) for g, i, j in zip(gains0, pi, pj)
    )
    pre_seconds = clock() - t0

    selected: list[Pair] = []
    gains: list[float] = []
    find_max_seconds: list[float] = []
    update_seconds: list[float] = []
    touch_counts: list[int] = []
    memo_counts: list[int] = []

    for it in range(k):
        t1 = clock()
        touches = 0
        entry = heap.extract_max()
        while True:
            if entry.stamp > it:
                raise StaleStampCorruption(f"entry {entry.pair} stamped {entry.stamp} at iteration {it}")
            if entry.stamp == it:
                break
            fresh = HeapEntry(refresh(entry, it), it, entry.pair)
            touches += 1
            if heap.size == 0 or _accepts(fresh, heap.peek()):
                entry = fresh
                break
            entry = heap.replace_top(fresh)
        find_max_seconds.append(clock() - t1)

        selected.append(entry.pair)
        gains.append(entry.gain)
        touch_counts.append(touches)

        t2 = clock()
        update(entry.pair, it)
        update_seconds.append(clock() - t2)
        if memo_counter is not None:
            memo_counts.append(memo_counter())

    return SelectionTrace(
        variant=variant,
        selected=selected,
        gains=gains,
        preprocessing_seconds=pre_seconds,
        find_max_seconds=find_max_seconds,
        update_seconds=update_seconds,
        touch_counts=touch_counts,
        memo_counts=memo_counts if memo_counter is not None else None,
    )


def naive_lazy(x, absolute_set, k, lam, pool=None) -> SelectionTrace:
    """Lazy greedy refreshing entries with fresh quadratic forms."""
    state = init_design(x, absolute_set, lam)

    def initial(pi, pj):
        u = linalg.gram_factor(state.ainv)
        return factorization_gains(x @ u.T, pi, pj)

    def refresh(entry, it):
        xe = comparison_feature(x, entry.pair)
        return float(xe @ state.ainv @ xe)

    def update(pair, it):
        xe = comparison_feature(x, pair)
        state.ainv = linalg.sherman_morrison_downdate(state.ainv, xe)
        state.selected.append(pair)

    return _run_lazy("nl", x, absolute_set, k, lam, pool, initial, refresh, update)


def factorization_lazy(x, absolute_set, k, lam, pool=None, mode="precompute") -> SelectionTrace:
    """Lazy greedy with per-iteration refactorization of A^-1.

    precompute maps every sample through U after each selection; memoize maps
    a sample on its first touch within the iteration and reuses it until the
    next selection invalidates the factor.
    """
    if mode not in ("precompute", "memoize"):
        raise ValueError(f"unknown mode {mode!r}")
    state = init_design(x, absolute_set, lam)
    z_full = [None]
    cache = _ZCache(x)
    computed_before = [0]

    def _refactor():
        u = linalg.gram_factor(state.ainv)
        if mode == "precompute":
            z_full[0] = x @ u.T
        else:
            cache.invalidate(u)

    def initial(pi, pj):
        u = linalg.gram_factor(state.ainv)
        z = x @ u.T
        if mode == "precompute":
            z_full[0] = z
        else:
            # initial gains already needed every z; seed the cache with them
            cache.u = u
            cache._z[:] = z
            cache._gen[:] = cache.generation
        return factorization_gains(z, pi, pj)

    def refresh(entry, it):
        i, j = entry.pair
        if mode == "precompute":
            diff = z_full[0][i] - z_full[0][j]
        else:
            diff = cache.get(i) - cache.get(j)
        return float(diff @ diff)

    def update(pair, it):
        xe = comparison_feature(x, pair)
        state.ainv = linalg.sherman_morrison_downdate(state.ainv, xe)
        state.selected.append(pair)
        _refactor()

    def memo_counter():
        delta = cache.computed - computed_before[0]
        computed_before[0] = cache.computed
        return delta

    tag = "flp" if mode == "precompute" else "flm"
    return _run_lazy(
        tag, x, absolute_set, k, lam, pool, initial, refresh, update,
        memo_counter=memo_counter if mode == "memoize" else None,
    )


def scalar_lazy(x, absolute_set, k, lam, pool=None, mode="precompute") -> SelectionTrace:
    """Lazy greedy adapting stale gains from the rho history.

    An entry last refreshed at iteration t is brought current by subtracting
    sum_{t <= l < k} (rho_{l,i} - rho_{l,j})^2, accumulated oldest row first.
    """
    if mode not in ("precompute", "memoize"):
        raise ValueError(f"unknown mode {mode!r}")
    state = init_design(x, absolute_set, lam)
    history = RhoHistory(x, k)
    computed_before = [0]

    def initial(pi, pj):
        u = linalg.gram_factor(state.ainv)
        return factorization_gains(x @ u.T, pi, pj)

    def refresh(entry, it):
        i, j = entry.pair
        t = entry.stamp
        if mode == "precompute":
            diff = history.rho[t:it, i] - history.rho[t:it, j]
        else:
            diff = history.column(t, it, i) - history.column(t, it, j)
        return entry.gain - float(np.sum(diff * diff))

    def update(pair, it):
        xe = comparison_feature(x, pair)
        v = linalg.update_vector(state.ainv, xe)
        if mode == "precompute":
            history.append_precomputed(v)
        else:
            history.append_lazy(v)
        state.ainv = linalg.symmetrize(state.ainv - np.outer(v, v))
        state.selected.append(pair)

    def memo_counter():
        delta = history.computed - computed_before[0]
        computed_before[0] = history.computed
        return delta

    tag = "slp" if mode == "precompute" else "slm"
    return _run_lazy(
        tag, x, absolute_set, k, lam, pool, initial, refresh, update,
        memo_counter=memo_counter if mode == "memoize" else None,
    )
