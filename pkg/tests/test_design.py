import math
from itertools import combinations

import numpy as np
import pytest

from pairdesign import design
from pairdesign.errors import AlreadySelected, InstanceTooLarge

from conftest import random_instance

# 4x2 instance with A = {0}, S = [(0,1), (2,3)], lambda = 0.1; logdet
# computed independently via slogdet of the assembled matrix.
ORACLE_X = np.array([[1.0, 2.0], [0.5, -1.0], [2.0, 0.0], [-1.0, 1.0]])
ORACLE_LOGDET = 4.9814467566315805


def slogdet_objective(x, absolute_set, selected, lam):
    """Independent objective route: assemble and call slogdet."""
    d = x.shape[1]
    m = lam * np.eye(d)
    for i in absolute_set:
        m += np.outer(x[i], x[i])
    for i, j in selected:
        diff = x[i] - x[j]
        m += np.outer(diff, diff)
    sign, val = np.linalg.slogdet(m)
    assert sign > 0
    return val


def test_pair_universe():
    assert design.pair_universe(1) == []
    assert design.pair_universe(3) == [(0, 1), (0, 2), (1, 2)]
    pairs = design.pair_universe(9)
    assert len(pairs) == 36
    assert pairs == sorted(pairs)


def test_pair_arrays_match_universe():
    pi, pj = design.pair_arrays(7)
    assert [(int(i), int(j)) for i, j in zip(pi, pj)] == design.pair_universe(7)


def test_comparison_feature():
    assert np.array_equal(design.comparison_feature(ORACLE_X, (0, 1)), [0.5, 3.0])
    with pytest.raises(IndexError):
        design.comparison_feature(ORACLE_X, (0, 4))


def test_objective_value_oracle():
    value = design.objective_value(ORACLE_X, [0], [(0, 1), (2, 3)], 0.1)
    assert abs(value - ORACLE_LOGDET) <= 1e-12


def test_objective_value_matches_slogdet():
    x, absolute_set = random_instance(7, n=20, d=6)
    selected = [(0, 3), (1, 8), (2, 19)]
    mine = design.objective_value(x, absolute_set, selected, 1e-4)
    theirs = slogdet_objective(x, absolute_set, selected, 1e-4)
    assert abs(mine - theirs) <= 1e-10


def test_marginal_gain_matches_logdet_difference():
    x, absolute_set = random_instance(11, n=15, d=5)
    lam = 1e-4
    state = design.init_design(x, absolute_set, lam)
    selected = []
    for e in [(0, 4), (2, 9), (7, 12)]:
        before = slogdet_objective(x, absolute_set, selected, lam)
        gain = design.marginal_gain_exact(state, x, e)
        after = slogdet_objective(x, absolute_set, selected + [e], lam)
        assert abs(gain - (after - before)) <= 1e-8
        design.add_pair(state, x, e)
        selected.append(e)


def test_proxy_and_exact_share_argmax():
    x, absolute_set = random_instance(3, n=12, d=4)
    state = design.init_design(x, absolute_set, 1e-4)
    pool = design.pair_universe(12)
    proxy = [design.proxy_gain(state, x, e) for e in pool]
    exact = [design.marginal_gain_exact(state, x, e) for e in pool]
    assert int(np.argmax(proxy)) == int(np.argmax(exact))
    for p, g in zip(proxy, exact):
        assert abs(g - math.log1p(p)) <= 1e-12


def test_add_pair_tracks_direct_inverse():
    x, absolute_set = random_instance(5, n=10, d=4)
    lam = 1e-2
    state = design.init_design(x, absolute_set, lam)
    for e in [(0, 1), (3, 7), (2, 9)]:
        design.add_pair(state, x, e)
    direct = np.linalg.inv(design.design_matrix(x, absolute_set, state.selected, lam))
    assert np.max(np.abs(state.ainv - direct)) <= 1e-10
    design.refresh_state(state, x)
    assert np.max(np.abs(state.ainv - direct)) <= 1e-12


def test_add_pair_rejects_duplicates():
    x, absolute_set = random_instance(5, n=6, d=3)
    state = design.init_design(x, absolute_set, 1e-4)
    design.add_pair(state, x, (1, 2))
    with pytest.raises(AlreadySelected):
        design.add_pair(state, x, (1, 2))
    with pytest.raises(AlreadySelected):
        design.proxy_gain(state, x, (1, 2))


def test_init_design_rejects_nonpositive_lambda():
    x, absolute_set = random_instance(5, n=6, d=3)
    with pytest.raises(ValueError):
        design.init_design(x, absolute_set, 0.0)


def test_brute_force_matches_independent_enumeration():
    x, absolute_set = random_instance(13, n=6, d=3)
    lam = 1e-4
    k = 2
    pool = design.pair_universe(6)
    best_val = -np.inf
    best = None
    for subset in combinations(pool, k):
        val = slogdet_objective(x, absolute_set, subset, lam)
        if val > best_val:
            best_val = val
            best = list(subset)
    assert design.brute_force_select(x, absolute_set, k, lam) == best


def test_brute_force_guard():
    x, absolute_set = random_instance(17, n=60, d=3)
    with pytest.raises(InstanceTooLarge):
        design.brute_force_select(x, absolute_set, 10, 1e-4)
