import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from lewalk import stochastic as st
from lewalk.errors import DriftViolation, NotDisjoint
from lewalk.matrix import ScalarMatrix, det, is_totally_nonnegative, submatrix
from lewalk.network import DirectedNetwork
from lewalk.stochastic import (
    ChainSampler,
    Estimate,
    StepWeights,
    bernoulli_chain,
    bernoulli_closed_forms,
    bernoulli_w,
    chain_walk_matrix,
    estimate_hitting_minor,
    estimate_hitting_minor_sets,
    sample_trajectory,
    strip_walk_values,
    toeplitz_hitting,
    uniform_variate,
)
from lewalk.walkmat import grid_network, hitting_matrix

F = Fraction
HALF = F(1, 2)


def path_markov_chain():
    """a - m - b unit resistor chain as a Markov chain."""
    return DirectedNetwork.build(
        3,
        [(0, 1, F(1)), (1, 0, HALF), (1, 2, HALF), (2, 1, F(1))],
        boundary={0, 2},
    )


# -- sampler basics -----------------------------------------------------------


def test_sampler_rejects_superstochastic():
    net = DirectedNetwork.build(2, [(0, 1, F(3, 4)), (0, 1, HALF)])
    with pytest.raises(ValueError):
        ChainSampler(net, 1)


def test_sampler_rejects_negative_weights():
    net = DirectedNetwork.build(2, [(0, 1, F(-1, 2))])
    with pytest.raises(ValueError):
        ChainSampler(net, 1)


def test_deterministic_chain_hits_in_one_step():
    net = DirectedNetwork.build(2, [(0, 1, F(1))], boundary={1})
    sampler = ChainSampler(net, 7)
    for trial in range(20):
        tr = sample_trajectory(sampler, 0, 100, trial=trial)
        assert tr.outcome == "hit" and tr.hit == 1
        assert len(tr.walk.edge_ids) == 1


def test_boundary_start_hits_after_clock_starts():
    net = DirectedNetwork.build(1, [(0, 0, F(1))], boundary={0})
    sampler = ChainSampler(net, 3)
    tr = sample_trajectory(sampler, 0, 100)
    assert tr.outcome == "hit" and tr.hit == 0
    assert len(tr.walk.edge_ids) == 1  # exactly one step, not zero


def test_trajectory_outcome_accounting(legged_cycle):
    sampler = ChainSampler(legged_cycle, 11)
    n = 4000
    counts = Counter(
        sample_trajectory(sampler, 0, 50, trial=t).outcome for t in range(n)
    )
    assert counts["hit"] + counts["halted"] + counts["truncated"] == n


def test_legged_cycle_hit_frequencies_within_3_sigma(legged_cycle):
    x = hitting_matrix(legged_cycle)
    sampler = ChainSampler(legged_cycle, 23)
    n = 30000
    hits = Counter()
    for t in range(n):
        tr = sample_trajectory(sampler, 0, 1000, trial=t)
        if tr.outcome == "hit":
            hits[tr.hit] += 1
    for j, b in enumerate(sorted(legged_cycle.boundary)):
        p = hits[b] / n
        exact = float(x[0, j])
        sigma = math.sqrt(exact * (1 - exact) / n)
        assert abs(p - exact) < 3 * sigma


# -- counter-based stream -------------------------------------------------------


def test_uniform_variate_is_pure_function():
    assert uniform_variate(42, 7, 100) == uniform_variate(42, 7, 100)
    assert uniform_variate(42, 7, 100) != uniform_variate(42, 8, 100)
    assert 0.0 <= uniform_variate(1, 2, 3) < 1.0


def test_scalar_and_vector_paths_agree(legged_cycle):
    sampler = ChainSampler(legged_cycle, 42)
    n = 1500
    trials = np.arange(n, dtype=np.uint64)
    cand = np.ones(n, dtype=bool)
    out, visited, le_bits, trunc = st._simulate_walk_block(
        sampler, 0, trials, cand, 0, 500
    )
    for t in range(n):
        tr = sample_trajectory(sampler, 0, 500, trial=t, walk_index=0)
        if tr.outcome == "hit":
            assert out[t] == tr.hit
        elif tr.outcome == "halted":
            assert out[t] == -1
        else:
            assert out[t] == -2


def test_estimate_independent_of_chunking(legged_cycle):
    sampler = ChainSampler(legged_cycle, 5)
    a = st._estimate(sampler, [0, 1], [[2], [3]], 30000, 1000, chunk=1 << 8)
    b = st._estimate(sampler, [0, 1], [[2], [3]], 30000, 1000, chunk=30000)
    assert a == b


# -- minor estimators ------------------------------------------------------------


def test_estimate_k1_plain_hitting(legged_cycle):
    x = hitting_matrix(legged_cycle)
    sampler = ChainSampler(legged_cycle, 91)
    est = estimate_hitting_minor(sampler, [0], [2], 50000, 1000)
    exact = float(x[0, 0])
    assert abs(est.mean - exact) < 4 * est.stderr
    assert isinstance(est, Estimate)


def test_estimate_legged_cycle_det(legged_cycle):
    x = hitting_matrix(legged_cycle)
    exact = float(det(submatrix(x, [0, 1], [0, 1])))
    sampler = ChainSampler(legged_cycle, 17)
    est = estimate_hitting_minor(sampler, [0, 1], [2, 3], 200000, 1000)
    assert abs(est.mean - exact) < 3.5 * est.stderr


def test_estimate_sets_singletons_reduce(legged_cycle):
    sampler = ChainSampler(legged_cycle, 29)
    a = estimate_hitting_minor(sampler, [0, 1], [2, 3], 20000, 500)
    b = estimate_hitting_minor_sets(sampler, [0, 1], [[2], [3]], 20000, 500)
    assert a == b


def test_estimate_sets_whole_boundary_is_one():
    net = path_markov_chain()
    sampler = ChainSampler(net, 13)
    est = estimate_hitting_minor_sets(sampler, [1], [[0, 2]], 20000, 10000)
    assert est.mean == 1.0
    assert est.truncated == 0


def test_estimate_sets_disjointness_enforced(legged_cycle):
    sampler = ChainSampler(legged_cycle, 1)
    with pytest.raises(NotDisjoint):
        estimate_hitting_minor_sets(sampler, [0, 1], [[2], [2]], 10, 10)


def test_estimate_sets_grid_aggregated():
    # two 2-element boundary arcs on a 4-column grid chain
    g = grid_network(2, 4)
    x = hitting_matrix(g)
    bd = sorted(g.boundary)
    pos = {b: i for i, b in enumerate(bd)}
    sets = [[0, 4], [3, 7]]   # left column, right column
    sources = [1, 2]
    agg = [
        [sum(x[a, pos[b]] for b in group) for group in sets]
        for a in sources
    ]
    exact = float(det(ScalarMatrix(agg)))
    sampler = ChainSampler(g, 37)
    est = estimate_hitting_minor_sets(sampler, sources, sets, 150000, 2000)
    assert abs(est.mean - exact) < 3.5 * est.stderr


def test_unbiasedness_20_seed_sweep(legged_cycle):
    x = hitting_matrix(legged_cycle)
    exact = float(det(submatrix(x, [0, 1], [0, 1])))
    inside = 0
    for seed in range(20):
        sampler = ChainSampler(legged_cycle, seed)
        est = estimate_hitting_minor(sampler, [0, 1], [2, 3], 20000, 500)
        if abs(est.mean - exact) <= 4 * est.stderr:
            inside += 1
    assert inside >= 19


# -- Bernoulli walk ---------------------------------------------------------------


def test_bernoulli_w_branches():
    assert bernoulli_w(F(3, 4), 0) == 2
    assert bernoulli_w(F(3, 4), 5) == 2
    assert bernoulli_w(F(3, 4), -1) == 2 * F(1, 3)
    with pytest.raises(DriftViolation):
        bernoulli_w(F(1, 2), 1)


def test_bernoulli_closed_forms_values():
    forms = bernoulli_closed_forms(F(3, 4), 1, 1, 1)
    assert forms.w == 2
    assert forms.e2 == F(4, 3)
    assert forms.e2_shifted == F(4, 9)
    assert forms.e3 == F(12, 13)


def test_bernoulli_closed_forms_drift():
    with pytest.raises(DriftViolation):
        bernoulli_closed_forms(F(2, 5), 1, 1, 1)


def test_clipped_chain_matches_w():
    m = 40
    net = bernoulli_chain(F(3, 4), -m, m)
    w = chain_walk_matrix(net)
    tol = F(1, 10**10)
    for k in (0, 2, 5):
        assert abs(w[m, m + k] - bernoulli_w(F(3, 4), k)) < tol
    assert abs(w[m, m - 2] - bernoulli_w(F(3, 4), -2)) < tol


def test_clipped_chain_e2_values():
    m = 40
    p = F(3, 4)
    net = bernoulli_chain(p, -m, m)
    # E(a2, b2; b1): delete b1 = position 0, measure a2 = 3 -> b2 = 5
    sub, old = net.without_vertices({m})
    w = chain_walk_matrix(sub)
    idx = {pos: i for i, pos in enumerate(old)}
    e2 = w[idx[m + 3], idx[m + 5]]
    forms = bernoulli_closed_forms(p, 3, 2, 1)
    assert abs(e2 - forms.e2) < F(1, 10**10)
    # shifted variant: b1 < b2 < a2 with k = 2, l = 3
    e2s = w[idx[m + 5], idx[m + 2]]
    shifted = bernoulli_closed_forms(p, 2, 3, 1).e2_shifted
    assert abs(e2s - shifted) < F(1, 10**10)


# -- Toeplitz / Hankel sections ------------------------------------------------------


def test_strip_values_symmetric_and_concentrated():
    vals = strip_walk_values(range(-5, 6), height=1, xclip=12)
    for k in range(6):
        assert vals[k] == vals[-k]
    assert vals[1] > vals[3] > vals[5] > 0
    assert vals[0] == 0  # parity: odd height reaches odd offsets only


def test_toeplitz_section_tnn():
    sec = toeplitz_hitting([-3, -1, 1, 3], height=1, xclip=12)
    assert is_totally_nonnegative(sec, 4).ok


def test_hankel_section_tnn_single_parity():
    sec = toeplitz_hitting([1, 3, 5], height=4, xclip=9, hankel=True)
    assert is_totally_nonnegative(sec, 3).ok
    sec_even = toeplitz_hitting([2, 4, 6], height=4, xclip=9, hankel=True)
    assert is_totally_nonnegative(sec_even, 3).ok


def test_mixed_parity_section_shows_checkerboard():
    sec = toeplitz_hitting([1, 2, 3], height=4, xclip=9, hankel=True)
    result = is_totally_nonnegative(sec, 2)
    assert not result.ok  # crossing hypothesis fails across parity classes


def test_asymmetric_steps_accepted():
    steps = StepWeights(F(1, 3), F(1, 6), F(1, 4), F(1, 4))
    vals = strip_walk_values([1, -1], height=1, xclip=10, steps=steps)
    assert vals[1] != vals[-1]
