"""Monte Carlo verification of the determinant identities for hitting
probabilities, plus the Bernoulli-walk closed forms and Toeplitz/Hankel
walk-matrix sections of translation-invariant strips.

Randomness is counter-based: the j-th variate of trial i is a pure function
of (seed XOR i, j), so parallel execution over disjoint trial ranges
reproduces the serial estimate bit for bit. The vectorized sampler and the
scalar `sample_trajectory` consume identical streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DriftViolation, NotDisjoint, SizeMismatch
from .matrix import ScalarMatrix, inverse, submatrix
from .network import DirectedNetwork, Walk
from .walkmat import adjacency

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

HIT = "hit"
HALTED = "halted"
TRUNCATED = "truncated"

_OUT_HALTED = -1
_OUT_TRUNCATED = -2
_OUT_SKIPPED = -3


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def uniform_variate(seed: int, trial: int, index: int) -> float:
    """Counter-based uniform in [0, 1): mixes (seed XOR trial) + stream index."""
    key = (seed & _MASK) ^ (trial & _MASK)
    z = _mix64((key + ((index + 1) * _GOLDEN)) & _MASK)
    return (z >> 11) * 2.0**-53


def _uniform_block(keys: np.ndarray, index: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = keys + np.uint64(((index + 1) * _GOLDEN) & _MASK)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo point estimate with its standard error."""

    mean: float
    stderr: float
    samples: int
    seed: int
    truncated: int = 0  # trajectories cut off at max_steps, reported separately


@dataclass(frozen=True)
class Trajectory:
    walk: Walk
    outcome: str
    hit: int | None


class ChainSampler:
    """Trajectory sampler for a substochastic directed network.

    Outgoing weights at each vertex must be nonnegative and sum to at most 1;
    the deficit is the per-step halting probability. Boundary vertices absorb
    at the first arrival after the clock starts, so a boundary start still
    takes its first step.
    """

    def __init__(self, net: DirectedNetwork, seed: int):
        for v in range(net.vertex_count):
            total = Fraction(0)
            for e in net.out_edges(v):
                if e.weight < 0:
                    raise ValueError(f"negative transition weight on edge {e.id}")
                total += e.weight
            if total > 1:
                raise ValueError(f"outgoing weights at vertex {v} sum to {total} > 1")
        self.net = net
        self.seed = seed & _MASK
        nv = net.vertex_count
        degs = [len(net.out_edges(v)) for v in range(nv)]
        dmax = max(degs, default=0)
        cum = np.full((nv, max(dmax, 1)), 2.0, dtype=np.float64)
        head = np.zeros((nv, max(dmax, 1)), dtype=np.int16)
        eid = np.zeros((nv, max(dmax, 1)), dtype=np.int64)
        for v in range(nv):
            acc = Fraction(0)
            for i, e in enumerate(net.out_edges(v)):
                acc += e.weight
                cum[v, i] = float(acc)
                head[v, i] = e.head
                eid[v, i] = e.id
        self._deg = np.array(degs, dtype=np.int16)
        self._cum = cum
        self._head = head
        self._eid = eid
        self._boundary = np.zeros(nv, dtype=bool)
        for b in net.boundary:
            self._boundary[b] = True
        self._interior_bits = np.uint64(0)
        for v in range(nv):
            if not self._boundary[v]:
                self._interior_bits |= np.uint64(1) << np.uint64(v)


def sample_trajectory(
    sampler: ChainSampler,
    start: int,
    max_steps: int,
    trial: int = 0,
    walk_index: int = 0,
) -> Trajectory:
    """Sample one trajectory; stops at the first boundary hit after departure.

    Exactly one uniform variate is consumed per step, at stream index
    walk_index * max_steps + step, which keeps the scalar path aligned with
    the vectorized estimators.
    """
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    net = sampler.net
    at = start
    eids: list[int] = []
    offset = walk_index * max_steps
    for step in range(max_steps):
        u = uniform_variate(sampler.seed, trial, offset + step)
        deg = int(sampler._deg[at])
        idx = 0
        for i in range(deg):
            if u >= sampler._cum[at, i]:
                idx += 1
        if idx >= deg:
            return Trajectory(Walk(start, tuple(eids)), HALTED, None)
        eids.append(int(sampler._eid[at, idx]))
        at = int(sampler._head[at, idx])
        if sampler._boundary[at]:
            return Trajectory(Walk(start, tuple(eids)), HIT, at)
    return Trajectory(Walk(start, tuple(eids)), TRUNCATED, None)


def _simulate_walk_block(
    sampler: ChainSampler,
    start: int,
    trials: np.ndarray,
    candidates: np.ndarray,
    walk_index: int,
    max_steps: int,
):
    """Vectorized simulation of one trajectory per candidate trial.

    Returns (outcome, visited, le_bits, truncated_count): outcome >= 0 is the
    hit boundary vertex; visited is the walk's vertex bitmask; le_bits the
    bitmask of the loop-erased part as in the split network (the final
    boundary arrival erases nothing).
    """
    nv = sampler.net.vertex_count
    if nv > 60:
        raise ValueError("vectorized sampling supports at most 60 vertices")
    n = len(trials)
    keys = (np.uint64(sampler.seed)) ^ trials.astype(np.uint64)
    outcome = np.full(n, _OUT_SKIPPED, dtype=np.int16)
    running = candidates.copy()
    outcome[running] = _OUT_TRUNCATED  # overwritten on hit/halt
    cur = np.full(n, start, dtype=np.int16)
    one = np.uint64(1)
    visited = np.zeros(n, dtype=np.uint64)
    visited[running] = one << np.uint64(start)
    # loop-erasure stack with lazy invalidation: an entry of posmap is live
    # only while sp has not dropped below it and the stack cell still holds
    # the vertex.
    stack = np.zeros((n, nv + 1), dtype=np.int16)
    stack[:, 0] = start
    sp = np.zeros(n, dtype=np.int16)
    posmap = np.full((n, nv), -1, dtype=np.int16)
    posmap[:, start] = 0
    offset = walk_index * max_steps
    rows = np.arange(n)
    for step in range(max_steps):
        if not running.any():
            break
        u = _uniform_block(keys, offset + step)
        act = np.nonzero(running)[0]
        cv = cur[act].astype(np.intp)
        idx = (u[act, None] >= sampler._cum[cv]).sum(axis=1)
        halted = idx >= sampler._deg[cv]
        halt_rows = act[halted]
        outcome[halt_rows] = _OUT_HALTED
        running[halt_rows] = False
        move_rows = act[~halted]
        if len(move_rows) == 0:
            continue
        mv_idx = idx[~halted]
        nv_vertex = sampler._head[cv[~halted], mv_idx]
        visited[move_rows] |= one << nv_vertex.astype(np.uint64)
        hit = sampler._boundary[nv_vertex]
        hit_rows = move_rows[hit]
        outcome[hit_rows] = nv_vertex[hit]
        running[hit_rows] = False
        go_rows = move_rows[~hit]
        if len(go_rows) == 0:
            continue
        go_v = nv_vertex[~hit].astype(np.int16)
        cur[go_rows] = go_v
        p = posmap[go_rows, go_v]
        live = (p >= 0) & (p <= sp[go_rows]) & (
            stack[go_rows, np.maximum(p, 0)] == go_v
        )
        back_rows = go_rows[live]
        sp[back_rows] = p[live]
        fresh_rows = go_rows[~live]
        if len(fresh_rows):
            sp[fresh_rows] += 1
            stack[fresh_rows, sp[fresh_rows]] = go_v[~live]
            posmap[fresh_rows, go_v[~live]] = sp[fresh_rows]
    truncated = int(np.count_nonzero(outcome == _OUT_TRUNCATED))
    depth = np.arange(nv + 1, dtype=np.int16)
    live_cells = depth[None, :] <= sp[:, None]
    bits = np.where(
        live_cells, one << stack.astype(np.uint64), np.uint64(0)
    )
    le_bits = np.bitwise_or.reduce(bits, axis=1)
    le_bits[~candidates] = np.uint64(0)
    return outcome, visited, le_bits, truncated


def _target_mask(vertices) -> np.uint64:
    m = np.uint64(0)
    for v in vertices:
        m |= np.uint64(1) << np.uint64(v)
    return m


def _estimate(sampler, sources, target_sets, samples, max_steps, chunk=1 << 16):
    k = len(sources)
    masks = [_target_mask(ts) for ts in target_sets]
    zero = np.uint64(0)
    successes = 0
    truncated = 0
    lo = 0
    while lo < samples:
        hi = min(lo + chunk, samples)
        trials = np.arange(lo, hi, dtype=np.uint64)
        cand = np.ones(hi - lo, dtype=bool)
        le_prev = None
        for i in range(k):
            out, visited, le_bits, trunc = _simulate_walk_block(
                sampler, sources[i], trials, cand, i, max_steps
            )
            truncated += trunc
            hit_ok = out >= 0
            vbit = np.where(
                hit_ok, np.uint64(1) << out.astype(np.uint64), zero
            )
            cand &= hit_ok & ((vbit & masks[i]) != zero)
            if i > 0:
                cand &= (visited & le_prev) == zero
            le_prev = le_bits & sampler._interior_bits
        successes += int(np.count_nonzero(cand))
        lo = hi
    mean = successes / samples
    if samples > 1:
        var = mean * (1.0 - mean) * samples / (samples - 1)
        stderr = math.sqrt(var / samples)
    else:
        stderr = 0.0
    return Estimate(mean, stderr, samples, sampler.seed, truncated)


def estimate_hitting_minor(
    sampler: ChainSampler, sources, targets, samples: int, max_steps: int = 100000
) -> Estimate:
    """Estimate the probability that k independent trajectories hit their
    assigned boundary targets in order, each later one avoiding the
    loop-erased part of its predecessor inside the interior.

    Under the crossing hypothesis (caller's obligation) the mean is an
    unbiased estimate of det(X_{A,B}).
    """
    sources = list(sources)
    targets = list(targets)
    if len(sources) != len(targets):
        raise SizeMismatch(f"|A|={len(sources)} but |B|={len(targets)}")
    for b in targets:
        if b not in sampler.net.boundary:
            raise ValueError(f"target {b} is not a boundary vertex")
    return _estimate(
        sampler, sources, [[b] for b in targets], samples, max_steps
    )


def estimate_hitting_minor_sets(
    sampler: ChainSampler, sources, target_sets, samples: int, max_steps: int = 100000
) -> Estimate:
    """Set-valued variant: trajectory i must first hit the boundary inside
    target_sets[i]; the sets must be disjoint."""
    sources = list(sources)
    target_sets = [list(ts) for ts in target_sets]
    if len(sources) != len(target_sets):
        raise SizeMismatch(
            f"|A|={len(sources)} but {len(target_sets)} target sets"
        )
    seen: set[int] = set()
    for ts in target_sets:
        for b in ts:
            if b not in sampler.net.boundary:
                raise ValueError(f"target {b} is not a boundary vertex")
            if b in seen:
                raise NotDisjoint(f"boundary vertex {b} appears in two sets")
            seen.add(b)
    return _estimate(sampler, sources, target_sets, samples, max_steps)


# ---------------------------------------------------------------------------
# Bernoulli random walk on the integers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BernoulliForms:
    """Closed forms for the drifted nearest-neighbor walk (p up, q = 1-p down).

    w: expected visits W(a, b) for b ahead of a, i.e. 1/(p-q).
    e2: expected visits to b2 before first hitting b1, with b1 < a2 < b2 at
        distance k = a2 - b1.
    e2_shifted: same with b1 < b2 < a2, k = b2 - b1, l = a2 - b2.
    e3: expected visits to b3 before hitting b1 or a2, for the layout
        b1 < a3 < b3 < a2 with gaps k, l, m.
    """

    w: Fraction
    e2: Fraction
    e2_shifted: Fraction
    e3: Fraction


def bernoulli_w(p, k: int) -> Fraction:
    """Walk-matrix entry W(n, n+k) of the infinite drifted chain."""
    p = Fraction(p)
    q = 1 - p
    if p <= Fraction(1, 2):
        raise DriftViolation(f"p must exceed 1/2, got {p}")
    if k >= 0:
        return 1 / (p - q)
    return (p / q) ** k / (p - q)


def bernoulli_closed_forms(p, k: int, l: int, m: int) -> BernoulliForms:
    """Evaluate all four closed forms exactly; requires p > 1/2, k, l, m >= 1."""
    p = Fraction(p)
    q = 1 - p
    if p <= Fraction(1, 2):
        raise DriftViolation(f"p must exceed 1/2, got {p}")
    if min(k, l, m) < 1:
        raise ValueError("k, l, m must be >= 1")
    rho = q / p
    span = 1 / (p - q)
    return BernoulliForms(
        w=span,
        e2=span * (1 - rho**k),
        e2_shifted=span * rho**l * (1 - rho**k),
        e3=(1 - rho**k) * (1 - rho**m) / ((p - q) * (1 - rho ** (k + l + m))),
    )


def bernoulli_chain(p, lo: int, hi: int, boundary=()) -> DirectedNetwork:
    """Nearest-neighbor chain on integer positions lo..hi with absorbing ends
    (the end vertices have no outgoing edges). Vertex id of position n is
    n - lo."""
    p = Fraction(p)
    q = 1 - p
    triples = []
    for n in range(lo + 1, hi):
        triples.append((n - lo, n - lo + 1, p))
        triples.append((n - lo, n - lo - 1, q))
    triples.sort(key=lambda t: (t[0], t[1]))
    bd = {b - lo for b in boundary}
    return DirectedNetwork.build(hi - lo + 1, triples, bd)


def chain_walk_matrix(net: DirectedNetwork) -> ScalarMatrix:
    """Exact (I - Q)^-1 without the spectral guard; intended for clipped
    chains whose convergence is guaranteed by the absorbing ends."""
    return inverse(
        ScalarMatrix.identity(net.vertex_count) - adjacency(net)
    )


# ---------------------------------------------------------------------------
# Toeplitz / Hankel walk-matrix sections of translation-invariant strips
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepWeights:
    """Diagonal step probabilities (x, y) -> (x +- 1, y +- 1)."""

    up_right: Fraction = Fraction(1, 4)
    up_left: Fraction = Fraction(1, 4)
    down_right: Fraction = Fraction(1, 4)
    down_left: Fraction = Fraction(1, 4)

    def total(self) -> Fraction:
        return (
            Fraction(self.up_right)
            + Fraction(self.up_left)
            + Fraction(self.down_right)
            + Fraction(self.down_left)
        )


def strip_network(height: int, xclip: int, steps: StepWeights | None = None):
    """Diagonal-step walk on {-xclip..xclip} x {0..height}, x-clipped with
    absorbing ends (clipped columns have no outgoing edges). Returns the
    network and the (x, y) -> vertex id map. Boundary = bottom and top rows.
    """
    if height < 1 or xclip < 1:
        raise ValueError("height and xclip must be >= 1")
    steps = steps or StepWeights()
    if steps.total() > 1:
        raise ValueError("step probabilities sum to more than 1")
    width = 2 * xclip + 1

    def vid(x, y):
        return (y * width) + (x + xclip)

    moves = [
        (1, 1, Fraction(steps.up_right)),
        (-1, 1, Fraction(steps.up_left)),
        (1, -1, Fraction(steps.down_right)),
        (-1, -1, Fraction(steps.down_left)),
    ]
    triples = []
    for y in range(height + 1):
        for x in range(-xclip + 1, xclip):
            for dx, dy, w in moves:
                if w == 0:
                    continue
                x2, y2 = x + dx, y + dy
                if abs(x2) <= xclip and 0 <= y2 <= height:
                    triples.append((vid(x, y), vid(x2, y2), w))
    triples.sort(key=lambda t: (t[0], t[1]))
    boundary = {vid(x, 0) for x in range(-xclip, xclip + 1)} | {
        vid(x, height) for x in range(-xclip, xclip + 1)
    }
    net = DirectedNetwork.build(width * (height + 1), triples, boundary)
    return net, vid


def toeplitz_hitting(
    positions,
    height: int = 1,
    xclip: int = 20,
    steps: StepWeights | None = None,
    hankel: bool = False,
) -> ScalarMatrix:
    """Finite section of the two-boundary walk matrix of a clipped strip.

    Toeplitz variant: entry (i, j) = W((positions[i], 0), (positions[j], height)),
    approximating T(positions[j] - positions[i]) of the infinite strip.
    Hankel variant: entry (i, j) = W((-positions[i], 0), (positions[j], 0)) on
    the clipped half-plane, approximating H(positions[i] + positions[j]).
    Both are genuine walk submatrices of a planar network with rows and
    columns in boundary order, hence totally nonnegative -- provided all
    positions lie in one parity class: diagonal steps preserve the parity of
    x + y, the lattice splits into two components, and walks in different
    components never meet, so mixed-parity sections have checkerboard zeros
    with negative 2x2 minors.
    """
    positions = list(positions)
    net, vid = strip_network(height, xclip, steps)
    w = chain_walk_matrix(net)
    if hankel:
        rows = [vid(-x, 0) for x in positions]
        cols = [vid(x, 0) for x in positions]
    else:
        rows = [vid(x, 0) for x in positions]
        cols = [vid(x, height) for x in positions]
    return submatrix(w, rows, cols)


def strip_walk_values(ks, height: int = 1, xclip: int = 20,
                      steps: StepWeights | None = None) -> dict[int, Fraction]:
    """T(k) = W((0,0), (k,height)) on the clipped strip, for each k in ks."""
    net, vid = strip_network(height, xclip, steps)
    w = chain_walk_matrix(net)
    return {k: w[vid(0, 0), vid(k, height)] for k in ks}
