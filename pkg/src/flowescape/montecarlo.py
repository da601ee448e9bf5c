"""Monte Carlo cross-checks: survival sampling and Birkhoff deviation bounds.

Simulation is fully deterministic given a seed: one Philox generator keyed by
the seed draws every uniform up front as a (steps, samples) block, so column i
is sample i's private stream and results are bit-identical across reruns and
independent of how many samples have already died. Exact counterparts for both
estimators (the survival curve and a dynamic program for the deviation
probabilities) live next to them so tests can hold the sampler to 3-sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllMassEscapedError
from .open_system import build_open_refined
from .shift import (
    DEFAULT_STATE_CAP,
    CylinderFunction,
    MarkovShift,
    Word,
    admissible_words,
    cylinder_measure,
)
from .pressure import _integer_heights
from .suspension import SuspensionSystem


@dataclass(frozen=True)
class SimulationConfig:
    """Sampling parameters; ``confidence_z`` scales every reported bracket."""

    seed: int
    samples: int
    t_max: int
    confidence_z: float = 3.0

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if self.samples < 100:
            raise ValueError(f"need at least 100 samples, got {self.samples}")
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")
        if self.confidence_z <= 0.0:
            raise ValueError(f"confidence_z must be positive, got {self.confidence_z}")


def _uniform_block(seed: int, rows: int, cols: int) -> np.ndarray:
    """The canonical uniform draw: row t feeds step t, column i is sample i."""
    return np.random.Generator(np.random.Philox(seed)).random((rows, cols))


def _sample_categorical(thresholds_row: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    return np.searchsorted(thresholds_row, uniforms, side="right")


# ===========================================================================
# Survival sampling
# ===========================================================================

@dataclass(frozen=True, eq=False)
class SurvivalEstimate:
    """Sampled survival curve; row t is the alive fraction after t kills."""

    ts: np.ndarray
    estimates: np.ndarray
    stderrs: np.ndarray
    config: SimulationConfig
    lattice_scale: float


def estimate_survival(
    system: SuspensionSystem,
    hole: Word,
    config: SimulationConfig,
    cap: int = DEFAULT_STATE_CAP,
) -> SurvivalEstimate:
    """Sample the block chain from the flow-invariant measure and record the
    fraction avoiding the hole through each time step.

    Dead samples keep being stepped so the uniform consumption pattern (and
    hence every later number) does not depend on who has died.
    """
    om = build_open_refined(system, hole, cap=cap)
    refined = om.system
    matrix = refined.block_matrix
    size = matrix.shape[0]
    init = refined.block_measure / refined.mass_normalized
    init_cum = np.cumsum(init)[:-1]

    branch_targets = []
    branch_thresholds = []
    width = 0
    for i in range(size):
        js = np.nonzero(matrix[i] > 0.0)[0]
        branch_targets.append(js)
        branch_thresholds.append(np.cumsum(matrix[i, js])[:-1])
        width = max(width, len(js))
    targets = np.zeros((size, width), dtype=np.int64)
    thresholds = np.full((size, max(width - 1, 1)), 2.0)
    for i in range(size):
        js = branch_targets[i]
        targets[i, : len(js)] = js
        targets[i, len(js) :] = js[-1]
        thresholds[i, : len(js) - 1] = branch_thresholds[i]

    in_hole = np.zeros(size, dtype=bool)
    in_hole[list(om.hole_rows)] = True

    uniforms = _uniform_block(config.seed, config.t_max + 1, config.samples)
    states = np.searchsorted(init_cum, uniforms[0], side="right")
    alive = np.ones(config.samples, dtype=bool)

    estimates = np.empty(config.t_max + 1)
    stderrs = np.zeros(config.t_max + 1)
    estimates[0] = 1.0
    for t in range(1, config.t_max + 1):
        alive &= ~in_hole[states]
        p_hat = np.count_nonzero(alive) / config.samples
        estimates[t] = p_hat
        stderrs[t] = math.sqrt(p_hat * (1.0 - p_hat) / config.samples)
        picks = (uniforms[t][:, None] > thresholds[states]).sum(axis=1)
        states = targets[states, picks]
    return SurvivalEstimate(
        ts=np.arange(config.t_max + 1),
        estimates=estimates,
        stderrs=stderrs,
        config=config,
        lattice_scale=system.lattice_scale,
    )


@dataclass(frozen=True)
class EscapeRateEstimate:
    """Confidence bracket [lower, upper] for the flow escape rate."""

    lower: float
    upper: float
    converged: bool
    window: tuple[int, int]


def fit_escape_rate(
    estimate: SurvivalEstimate, window: "tuple[int, int] | None" = None
) -> EscapeRateEstimate:
    """Bracket the escape rate from the sampled curve over a time window.

    Each t gives -log(p_hat -+ z * se) / (t * lambda) as rate bounds; the
    bracket is their union over the window (default: the second half of the
    curve). A zero estimate inside the window raises AllMassEscapedError; an
    interval within 10% of its midpoint counts as converged.
    """
    t_max = estimate.config.t_max
    if window is None:
        window = (max(1, t_max // 2), t_max)
    lo_t, hi_t = window
    if not (1 <= lo_t <= hi_t <= t_max):
        raise ValueError(f"window {window} does not fit inside [1, {t_max}]")
    z = estimate.config.confidence_z
    lam = estimate.lattice_scale
    lowers = []
    uppers = []
    for t in range(lo_t, hi_t + 1):
        p_hat = float(estimate.estimates[t])
        if p_hat <= 0.0:
            raise AllMassEscapedError(f"no surviving samples at t = {t}")
        se = float(estimate.stderrs[t])
        lowers.append(-math.log(min(p_hat + z * se, 1.0)) / (t * lam))
        down = p_hat - z * se
        uppers.append(float("inf") if down <= 0.0 else -math.log(down) / (t * lam))
    lower = min(lowers)
    upper = max(uppers)
    midpoint = 0.5 * (lower + upper)
    converged = bool(math.isfinite(upper) and midpoint > 0.0 and (upper - lower) <= 0.1 * midpoint)
    return EscapeRateEstimate(lower=lower, upper=upper, converged=converged, window=window)


# ===========================================================================
# Birkhoff deviation probabilities
# ===========================================================================

@dataclass(frozen=True, eq=False)
class DeviationEstimate:
    """P_k = P(|S_l phi / l - mean| >= epsilon for some l in [k, l_max])."""

    epsilon: float
    k_values: tuple[int, ...]
    probabilities: np.ndarray
    stderrs: np.ndarray
    decay: "float | None"
    l_max: int
    mean_value: float
    config: SimulationConfig


def _deviation_setup(shift: MarkovShift, ceiling: CylinderFunction):
    heights = _integer_heights(ceiling)
    lam = float(ceiling.lattice)
    n = ceiling.order
    mean_ext = lam * sum(
        cylinder_measure(shift, w) * heights[w] for w in admissible_words(shift, n)
    )
    return heights, lam, n, mean_ext


def fit_decay(k_values, probabilities) -> "float | None":
    """exp(slope) of log P against k over the tail (last half, positive P)."""
    pts = [(k, p) for k, p in zip(k_values, probabilities) if p > 0.0]
    tail = pts[len(pts) // 2 :] if len(pts) >= 4 else pts
    if len(tail) < 2:
        return None
    ks = np.array([k for k, _ in tail], dtype=float)
    logs = np.log(np.array([p for _, p in tail]))
    return float(np.exp(np.polyfit(ks, logs, 1)[0]))


def estimate_deviation_prob(
    shift: MarkovShift,
    ceiling: CylinderFunction,
    epsilon: float,
    k_values: "list[int] | tuple[int, ...]",
    config: SimulationConfig,
    l_max: "int | None" = None,
) -> DeviationEstimate:
    """Sample paths and estimate the deviation probabilities P_k.

    The ceiling sum is accumulated as exact lattice integers, and the
    deviation test |lambda * S / l - mean| >= epsilon uses the same float
    expression as the exact dynamic program, so the two can be compared at
    matching branch decisions.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    ks = tuple(sorted({int(k) for k in k_values}))
    if not ks or ks[0] < 1:
        raise ValueError(f"k values must be positive integers, got {k_values}")
    heights, lam, n, mean_ext = _deviation_setup(shift, ceiling)
    if l_max is None:
        l_max = 4 * ks[-1]
    if l_max < ks[-1]:
        raise ValueError(f"l_max = {l_max} is below the largest k = {ks[-1]}")

    size = shift.alphabet_size
    kmap = np.zeros(size ** n, dtype=np.int64)
    for w, k in heights.items():
        code = 0
        for a in w:
            code = code * size + a
        kmap[code] = k

    steps = l_max + n - 1
    uniforms = _uniform_block(config.seed, steps, config.samples)
    pi_cum = np.cumsum(shift.stationary)[:-1]
    trans_cum = np.cumsum(shift.transitions, axis=1)[:, :-1]

    symbols = np.empty((steps, config.samples), dtype=np.int64)
    symbols[0] = np.searchsorted(pi_cum, uniforms[0], side="right")
    for i in range(1, steps):
        rows = trans_cum[symbols[i - 1]]
        symbols[i] = (uniforms[i][:, None] > rows).sum(axis=1)

    codes = np.zeros(config.samples, dtype=np.int64)
    for i in range(n):
        codes = codes * size + symbols[i]
    tail_mod = size ** (n - 1)
    running = np.zeros(config.samples, dtype=np.int64)
    deviated = np.zeros((l_max, config.samples), dtype=bool)
    for l in range(1, l_max + 1):
        running = running + kmap[codes]
        deviated[l - 1] = np.abs(lam * running / l - mean_ext) >= epsilon
        if l < l_max:
            codes = (codes % tail_mod) * size + symbols[l + n - 1]

    any_from = np.flip(np.logical_or.accumulate(np.flip(deviated, axis=0), axis=0), axis=0)
    probabilities = np.array([any_from[k - 1].mean() for k in ks])
    stderrs = np.sqrt(probabilities * (1.0 - probabilities) / config.samples)
    return DeviationEstimate(
        epsilon=epsilon,
        k_values=ks,
        probabilities=probabilities,
        stderrs=stderrs,
        decay=fit_decay(ks, probabilities),
        l_max=l_max,
        mean_value=mean_ext,
        config=config,
    )


def exact_deviation_prob(
    shift: MarkovShift,
    ceiling: CylinderFunction,
    epsilon: float,
    k_values: "list[int] | tuple[int, ...]",
    l_max: int,
) -> tuple[float, ...]:
    """Exact P_k by dynamic programming over (suffix, integer ceiling sum).

    Mass that has deviated at any l in [k, l_max] is absorbed; P_k is one
    minus what survives to l_max. The deviation test is the same float
    expression the sampler uses.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    ks = tuple(sorted({int(k) for k in k_values}))
    heights, lam, n, mean_ext = _deviation_setup(shift, ceiling)
    if l_max < ks[-1]:
        raise ValueError(f"l_max = {l_max} is below the largest k = {ks[-1]}")

    suffix_len = max(n - 1, 1)
    suffixes = admissible_words(shift, suffix_len)
    index = {w: i for i, w in enumerate(suffixes)}
    links = []
    for i, w in enumerate(suffixes):
        for b in shift.successors(w[-1]):
            window = (w + (b,))[-n:]
            links.append(
                (i, index[(w + (b,))[1:]], heights[window], float(shift.transitions[w[-1], b]))
            )
    max_sum = l_max * max(heights.values())
    sums = np.arange(max_sum + 1, dtype=np.int64)

    init_len = max(n, suffix_len)
    out = []
    for k in ks:
        dist = np.zeros((len(suffixes), max_sum + 1))
        for w in admissible_words(shift, init_len):
            dist[index[w[-suffix_len:]], heights[w[-n:]]] += cylinder_measure(shift, w)
        for l in range(1, l_max + 1):
            if l > 1:
                new = np.zeros_like(dist)
                for i, j, gained, prob in links:
                    if gained == 0:
                        new[j] += prob * dist[i]
                    else:
                        new[j, gained:] += prob * dist[i, :-gained]
                dist = new
            if l >= k:
                keep = np.abs(lam * sums / l - mean_ext) < epsilon
                dist = dist * keep[None, :]
        out.append(1.0 - float(dist.sum()))
    return tuple(out)
