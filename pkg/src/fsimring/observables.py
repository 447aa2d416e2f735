"""Trajectory-experiment observables: occupancy maps, center-of-mass
distributions of the adjacent-photon patterns, bound fractions, wavefront
velocities, and histogram diagnostics.

Exact-amplitude evaluation is the default; sampled variants exist to mirror
shot statistics. On the ladder only ring sites take part in the adjacency
classification (extra sites must be empty for a pattern to count as bound).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import CircuitSpec, NoiseModel, SectorState, apply_noise, floquet_cycle, get_basis
from .errors import ExtractionError
from .sectors import SectorBasis, bound_table, classify, center_of_mass, popcount

_occupancy_cache: dict[tuple[int, int], np.ndarray] = {}


def _occupancy_matrix(basis: SectorBasis) -> np.ndarray:
    """(N, dim) 0/1 matrix: row j flags basis states occupying site j."""
    key = (basis.n_sites, basis.n_ph)
    hit = _occupancy_cache.get(key)
    if hit is None:
        bits = [
            ((basis.states >> np.uint64(j)) & np.uint64(1)).astype(float)
            for j in range(basis.n_sites)
        ]
        hit = np.vstack(bits)
        _occupancy_cache[key] = hit
    return hit


def site_occupancies(state: SectorState) -> np.ndarray:
    out = np.zeros(state.n_sites)
    for n_ph, amps in state.amplitudes.items():
        if n_ph == 0:
            continue
        occ = _occupancy_matrix(get_basis(state.n_sites, n_ph))
        out += occ @ (np.abs(amps) ** 2)
    return out


@dataclass
class OccupancyMap:
    values: np.ndarray  # (n_sites, cycles)


def occupancy_map(spec: CircuitSpec, initial_mask: int, cycles: int) -> OccupancyMap:
    """Exact per-site occupancy (1 - <Z_j>)/2 at each cycle, column t=0 being
    the initial pattern itself."""
    state = SectorState.from_bitmask(spec.n_sites, initial_mask)
    values = np.zeros((spec.n_sites, cycles))
    for t in range(cycles):
        values[:, t] = site_occupancies(state)
        if t + 1 < cycles:
            state = floquet_cycle(state, spec)
    return OccupancyMap(values=values)


@dataclass
class CMDistribution:
    """Distribution of the adjacent-block center of mass over half-site bins.

    positions: block centers in site units (0, 0.5, ..., ring-0.5)
    probs[x][t]: renormalized over adjacent patterns; zero column when no
    adjacent weight remains (flagged in `undefined`).
    """

    ring_size: int
    n_ph: int
    x0: float
    positions: np.ndarray
    probs: np.ndarray  # (2*ring_size, cycles)
    retained_weight: np.ndarray  # (cycles,)
    undefined: np.ndarray  # bool, (cycles,)


def cm_distribution(spec: CircuitSpec, initial_mask: int, cycles: int) -> CMDistribution:
    ring = spec.n_ring
    n_ph = popcount(initial_mask)
    cls = classify(initial_mask, ring)
    if not cls.bound:
        raise ValueError("initial pattern must be a single adjacent block")
    if initial_mask >> ring:
        raise ValueError("initial photons must sit on the ring")
    x0 = center_of_mass(cls, ring)
    basis = get_basis(spec.n_sites, n_ph)
    ranks, cms = bound_table(basis, ring_size=ring if spec.geometry == "ladder" else None)
    bins = np.round(cms * 2).astype(int)  # half-site bins
    positions = np.arange(2 * ring) / 2.0
    state = SectorState.from_bitmask(spec.n_sites, initial_mask)
    probs = np.zeros((2 * ring, cycles))
    retained = np.zeros(cycles)
    undefined = np.zeros(cycles, dtype=bool)
    for t in range(cycles):
        w = np.abs(state.amplitudes[n_ph][ranks]) ** 2
        total = w.sum()
        retained[t] = total
        if total <= 0.0:
            undefined[t] = True
        else:
            np.add.at(probs[:, t], bins, w / total)
        if t + 1 < cycles:
            state = floquet_cycle(state, spec)
    return CMDistribution(
        ring_size=ring, n_ph=n_ph, x0=x0, positions=positions,
        probs=probs, retained_weight=retained, undefined=undefined,
    )


# ---------------------------------------------------------------------------
# bound fraction


def bound_fraction_state(state: SectorState, ring_size: int | None = None) -> float:
    """Adjacent-pattern weight over total sector weight, exact amplitudes."""
    populated = [n for n in state.sectors if state.sector_weight(n) > 0 and n > 0]
    if len(populated) != 1:
        raise ValueError("bound fraction needs a single populated photon sector")
    n_ph = populated[0]
    basis = get_basis(state.n_sites, n_ph)
    ranks, _ = bound_table(basis, ring_size=ring_size)
    amps = state.amplitudes[n_ph]
    return float(np.sum(np.abs(amps[ranks]) ** 2) / np.sum(np.abs(amps) ** 2))


def bound_fraction_counts(
    counts: dict[int, int], n_sites: int, ring_size: int | None = None
) -> float:
    """Sampled-count variant: fraction of shots whose pattern is one adjacent
    ring block (extra sites empty on the ladder)."""
    if not counts:
        raise ValueError("empty counts")
    ring = n_sites if ring_size is None else ring_size
    pops = {popcount(m) for m in counts}
    if len(pops) != 1:
        raise ValueError("counts mix photon-number sectors")
    extra = ((1 << n_sites) - 1) ^ ((1 << ring) - 1)
    n_bound = total = 0
    for mask, c in counts.items():
        total += c
        if not (mask & extra) and classify(mask, ring).bound:
            n_bound += c
    return n_bound / total


def bound_fraction_series(
    spec: CircuitSpec,
    initial_mask: int,
    cycles: int,
    noise: NoiseModel | None = None,
    rng: np.random.Generator | None = None,
    n_trajectories: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact bound fraction per cycle; with noise, the trajectory average.

    Returns (fractions, surviving_trajectories). Trajectories lost to
    amplitude damping stop contributing from the loss cycle onward, mirroring
    shot post-selection.
    """
    ring = spec.n_ring if spec.geometry == "ladder" else None
    if noise is None or noise.is_trivial:
        n_trajectories = 1
    elif rng is None:
        raise ValueError("noisy runs need an rng")
    acc = np.zeros(cycles)
    alive = np.zeros(cycles)
    for _ in range(n_trajectories):
        state = SectorState.from_bitmask(spec.n_sites, initial_mask)
        for t in range(cycles):
            acc[t] += bound_fraction_state(state, ring_size=ring)
            alive[t] += 1
            if t + 1 < cycles:
                state = floquet_cycle(state, spec)
                if noise is not None and not noise.is_trivial:
                    state = apply_noise(state, noise, rng)
                    if state is None:
                        break
    fractions = np.divide(acc, alive, out=np.zeros(cycles), where=alive > 0)
    return fractions, alive


# ---------------------------------------------------------------------------
# wavefront


def wavefront_velocity(cm: CMDistribution, threshold: float = 0.05) -> float:
    """Ballistic front speed in sites/cycle.

    Per cycle, the front is the largest center-of-mass displacement from the
    initial block center whose outward cumulative probability still exceeds
    `threshold`; a least-squares line over the pre-wraparound cycles gives
    the speed. Displacements are unwrapped to (-ring/2, ring/2].
    """
    cycles = cm.probs.shape[1]
    if cycles < 10:
        raise ExtractionError("need at least 10 cycles for a front fit")
    ring = cm.ring_size
    disp = np.abs(-np.mod(-(cm.positions - cm.x0) + ring / 2, ring) + ring / 2)
    order = np.argsort(disp)
    fronts = np.full(cycles, np.nan)
    for t in range(cycles):
        if cm.undefined[t]:
            continue
        p = cm.probs[order, t]
        tail = np.cumsum(p[::-1])[::-1]
        hit = np.nonzero(tail >= threshold)[0]
        if len(hit) == 0:
            continue
        fronts[t] = disp[order][hit[-1]]
    # fit only the ballistic window: from t=1 until the front nears the
    # wraparound scale ring/2
    limit = ring / 2.0 - 1.0
    ts, xs = [], []
    for t in range(1, cycles):
        if not np.isfinite(fronts[t]):
            continue
        if fronts[t] >= limit:
            break
        ts.append(t)
        xs.append(fronts[t])
    if len(ts) < 4:
        raise ExtractionError("no usable ballistic window for the front fit")
    slope, _ = np.polyfit(ts, xs, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# histogram diagnostics


@dataclass
class TrajectoryHistogram:
    probabilities: np.ndarray  # descending
    is_bound: np.ndarray  # aligned flags
    baseline: float  # 1 / C(N, n_ph)


def trajectory_histogram(
    weights: dict[int, float] | dict[int, int], basis: SectorBasis,
    ring_size: int | None = None,
) -> TrajectoryHistogram:
    """Sorted per-pattern probability profile with the uniform baseline and
    adjacency annotations. `weights` maps pattern -> count or probability."""
    probs = np.zeros(len(basis))
    flags = np.zeros(len(basis), dtype=bool)
    ranks, _ = bound_table(basis, ring_size=ring_size)
    flags[ranks] = True
    for mask, w in weights.items():
        probs[basis.rank(mask)] = w
    total = probs.sum()
    if total > 0:
        probs = probs / total
    order = np.argsort(-probs, kind="stable")
    return TrajectoryHistogram(
        probabilities=probs[order], is_bound=flags[order], baseline=1.0 / len(basis)
    )
