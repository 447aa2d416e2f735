"""Floquet evolution of sector-restricted states under fSim brickwork cycles.

States live in fixed-photon-number sectors; gates never mix sectors, so a
state is a dict of amplitude vectors indexed by `SectorBasis` rank. One
cycle applies the odd-bond layer, then the even-bond layer (rightmost factor
of the cycle unitary acts first), plus a pendant layer on the ladder.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .kernels import apply_gate
from .sectors import SectorBasis, popcount

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class FsimParams:
    """Angles of one two-site gate: swap angle theta, conditional phase phi,
    hopping phase beta, plus the single-qubit phases gamma and alpha."""

    theta: float
    phi: float
    beta: float = 0.0
    gamma: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("theta", "phi", "beta", "gamma", "alpha"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite gate angle {name}")


def fsim_matrix(p: FsimParams) -> np.ndarray:
    """4x4 unitary in the {00, 01, 10, 11} basis.

    With gamma = alpha = 0 this is the plain three-angle gate: cos(theta)
    on the one-photon diagonal, i*exp(+/- i beta)*sin(theta) hopping, and
    exp(i phi) on the doubly occupied state.
    """
    c, s = np.cos(p.theta), np.sin(p.theta)
    g, a, b = p.gamma, p.alpha, p.beta
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0
    m[1, 1] = np.exp(1j * (g - a)) * c
    m[1, 2] = 1j * np.exp(1j * (g + b)) * s
    m[2, 1] = 1j * np.exp(1j * (g - b)) * s
    m[2, 2] = np.exp(1j * (g + a)) * c
    m[3, 3] = np.exp(2j * g) * np.exp(1j * p.phi)
    return m


# ---------------------------------------------------------------------------
# circuit geometry


@dataclass(frozen=True)
class CircuitSpec:
    """Geometry and per-layer gate angles of one Floquet cycle.

    Ring: `n_ring` even sites, bonds (i, i+1 mod N), optional total flux
    realized as a uniform per-bond hopping phase beta = flux / N.
    Ladder: an even ring plus one pendant site attached to every other ring
    site; the pendant layer (angles `pendant_params`) runs third in the cycle.
    """

    n_ring: int
    ring_params: FsimParams
    geometry: str = "ring"
    pendant_params: FsimParams | None = None
    flux: float = 0.0

    def __post_init__(self):
        if self.geometry not in ("ring", "ladder"):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.n_ring % 2 or self.n_ring < 4:
            raise ValueError("ring size must be even and >= 4")
        if self.geometry == "ladder":
            if self.pendant_params is None:
                raise ValueError("ladder geometry needs pendant_params")
            if self.flux:
                raise ValueError("flux is only supported on the ring")

    @property
    def n_pendants(self) -> int:
        return self.n_ring // 2 if self.geometry == "ladder" else 0

    @property
    def n_sites(self) -> int:
        return self.n_ring + self.n_pendants

    def bond_layers(self) -> list[list[tuple[int, int, FsimParams]]]:
        beta = self.flux / self.n_ring if self.geometry == "ring" else 0.0
        rp = replace(self.ring_params, beta=self.ring_params.beta + beta)
        layers = [
            [(a, (a + 1) % self.n_ring, rp) for a in range(1, self.n_ring, 2)],
            [(a, a + 1, rp) for a in range(0, self.n_ring, 2)],
        ]
        if self.geometry == "ladder":
            pend = [
                (2 * p, self.n_ring + p, self.pendant_params)
                for p in range(self.n_pendants)
            ]
            layers.append(pend)
        return layers


def with_flux(spec: CircuitSpec, flux: float) -> CircuitSpec:
    """Ring circuit with total flux `flux` threading it (beta = flux/N per bond)."""
    if spec.geometry != "ring":
        raise ValueError("flux is only supported on the ring")
    return replace(spec, flux=flux)


def ring_bond_layers(n_sites: int, params: FsimParams) -> list[list[tuple[int, int, FsimParams]]]:
    """Brickwork layers for a bare ring of any size >= 3.

    Even rings give the standard two layers. Odd rings cannot be two-colored:
    the leftover wrap bond (N-1, 0) is applied as a third layer after the
    even bonds (used only for diagnostics; `CircuitSpec` itself stays even).
    """
    if n_sites < 3:
        raise ValueError("ring needs at least 3 sites")
    odd = [(a, a + 1, params) for a in range(1, n_sites - 1, 2)]
    even = [(a, a + 1, params) for a in range(0, n_sites - 1, 2)]
    if n_sites % 2 == 0:
        odd.append((n_sites - 1, 0, params))
        return [odd, even]
    return [odd, even, [(n_sites - 1, 0, params)]]


# ---------------------------------------------------------------------------
# states


@lru_cache(maxsize=256)
def get_basis(n_sites: int, n_ph: int) -> SectorBasis:
    return SectorBasis(n_sites, n_ph)


class SectorState:
    """Complex amplitudes over a union of photon-number sectors."""

    def __init__(self, n_sites: int, amplitudes: dict[int, np.ndarray]):
        self.n_sites = n_sites
        self.amplitudes = {
            n: np.ascontiguousarray(v, dtype=complex) for n, v in amplitudes.items()
        }
        for n, v in self.amplitudes.items():
            expected = len(get_basis(n_sites, n))
            if v.shape != (expected,):
                raise ValueError(f"sector {n}: expected {expected} amplitudes, got {v.shape}")

    @property
    def sectors(self) -> list[int]:
        return sorted(self.amplitudes)

    def copy(self) -> "SectorState":
        return SectorState(self.n_sites, {n: v.copy() for n, v in self.amplitudes.items()})

    def norm(self) -> float:
        return float(
            np.sqrt(sum(np.sum(np.abs(v) ** 2) for v in self.amplitudes.values()))
        )

    def sector_weight(self, n_ph: int) -> float:
        v = self.amplitudes.get(n_ph)
        return 0.0 if v is None else float(np.sum(np.abs(v) ** 2))

    @staticmethod
    def from_bitmask(n_sites: int, mask: int) -> "SectorState":
        n = popcount(mask)
        basis = get_basis(n_sites, n)
        amps = np.zeros(len(basis), dtype=complex)
        amps[basis.rank(mask)] = 1.0
        return SectorState(n_sites, {n: amps})

    @staticmethod
    def vacuum(n_sites: int) -> "SectorState":
        return SectorState.from_bitmask(n_sites, 0)


# ---------------------------------------------------------------------------
# gate application

# Per (basis, bond) rank tables: (idx_src, idx_dst, idx_both) where idx_src
# holds states with site i occupied / j empty and idx_dst the partner ranks.
_bond_table_cache: dict[tuple[int, int, int, int], tuple] = {}


def _bond_tables(basis: SectorBasis, i: int, j: int):
    key = (basis.n_sites, basis.n_ph, i, j)
    hit = _bond_table_cache.get(key)
    if hit is not None:
        return hit
    states = basis.states
    oi = (states >> np.uint64(i)) & np.uint64(1)
    oj = (states >> np.uint64(j)) & np.uint64(1)
    src = np.nonzero((oi == 1) & (oj == 0))[0]
    both = np.nonzero((oi == 1) & (oj == 1))[0]
    flip = np.uint64((1 << i) | (1 << j))
    partners = states[src] ^ flip
    dst = np.searchsorted(states, partners)
    tables = (
        np.ascontiguousarray(src, dtype=np.intp),
        np.ascontiguousarray(dst, dtype=np.intp),
        np.ascontiguousarray(both, dtype=np.intp),
    )
    _bond_table_cache[key] = tables
    return tables


def _gate_coefficients(p: FsimParams):
    # src = first bond site occupied (the |10> diagonal carries e^{i(gamma+alpha)}),
    # dst = second site occupied (|01>, e^{i(gamma-alpha)})
    c = np.cos(p.theta)
    diag_src = c * np.exp(1j * (p.gamma + p.alpha))
    diag_dst = c * np.exp(1j * (p.gamma - p.alpha))
    hop = 1j * np.sin(p.theta) * np.exp(1j * (p.gamma + p.beta))
    hop_back = 1j * np.sin(p.theta) * np.exp(1j * (p.gamma - p.beta))
    phase11 = np.exp(1j * (2 * p.gamma + p.phi))
    return complex(diag_src), complex(diag_dst), complex(hop), complex(hop_back), complex(phase11)


def apply_fsim(state: SectorState, bond: tuple[int, int], p: FsimParams) -> SectorState:
    """Apply one fSim gate on an ordered bond (i, j); hopping i->j gets e^{+i beta}."""
    i, j = bond
    n = state.n_sites
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"bond {bond} out of range for {n} sites")
    out = state.copy()
    _apply_fsim_inplace(out, i, j, p)
    return out


def _apply_fsim_inplace(state: SectorState, i: int, j: int, p: FsimParams) -> None:
    diag_src, diag_dst, hop, hop_back, phase11 = _gate_coefficients(p)
    for n_ph, amps in state.amplitudes.items():
        if n_ph == 0:
            continue
        basis = get_basis(state.n_sites, n_ph)
        idx_src, idx_dst, idx_both = _bond_tables(basis, i, j)
        apply_gate(amps, idx_src, idx_dst, idx_both, diag_src, diag_dst, hop, hop_back, phase11)


def apply_layers(state: SectorState, layers) -> SectorState:
    out = state.copy()
    for layer in layers:
        for (i, j, p) in layer:
            _apply_fsim_inplace(out, i, j, p)
    return out


def floquet_cycle(state: SectorState, spec: CircuitSpec) -> SectorState:
    if state.n_sites != spec.n_sites:
        raise ValueError(
            f"state has {state.n_sites} sites, circuit expects {spec.n_sites}"
        )
    return apply_layers(state, spec.bond_layers())


def evolve(state: SectorState, spec: CircuitSpec, cycles: int) -> SectorState:
    layers = spec.bond_layers()
    out = state.copy()
    for _ in range(cycles):
        for layer in layers:
            for (i, j, p) in layer:
                _apply_fsim_inplace(out, i, j, p)
    return out


def sector_unitary(n_sites: int, n_ph: int, layers) -> np.ndarray:
    """Dense matrix of one cycle restricted to a sector (small dimensions only)."""
    basis = get_basis(n_sites, n_ph)
    dim = len(basis)
    cols = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[col] = 1.0
        st = SectorState(n_sites, {n_ph: amps})
        st = apply_layers(st, layers)
        cols[:, col] = st.amplitudes[n_ph]
    return cols


# ---------------------------------------------------------------------------
# noise and sampling


@dataclass(frozen=True)
class NoiseModel:
    """Trajectory noise: per-qubit per-cycle dephasing (random Z angles of
    std `sigma`) and/or amplitude damping that aborts a trajectory with
    probability `p_loss` per occupied qubit per cycle (the quantum-jump
    shortcut; post-selection discards lost shots anyway)."""

    sigma: float = 0.0
    p_loss: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if not 0 <= self.p_loss <= 1:
            raise ValueError("p_loss must be in [0, 1]")

    @property
    def is_trivial(self) -> bool:
        return self.sigma == 0.0 and self.p_loss == 0.0


def apply_noise(state: SectorState, model: NoiseModel, rng: np.random.Generator):
    """One cycle's worth of noise. Returns the new state, or None if the
    trajectory was lost to amplitude damping."""
    if model.p_loss > 0.0:
        sectors = [n for n in state.sectors if state.sector_weight(n) > 0]
        if len(sectors) != 1:
            raise ValueError("amplitude damping is defined for single-sector trajectories")
        # every basis state of the sector has exactly n_ph occupied qubits
        survive = (1.0 - model.p_loss) ** sectors[0]
        if rng.random() > survive:
            return None
    if model.sigma == 0.0:
        return state.copy()
    phases = rng.normal(0.0, model.sigma, size=state.n_sites)
    out = state.copy()
    for n_ph, amps in out.amplitudes.items():
        if n_ph == 0:
            continue
        basis = get_basis(state.n_sites, n_ph)
        total = np.zeros(len(basis))
        for q in range(state.n_sites):
            occ = ((basis.states >> np.uint64(q)) & np.uint64(1)).astype(float)
            total += phases[q] * occ
        amps *= np.exp(1j * total)
    return out


@dataclass
class SampleResult:
    counts: dict[int, int]
    retained_fraction: float
    shots: int


def sample_bitstrings(
    state: SectorState,
    shots: int,
    rng: np.random.Generator,
    postselect_n: int | None = None,
) -> SampleResult:
    """Born-rule samples over the state's sectors; with `postselect_n`,
    samples from other sectors are discarded (not re-drawn)."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    sectors = state.sectors
    if not sectors:
        raise ValueError("cannot sample an empty state")
    probs, labels, sector_of = [], [], []
    for n in sectors:
        basis = get_basis(state.n_sites, n)
        p = np.abs(state.amplitudes[n]) ** 2
        probs.append(p)
        labels.append(basis.states)
        sector_of.append(np.full(len(basis), n))
    p_all = np.concatenate(probs)
    masks = np.concatenate(labels)
    sector_of = np.concatenate(sector_of)
    total = p_all.sum()
    if total <= 0:
        raise ValueError("cannot sample a zero-norm state")
    draws = rng.choice(len(p_all), size=shots, p=p_all / total)
    if postselect_n is not None:
        draws = draws[sector_of[draws] == postselect_n]
    kept = len(draws)
    uniq, cnt = np.unique(masks[draws], return_counts=True)
    counts = {int(m): int(c) for m, c in zip(uniq, cnt)}
    return SampleResult(counts=counts, retained_fraction=kept / shots, shots=shots)
