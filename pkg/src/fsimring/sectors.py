"""Fixed-photon-number bases on a ring of qubit sites.

Basis states are bitmasks: bit i set means site i is occupied, sites are
indexed 0..N-1 around the ring. A sector collects all masks with a given
popcount, sorted ascending, which fixes the rank convention used everywhere
else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

MAX_SITES = 63


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def occupied_sites(mask: int, n_sites: int) -> list[int]:
    return [i for i in range(n_sites) if (mask >> i) & 1]


def rotate_mask(mask: int, n_sites: int, shift: int = 1) -> int:
    """Cyclically shift all occupations by `shift` sites (site i -> i+shift)."""
    shift %= n_sites
    full = (1 << n_sites) - 1
    return ((mask << shift) | (mask >> (n_sites - shift))) & full


class SectorBasis:
    """All C(N, n_ph) occupation bitmasks of one photon-number sector.

    Immutable after construction; safe to share between workers. `states`
    is ascending, and `rank` inverts it exactly.
    """

    def __init__(self, n_sites: int, n_ph: int):
        if not (0 <= n_ph <= n_sites <= MAX_SITES) or n_sites < 1:
            raise ValueError(f"need 0 <= n_ph <= N <= {MAX_SITES}, got N={n_sites}, n_ph={n_ph}")
        self.n_sites = n_sites
        self.n_ph = n_ph
        self.states = _enumerate_masks(n_sites, n_ph)
        self._rank = {int(b): i for i, b in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)

    def rank(self, mask: int) -> int:
        if popcount(mask) != self.n_ph:
            raise ValueError(
                f"mask {mask:#x} has popcount {popcount(mask)}, sector holds {self.n_ph}"
            )
        return self._rank[int(mask)]

    def unrank(self, index: int) -> int:
        return int(self.states[index])

    def __repr__(self) -> str:
        return f"SectorBasis(N={self.n_sites}, n_ph={self.n_ph}, size={len(self)})"


def _enumerate_masks(n_sites: int, n_ph: int) -> np.ndarray:
    size = comb(n_sites, n_ph)
    out = np.empty(size, dtype=np.uint64)
    if n_ph == 0:
        out[0] = 0
        return out
    # Gosper's hack: next integer with the same popcount, ascending.
    v = (1 << n_ph) - 1
    for i in range(size):
        out[i] = v
        u = v & -v
        w = v + u
        v = w | (((v ^ w) >> 2) // u)
    return out


def enumerate_basis(n_sites: int, n_ph: int) -> SectorBasis:
    return SectorBasis(n_sites, n_ph)


@dataclass(frozen=True)
class BitstringClass:
    """Adjacency class of one occupation pattern.

    `bound` means the occupied sites form a single contiguous cyclic block;
    then `block_start` is the unique occupied site whose predecessor is
    empty, and `block_len` the photon number. Scattered patterns carry no
    block fields.
    """

    bound: bool
    block_start: int | None = None
    block_len: int | None = None


def classify(mask: int, n_sites: int) -> BitstringClass:
    """Classify a pattern as one cyclic block (bound) or scattered.

    Vacuum and the fully occupied ring belong to neither class; a single
    photon counts as bound so trajectory code is uniform in photon number.
    """
    n = popcount(mask)
    if n == 0 or n == n_sites:
        raise ValueError("vacuum / fully occupied patterns have no adjacency class")
    # number of occupied sites whose cyclic successor is empty = number of blocks
    succ = rotate_mask(mask, n_sites)  # bit i+1 set iff site i occupied
    block_heads = mask & ~succ  # occupied sites with empty predecessor
    if popcount(block_heads) != 1:
        return BitstringClass(bound=False)
    start = int(block_heads).bit_length() - 1
    return BitstringClass(bound=True, block_start=start, block_len=n)


def center_of_mass(cls: BitstringClass, n_sites: int) -> float:
    """Block midpoint in half-site units, reduced into [0, N)."""
    if not cls.bound:
        raise ValueError("center of mass is defined for bound patterns only")
    return (cls.block_start + (cls.block_len - 1) / 2.0) % n_sites


def block_mask(n_sites: int, start: int, length: int) -> int:
    """Mask with `length` adjacent photons starting at `start` (cyclic)."""
    m = 0
    for a in range(length):
        m |= 1 << ((start + a) % n_sites)
    return m


def bound_table(basis: SectorBasis, ring_size: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Ranks and centers of mass of all bound patterns in a sector.

    With `ring_size` < N (ladder geometry) only the first `ring_size` sites
    participate: a pattern is bound iff all photons sit on the ring in one
    cyclic block and every extra site is empty.

    Returns (ranks, cm) with cm in half-site units on the ring.
    """
    n_sites = basis.n_sites
    ring = n_sites if ring_size is None else ring_size
    ranks, cms = [], []
    extra_mask = ((1 << n_sites) - 1) ^ ((1 << ring) - 1)
    for i, b in enumerate(basis.states):
        b = int(b)
        if b & extra_mask:
            continue
        cls = classify(b, ring)
        if cls.bound:
            ranks.append(i)
            cms.append(center_of_mass(cls, ring))
    return np.asarray(ranks, dtype=np.intp), np.asarray(cms, dtype=float)


def equiprobable_bound_baseline(n_sites: int, n_ph: int, ring_size: int | None = None) -> float:
    """Bound fraction of the uniform distribution over the sector: (#bound)/C(N, n_ph)."""
    ring = n_sites if ring_size is None else ring_size
    return ring / comb(n_sites, n_ph)
