"""Numpy implementation of the gate kernel (fallback when the compiled
extension is unavailable). Must stay numerically identical in structure to
`_kernels.pyx`: same operations in the same order per amplitude."""

import numpy as np


def apply_gate(amps, idx_src, idx_dst, idx_both, diag_src, diag_dst, hop, hop_back, phase11):
    """Apply one number-conserving two-site gate in place.

    idx_src: ranks of states with the first bond site occupied, second empty.
    idx_dst: aligned ranks of the partner states (photon moved across the bond).
    idx_both: ranks of states with both bond sites occupied.
    Mixing: dst' = diag_dst*dst + hop*src, src' = diag_src*src + hop_back*dst,
    both' *= phase11.
    """
    a = amps[idx_src]
    b = amps[idx_dst]
    amps[idx_dst] = diag_dst * b + hop * a
    amps[idx_src] = diag_src * a + hop_back * b
    amps[idx_both] *= phase11
