"""Pure-numpy statevector update kernels.

Index convention: qubit j is bit j of the basis index (qubit 0 least
significant).  Every kernel mutates the amplitude vector in place and
restricts the update to basis indices whose control bits match:
all bits of ``pos_mask`` set, all bits of ``neg_mask`` clear.
"""

import numpy as np


def _special_positions(bits_and_values):
    """Sorted (position, required bit) pairs from (mask, bit) specs."""
    specials = []
    for mask, bit in bits_and_values:
        p = 0
        while mask >> p:
            if (mask >> p) & 1:
                specials.append((p, bit))
            p += 1
    specials.sort()
    return specials


def _expand(base, specials):
    """Insert fixed bits into free-index values, lowest position first."""
    for p, b in specials:
        low = base & ((1 << p) - 1)
        base = ((base >> p) << (p + 1)) | (b << p) | low
    return base


def _base_indices(n, specials):
    free = n - len(specials)
    return _expand(np.arange(1 << free, dtype=np.int64), specials)


def apply_2x2(amps, n, target, u00, u01, u10, u11, pos_mask=0, neg_mask=0):
    """Apply a 2x2 unitary to `target`, subject to control masks."""
    specials = _special_positions([(1 << target, 0), (pos_mask, 1), (neg_mask, 0)])
    i0 = _base_indices(n, specials)
    i1 = i0 | (1 << target)
    a0 = amps[i0]
    a1 = amps[i1]
    amps[i0] = u00 * a0 + u01 * a1
    amps[i1] = u10 * a0 + u11 * a1


def apply_kq(amps, n, targets, u, pos_mask=0, neg_mask=0):
    """Apply a 2^k x 2^k unitary to `targets`, subject to control masks.

    Bit j of the gate's local index corresponds to targets[j].
    """
    tmask = 0
    for t in targets:
        tmask |= 1 << t
    specials = _special_positions([(tmask, 0), (pos_mask, 1), (neg_mask, 0)])
    base = _base_indices(n, specials)
    k = len(targets)
    offsets = np.zeros(1 << k, dtype=np.int64)
    for b in range(1 << k):
        for j in range(k):
            if (b >> j) & 1:
                offsets[b] |= 1 << targets[j]
    idx = base[:, None] + offsets[None, :]
    amps[idx] = amps[idx] @ u.T


def apply_sign_flip(amps, n, mask, value):
    """Negate amplitudes of indices i with (i & mask) == value."""
    specials = _special_positions([(mask & ~value, 0), (value, 1)])
    idx = _base_indices(n, specials)
    amps[idx] = -amps[idx]
