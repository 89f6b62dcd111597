"""Pure NumPy reference kernels.

Kept import-safe without the compiled extension; the dispatch module
picks this file up when `_speedups` is unavailable.  The loop order and
reduction order are fixed so results are reproducible run to run.
"""

from __future__ import annotations

import numpy as np


def pair_cubic_sum(b, sigma2, idx1, idx2, w_pad):
    """O(E^2) pair sum  sum_{e,f} b_e b_f (9 s_e s_f C_ef + 6 C_ef^3).

    C_ef is read off the padded inverse covariance `w_pad`: each edge e
    touches coordinates idx1[e], idx2[e], where an absent coordinate is
    mapped to the zero-padded index d.  The e == f term contributes the
    required 15 b_e^2 s_e^3 automatically since C_ee == s_e.
    """
    b = np.asarray(b, dtype=float)
    sigma2 = np.asarray(sigma2, dtype=float)
    bs = b * sigma2
    rows = w_pad[idx1] + w_pad[idx2]
    acc = 0.0
    for e in range(b.shape[0]):
        c = rows[e, idx1] + rows[e, idx2]
        acc += b[e] * (
            9.0 * sigma2[e] * float(np.sum(bs * c))
            + 6.0 * float(np.sum(b * c * c * c))
        )
    return acc
