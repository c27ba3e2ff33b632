"""The ambient para-complex structure of R^4 and small determinant helpers.

Coordinates are grouped into two pairs, (x1, x2, y1, y2).  The involution
swaps the pairs:

    J(x1, x2, y1, y2) = (y1, y2, x1, x2)

so J*J = Id and the eigenspaces for +1 and -1 are the planes
{(p, p) : p in R^2} and {(p, -p) : p in R^2}.  Every eigenvector the
package manufactures flows through :func:`eigen_embed`, so the pair
convention lives in this one module.
"""

from __future__ import annotations

import numpy as np

from .jets import Jet3Vec4

_PAIR_SWAP = (2, 3, 0, 1)


def swap_pairs(v: np.ndarray) -> np.ndarray:
    """Apply the involution along the first axis (works on (4,) and (4, k))."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != 4:
        raise ValueError(f"leading axis must have length 4, got shape {v.shape}")
    return v[_PAIR_SWAP, ...]


def swap_pairs_jet(j: Jet3Vec4) -> Jet3Vec4:
    """Involution applied to an R^4-valued jet (componentwise reindexing)."""
    return Jet3Vec4(j.c[_PAIR_SWAP, :])


def eigen_embed(p: np.ndarray, sign: int) -> np.ndarray:
    """Embed a planar vector p as (p, +p) or (p, -p), an eigenvector of the swap."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    p = np.asarray(p, dtype=float)
    if p.shape != (2,):
        raise ValueError(f"expected a planar vector, got shape {p.shape}")
    return np.concatenate([p, sign * p])


def det4(v1, v2, v3, v4) -> float:
    """Determinant of the 4x4 matrix with the given columns.

    Expanded by complementary 2x2 minors of the top and bottom halves:
    branch-free, no pivoting, exact for the small integer frames the tests
    feed it.
    """
    m = np.column_stack([v1, v2, v3, v4]).astype(float)
    if m.shape != (4, 4):
        raise ValueError(f"expected four 4-vectors, got matrix shape {m.shape}")
    a, b = m[0], m[1]
    c, d = m[2], m[3]

    def minor(r0, r1, i, j):
        return r0[i] * r1[j] - r0[j] * r1[i]

    top01 = minor(a, b, 0, 1)
    top02 = minor(a, b, 0, 2)
    top03 = minor(a, b, 0, 3)
    top12 = minor(a, b, 1, 2)
    top13 = minor(a, b, 1, 3)
    top23 = minor(a, b, 2, 3)
    bot01 = minor(c, d, 0, 1)
    bot02 = minor(c, d, 0, 2)
    bot03 = minor(c, d, 0, 3)
    bot12 = minor(c, d, 1, 2)
    bot13 = minor(c, d, 1, 3)
    bot23 = minor(c, d, 2, 3)
    return float(
        top01 * bot23
        - top02 * bot13
        + top03 * bot12
        + top12 * bot03
        - top13 * bot02
        + top23 * bot01
    )
