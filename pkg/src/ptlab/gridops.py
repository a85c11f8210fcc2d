"""Finite-difference operators on uniform 1D grids.

Shared by the partner-potential and spectral engines.  All matrices use
Dirichlet boundaries realized by zero extension (stencil rows near the
edge simply drop out-of-range points).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

# central stencils, (offset: coefficient); divide by dx**order
_C1_ACC2 = {-1: -0.5, 1: 0.5}
_C1_ACC4 = {-2: 1 / 12, -1: -2 / 3, 1: 2 / 3, 2: -1 / 12}
_C2_ACC2 = {-1: 1.0, 0: -2.0, 1: 1.0}
_C2_ACC4 = {-2: -1 / 12, -1: 4 / 3, 0: -5 / 2, 1: 4 / 3, 2: -1 / 12}

# one-sided stencils for sample differentiation at the edges
_F1_ACC4 = [-25 / 12, 4.0, -3.0, 4 / 3, -1 / 4]
_F2_ACC4 = [15 / 4, -77 / 6, 107 / 6, -13.0, 61 / 12, -5 / 6]


def _stencil(order, acc):
    if (order, acc) == (1, 2):
        return _C1_ACC2
    if (order, acc) == (1, 4):
        return _C1_ACC4
    if (order, acc) == (2, 2):
        return _C2_ACC2
    if (order, acc) == (2, 4):
        return _C2_ACC4
    raise ValueError(f"unsupported (order, acc) = ({order}, {acc})")


def diff_matrix(n, dx, order, acc=4, dense=True):
    """n x n differentiation matrix with zero (Dirichlet) extension."""
    st = _stencil(order, acc)
    m = sp.diags([np.full(n - abs(k), c) for k, c in st.items()],
                 list(st.keys()), shape=(n, n), format="csr") / dx**order
    return m.toarray() if dense else m


def derivative(values, dx, order, acc=4):
    """Differentiate grid samples; one-sided stencils at the edges."""
    values = np.asarray(values)
    n = values.size
    st = _stencil(order, acc)
    width = max(abs(k) for k in st)
    out = np.zeros(n, dtype=complex)
    for k, c in st.items():
        if k >= 0:
            out[width:n - width] += c * values[width + k:n - width + k]
        else:
            out[width:n - width] += c * values[width + k:n - width + k]
    fwd = _F1_ACC4 if order == 1 else _F2_ACC4
    sign = -1.0 if order == 1 else 1.0
    for i in range(width):
        out[i] = sum(c * values[i + j] for j, c in enumerate(fwd))
        out[n - 1 - i] = sign * sum(c * values[n - 1 - i - j] for j, c in enumerate(fwd))
    return out / dx**order


def schrodinger_matrix(V, dx, acc=2):
    """Dense matrix of -d^2/dx^2 + V on the grid, Dirichlet boundaries."""
    V = np.asarray(V)
    n = V.size
    lap = diff_matrix(n, dx, order=2, acc=acc)
    H = -lap + np.diag(V.astype(complex))
    if np.isrealobj(V) or np.abs(V.imag).max() == 0.0:
        return H.real
    return H
