"""Pure-numpy gate-application kernels.

All functions update ``a`` in place. ``a`` holds amplitudes for one or more
states: shape (2**n, T) with states as columns (T=1 for a single statevector,
T=2**n when evolving a full unitary). Wire ``t`` is 1-based, wire 1 is the
most significant bit of the row index.
"""

import numpy as np

BACKEND = "numpy"


def _bit_view(a, n, wires):
    """Reshape so that each wire in ``wires`` gets its own length-2 axis.

    Returns (view, axes) where axes[w] is the axis index of wire w.
    """
    dims = []
    axes = {}
    covered = 0
    for t in sorted(wires):
        gap = t - 1 - covered
        if gap:
            dims.append(1 << gap)
        dims.append(2)
        axes[t] = len(dims) - 1
        covered = t
    tail = n - covered
    if tail:
        dims.append(1 << tail)
    dims.append(a.shape[1])
    return a.reshape(dims), axes


def _slice(view, axes_vals, ndim):
    idx = [slice(None)] * ndim
    for ax, v in axes_vals:
        idx[ax] = v
    return view[tuple(idx)]


def apply_1q(a, n, t, u):
    view, axes = _bit_view(a, n, [t])
    ax = axes[t]
    nd = view.ndim
    x0 = _slice(view, [(ax, 0)], nd)
    x1 = _slice(view, [(ax, 1)], nd)
    new0 = u[0, 0] * x0 + u[0, 1] * x1
    x1 *= u[1, 1]
    x1 += u[1, 0] * x0
    x0[...] = new0


def apply_cnot(a, n, c, t):
    view, axes = _bit_view(a, n, [c, t])
    nd = view.ndim
    s0 = _slice(view, [(axes[c], 1), (axes[t], 0)], nd)
    s1 = _slice(view, [(axes[c], 1), (axes[t], 1)], nd)
    tmp = s0.copy()
    s0[...] = s1
    s1[...] = tmp


def apply_toffoli(a, n, c1, c2, t):
    view, axes = _bit_view(a, n, [c1, c2, t])
    nd = view.ndim
    on = [(axes[c1], 1), (axes[c2], 1)]
    s0 = _slice(view, on + [(axes[t], 0)], nd)
    s1 = _slice(view, on + [(axes[t], 1)], nd)
    tmp = s0.copy()
    s0[...] = s1
    s1[...] = tmp


def apply_cu(a, n, c, t, u):
    view, axes = _bit_view(a, n, [c, t])
    nd = view.ndim
    x0 = _slice(view, [(axes[c], 1), (axes[t], 0)], nd)
    x1 = _slice(view, [(axes[c], 1), (axes[t], 1)], nd)
    new0 = u[0, 0] * x0 + u[0, 1] * x1
    x1 *= u[1, 1]
    x1 += u[1, 0] * x0
    x0[...] = new0


def run_tracks(kinds, ma, mb, mi, mats, bits, vec):
    """Classical-track evolution: ``bits`` holds the basis pattern of the
    classical wires per track, ``vec`` the 2-vector on the target wire.

    Kinds: 0/1 classical CNOT/Toffoli (ma = control mask(s), mb = target
    mask), 2/5 CNOT/Toffoli into the target wire (ma = control mask(s)),
    3 one-qubit on the target, 4 controlled one-qubit on the target.
    """
    for k in range(len(kinds)):
        kind = kinds[k]
        if kind in (0, 1):
            on = (bits & ma[k]) == ma[k]
            bits[on] ^= mb[k]
        elif kind in (2, 5):
            on = (bits & ma[k]) == ma[k]
            vec[on] = vec[on][:, ::-1]
        elif kind == 3:
            vec[:] = vec @ mats[mi[k]].T
        else:  # 4
            on = (bits & ma[k]) == ma[k]
            vec[on] = vec[on] @ mats[mi[k]].T
