"""Ground truth and verification.

Definitional unitaries for fully-controlled gates, dense and statevector
evaluation of circuits, equivalence checking, and an independent recursive
Toffoli-network generator used to cross-check the closed-form lattices.

Dense evaluation is capped (default 12 wires, override with the
MCU_SYNTH_DENSE_CAP environment variable); above the cap, sampled
statevector verification is the normative check. Evaluation is
single-threaded and deterministic.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from . import qmath
from .circuit import Circuit, CNot, ControlledU, OneQubit, Toffoli

DEFAULT_DENSE_CAP = 12
STATE_CAP = 26
# Above this wire count, sampled "superposition" trials use seeded sparse
# combinations instead of fully dense random vectors (memory/time bound).
DENSE_STATE_MAX_N = 16
SPARSE_COMPONENTS = 16


def dense_cap():
    return int(os.environ.get("MCU_SYNTH_DENSE_CAP", DEFAULT_DENSE_CAP))


@dataclass(frozen=True)
class EquivResult:
    equal: bool
    max_dev: float

    def __bool__(self):
        return self.equal


def cnu_unitary(n, u):
    """Dense matrix of the n-qubit fully-controlled gate: identity except
    the final 2x2 block on |11...1,0> and |11...1,1>, which is ``u``."""
    if not 1 <= n <= dense_cap():
        raise ValueError(f"n must be in 1..{dense_cap()} for dense form")
    u = qmath.require_unitary(u)
    size = 1 << n
    m = np.eye(size, dtype=complex)
    m[size - 2:, size - 2:] = u
    return m


def lambda_unitary(n, controls, target):
    """Dense matrix of X on ``target`` conditioned on all ``controls``."""
    if not 1 <= n <= dense_cap():
        raise ValueError(f"n must be in 1..{dense_cap()} for dense form")
    controls = sorted(set(controls))
    wires = controls + [target]
    if len(set(wires)) != len(wires):
        raise ValueError("controls and target must be disjoint")
    if any(not 1 <= w <= n for w in wires):
        raise ValueError(f"wires out of 1..{n}")
    size = 1 << n
    cmask = 0
    for c in controls:
        cmask |= 1 << (n - c)
    tmask = 1 << (n - target)
    idx = np.arange(size)
    dest = idx.copy()
    sel = (idx & cmask) == cmask
    dest[sel] ^= tmask
    m = np.zeros((size, size), dtype=complex)
    m[dest, idx] = 1.0
    return m


def _apply_ops(a, n, ops):
    """Apply circuit ops in place to column-states array ``a`` (N, T)."""
    for op in ops:
        if isinstance(op, OneQubit):
            kern.apply_1q(a, n, op.target, np.ascontiguousarray(op.u))
        elif isinstance(op, CNot):
            kern.apply_cnot(a, n, op.control, op.target)
        elif isinstance(op, Toffoli):
            kern.apply_toffoli(a, n, op.c1, op.c2, op.target)
        elif isinstance(op, ControlledU):
            kern.apply_cu(a, n, op.control, op.target,
                          np.ascontiguousarray(op.u))
        else:
            raise TypeError(f"unknown gate kind: {op}")


def circuit_unitary(c, block_bytes=1 << 21):
    """Dense unitary of a circuit, evaluated column-block by column-block.

    Column states evolve independently, so results do not depend on the
    blocking. Capped at the dense limit.
    """
    if c.n > dense_cap():
        raise ValueError(f"dense evaluation capped at {dense_cap()} wires")
    size = 1 << c.n
    m = np.eye(size, dtype=complex)
    width = max(1, block_bytes // (size * 16))
    for j0 in range(0, size, width):
        _apply_ops(m[:, j0:j0 + width], c.n, c.ops)
    if c.global_phase:
        m *= np.exp(1j * c.global_phase)
    return m


def apply_circuit(c, state):
    """Apply a circuit to a statevector (or a stack of column states)."""
    state = np.asarray(state, dtype=complex)
    if c.n > STATE_CAP:
        raise ValueError(f"statevector evaluation capped at {STATE_CAP} wires")
    if state.shape[0] != 1 << c.n:
        raise ValueError("state dimension does not match circuit wires")
    out = np.array(state, dtype=complex, copy=True)
    view = out.reshape(-1, 1) if out.ndim == 1 else out
    _apply_ops(view, c.n, c.ops)
    if c.global_phase:
        out *= np.exp(1j * c.global_phase)
    return out


def equiv_dense(c, m, tol=1e-9):
    """Exact equality check (no global-phase quotient) against a dense
    matrix."""
    m = np.asarray(m)
    size = 1 << c.n
    if m.shape != (size, size):
        raise ValueError("dimension mismatch between circuit and matrix")
    dev = float(np.max(np.abs(circuit_unitary(c) - m)))
    return EquivResult(dev <= tol, dev)


# ---------------------------------------------------------------------------
# Classical-track evaluation
#
# Circuits whose only non-classical wire is the last one (one-qubit gates on
# wire n only, controlled gates targeting wire n from classical controls,
# CNOT/Toffoli among the other wires) map a basis state of wires 1..n-1 plus
# a 2-vector on wire n to the same form. Sparse states then evolve in
# O(gates x components) instead of O(gates x 2**n).


def control_classical(c):
    n = c.n
    for op in c.ops:
        if isinstance(op, OneQubit):
            if op.target != n:
                return False
        elif isinstance(op, ControlledU):
            if op.target != n or op.control == n:
                return False
        elif isinstance(op, CNot):
            if op.target != n and (op.control == n or op.target == n):
                return False
            if op.target == n and op.control == n:
                return False
        elif isinstance(op, Toffoli):
            if op.target == n:
                if n in (op.c1, op.c2):
                    return False
            elif n in op.wires():
                return False
    return True


def _compile_tracks(c):
    """Compile a control-classical circuit for the track runner."""
    n = c.n
    kinds, ma, mb, mi = [], [], [], []
    mats = [np.eye(2, dtype=complex)]

    def mat_index(u):
        mats.append(np.ascontiguousarray(u, dtype=complex))
        return len(mats) - 1

    for op in c.ops:
        if isinstance(op, CNot):
            if op.target == n:
                kinds.append(2)
                ma.append(1 << (n - op.control))
                mb.append(0)
                mi.append(0)
            else:
                kinds.append(0)
                ma.append(1 << (n - op.control))
                mb.append(1 << (n - op.target))
                mi.append(0)
        elif isinstance(op, Toffoli):
            cm = (1 << (n - op.c1)) | (1 << (n - op.c2))
            if op.target == n:
                kinds.append(5)
                ma.append(cm)
                mb.append(0)
                mi.append(0)
            else:
                kinds.append(1)
                ma.append(cm)
                mb.append(1 << (n - op.target))
                mi.append(0)
        elif isinstance(op, OneQubit):
            kinds.append(3)
            ma.append(0)
            mb.append(0)
            mi.append(mat_index(op.u))
        else:  # ControlledU targeting n
            kinds.append(4)
            ma.append(1 << (n - op.control))
            mb.append(0)
            mi.append(mat_index(op.u))
    return (np.array(kinds, dtype=np.int32), np.array(ma, dtype=np.int64),
            np.array(mb, dtype=np.int64), np.array(mi, dtype=np.int32),
            np.stack(mats))


def _run_tracks(compiled, bits, vec):
    kinds, ma, mb, mi, mats = compiled
    kern.run_tracks(kinds, ma, mb, mi, mats, bits, vec)


def _sparse_apply(c, components):
    """Evolve a sparse state {index: amplitude} through a control-classical
    circuit. Returns the output as a dict."""
    n = c.n
    tmask = 1
    groups = {}
    for idx, amp in components.items():
        base = idx & ~tmask
        v = groups.setdefault(base, np.zeros(2, dtype=complex))
        v[idx & tmask] += amp
    bits = np.array(list(groups.keys()), dtype=np.int64)
    vec = np.array([groups[b] for b in bits.tolist()], dtype=complex)
    _run_tracks(_compile_tracks(c), bits, vec)
    if c.global_phase:
        vec = vec * np.exp(1j * c.global_phase)
    out = {}
    for b, v in zip(bits.tolist(), vec):
        for tbit in (0, 1):
            if v[tbit] != 0:
                out[b | (tmask * tbit)] = out.get(b | (tmask * tbit), 0) + v[tbit]
    return out


def _expected_sparse(n, u, components):
    """Analytic C^n(U) action on a sparse state."""
    all_ones = ((1 << n) - 1) & ~1  # wires 1..n-1 set, target bit clear
    groups = {}
    for idx, amp in components.items():
        base = idx & ~1
        v = groups.setdefault(base, np.zeros(2, dtype=complex))
        v[idx & 1] += amp
    out = {}
    for base, v in groups.items():
        if base == all_ones:
            v = u @ v
        for tbit in (0, 1):
            if v[tbit] != 0:
                out[base | tbit] = v[tbit]
    return out


def _sparse_dev(a, b):
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0) - b.get(k, 0)) for k in keys), default=0.0)


def equiv_sampled(c, n, u, trials=32, seed=0, tol=1e-8):
    """Statevector check of a circuit against the analytic action of the
    fully-controlled gate.

    Tests (i) the four basis states |1..1, b, b'> on the last two wires (the
    only states the gate can move, plus their nearest neighbours), (ii)
    ``trials`` seeded random basis states, (iii) ``trials`` seeded random
    superpositions. Superpositions are fully dense up to 2**16 amplitudes
    and seeded sparse combinations above that. Deterministic for a seed.
    """
    if c.n != n:
        raise ValueError("circuit size does not match n")
    if n > STATE_CAP:
        raise ValueError(f"sampled verification capped at {STATE_CAP} wires")
    u = qmath.require_unitary(u)
    rng = np.random.default_rng(seed)
    size = 1 << n

    basis = []
    if n == 1:
        basis = [0, 1]
    else:
        top = ((1 << (n - 2)) - 1) << 2  # wires 1..n-2 all set
        basis = [top | b for b in range(4)]
    basis += [int(x) for x in rng.integers(0, size, size=trials)]

    sparse_states = [{b: 1.0 + 0j} for b in basis]
    dense_states = []
    for _ in range(trials):
        if n <= DENSE_STATE_MAX_N:
            v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
            dense_states.append(v / np.linalg.norm(v))
        else:
            k = min(SPARSE_COMPONENTS, size)
            idx = rng.choice(size, size=k, replace=False)
            amps = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            amps /= np.linalg.norm(amps)
            sparse_states.append({int(i): a for i, a in zip(idx, amps)})

    max_dev = 0.0
    classical = control_classical(c)

    if sparse_states:
        if classical:
            for comp in sparse_states:
                got = _sparse_apply(c, comp)
                want = _expected_sparse(n, u, comp)
                max_dev = max(max_dev, _sparse_dev(got, want))
        else:
            dense_states.extend(_densify(comp, size) for comp in sparse_states)

    if dense_states:
        stack = np.stack(dense_states, axis=1)
        got = apply_circuit(c, stack)
        want = stack.copy()
        want[size - 2:, :] = u @ want[size - 2:, :]
        max_dev = max(max_dev, float(np.max(np.abs(got - want))))

    return EquivResult(max_dev <= tol, max_dev)


def _densify(components, size):
    v = np.zeros(size, dtype=complex)
    for i, a in components.items():
        v[i] += a
    return v


def verify_circuit(c, n, u, mode="auto", trials=8, seed=17, tol=None):
    """Post-synthesis check: dense up to 11 wires, sampled above.

    ``mode`` is 'auto', 'dense', 'sampled' or 'none' (skip, reported as
    passing; for callers that re-verify themselves).
    """
    if mode == "none":
        return EquivResult(True, float("nan"))
    if mode == "auto":
        mode = "dense" if n <= min(11, dense_cap()) else "sampled"
    if mode == "dense":
        return equiv_dense(c, cnu_unitary(n, u), tol=tol if tol else 1e-9)
    if mode == "sampled":
        return equiv_sampled(c, n, u, trials=trials, seed=seed,
                             tol=tol if tol else 1e-8)
    raise ValueError(f"unknown verification mode {mode!r}")


def reference_lambda_network(n, controls, target, works):
    """Independent recursive Toffoli realization of a multi-controlled X.

    Descending chain from the last control into the target through the work
    wires, mirrored ascent, and the whole vee repeated; 4(m-2) Toffolis for
    m controls. Work wires are restored on every input.
    """
    controls = list(controls)
    works = list(works)
    m = len(controls)
    if m < 3:
        raise ValueError("need at least 3 controls")
    if len(works) != m - 2:
        raise ValueError(f"need exactly {m - 2} work wires, got {len(works)}")
    wires = controls + works + [target]
    if len(set(wires)) != len(wires):
        raise ValueError("wires must be disjoint")

    descend = [Toffoli(controls[m - 1], works[m - 3], target)]
    for j in range(m - 2, 1, -1):
        descend.append(Toffoli(controls[j], works[j - 2], works[j - 1]))
    descend.append(Toffoli(controls[0], controls[1], works[0]))
    vee = descend + descend[1:-1][::-1]
    return Circuit(n, tuple(vee + vee))
