"""Circuit intermediate representation and passes.

Wires are 1-based, numbered from the top; execution order is the list
order. Circuits are treated as immutable values: every pass returns a new
Circuit. A tracked global phase keeps passes that delete scalar gates
exactly unitary-preserving.
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import qmath

JSON_VERSION = 1
MERGE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OneQubit:
    target: int
    u: np.ndarray
    label: str = ""

    def wires(self):
        return (self.target,)


@dataclass(frozen=True, eq=False)
class CNot:
    control: int
    target: int

    def wires(self):
        return (self.control, self.target)


@dataclass(frozen=True, eq=False)
class Toffoli:
    c1: int
    c2: int
    target: int

    def wires(self):
        return (self.c1, self.c2, self.target)


@dataclass(frozen=True, eq=False)
class ControlledU:
    control: int
    target: int
    u: np.ndarray
    label: str = ""

    def wires(self):
        return (self.control, self.target)


@dataclass(frozen=True, eq=False)
class Circuit:
    n: int
    ops: tuple = ()
    global_phase: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs at least one wire")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            w = op.wires()
            if len(set(w)) != len(w):
                raise ValueError(f"gate wires must be distinct: {op}")
            if any(not 1 <= x <= self.n for x in w):
                raise ValueError(f"gate wires out of 1..{self.n}: {op}")

    def __len__(self):
        return len(self.ops)


@dataclass(frozen=True)
class CountReport:
    cnot: int = 0
    one_qubit: int = 0
    toffoli: int = 0
    controlled_u: int = 0

    @property
    def total_basic(self):
        """cnot + one_qubit; defined only once no intermediates remain."""
        if self.toffoli or self.controlled_u:
            return None
        return self.cnot + self.one_qubit

    def __str__(self):
        parts = [f"cnot={self.cnot}", f"one_qubit={self.one_qubit}"]
        if self.toffoli or self.controlled_u:
            parts += [f"toffoli={self.toffoli}", f"controlled_u={self.controlled_u}"]
        else:
            parts.append(f"total_basic={self.total_basic}")
        return " ".join(parts)


def counts(c):
    r = {"cnot": 0, "one_qubit": 0, "toffoli": 0, "controlled_u": 0}
    for op in c.ops:
        if isinstance(op, CNot):
            r["cnot"] += 1
        elif isinstance(op, OneQubit):
            r["one_qubit"] += 1
        elif isinstance(op, Toffoli):
            r["toffoli"] += 1
        elif isinstance(op, ControlledU):
            r["controlled_u"] += 1
        else:
            raise TypeError(f"unknown gate kind: {op}")
    return CountReport(**r)


def compose(a, b):
    if a.n != b.n:
        raise ValueError(f"wire-count mismatch: {a.n} vs {b.n}")
    return Circuit(a.n, a.ops + b.ops, a.global_phase + b.global_phase)


def dagger(c):
    """Reverse the circuit, conjugating every gate; CNOT and Toffoli are
    self-inverse."""
    out = []
    for op in reversed(c.ops):
        if isinstance(op, OneQubit):
            out.append(replace(op, u=qmath.dagger(op.u),
                               label=_dagger_label(op.label)))
        elif isinstance(op, ControlledU):
            out.append(replace(op, u=qmath.dagger(op.u),
                               label=_dagger_label(op.label)))
        else:
            out.append(op)
    return Circuit(c.n, tuple(out), -c.global_phase)


def _dagger_label(label):
    if not label:
        return label
    return label[:-1] if label.endswith("†") else label + "†"


def _is_scalar_identity(u, tol):
    lam = 0.5 * (u[0, 0] + u[1, 1])
    mag = abs(lam)
    if mag < 1e-14:
        return None
    lam = lam / mag
    if np.max(np.abs(u - lam * qmath.I2)) <= tol:
        return lam
    return None


def _is_diagonal(u, tol):
    return abs(u[0, 1]) <= tol and abs(u[1, 0]) <= tol


def _commutes_with_x(u, tol):
    return np.max(np.abs(u @ qmath.PAULI_X - qmath.PAULI_X @ u)) <= tol


class _Entry:
    __slots__ = ("op", "prev", "alive")

    def __init__(self, op, prev):
        self.op = op
        self.prev = prev  # wire -> index of previous entry touching that wire
        self.alive = True


def merge_pass(c, aggressive=False, tol=MERGE_TOL):
    """Peephole pass over a basic (one-qubit + CNOT) circuit.

    Rules: (i) one-qubit gates adjacent on a wire are multiplied together;
    (ii) a (merged) gate within ``tol`` of a scalar multiple of I is deleted
    and its phase folded into the global phase; (iii) adjacent identical
    CNOTs cancel; (iv) aggressive mode additionally merges one-qubit gates
    across CNOTs they commute with (diagonal past a control, X-commuting
    past a target). Preserves the circuit unitary including global phase.
    """
    for op in c.ops:
        if isinstance(op, (Toffoli, ControlledU)):
            raise ValueError("merge_pass requires a basic circuit; run "
                             "expand_intermediates first")

    stack = []
    top = {}  # wire -> index of newest entry touching it (may be dead)
    phase = c.global_phase

    def live_top(w):
        idx = top.get(w, -1)
        while idx >= 0 and not stack[idx].alive:
            idx = stack[idx].prev[w]
        top[w] = idx
        return idx

    def push(op):
        prev = {w: live_top(w) for w in op.wires()}
        stack.append(_Entry(op, prev))
        idx = len(stack) - 1
        for w in op.wires():
            top[w] = idx

    def find_merge_target(wire, u):
        """Walk back through gates transparent to ``u`` on ``wire``;
        return the index of a one-qubit gate to merge into, or None."""
        idx = live_top(wire)
        steps = 0
        while idx >= 0 and steps < 64:
            e = stack[idx]
            if not e.alive:
                idx = e.prev[wire]
                continue
            op = e.op
            if isinstance(op, OneQubit):
                return idx
            if not aggressive or not isinstance(op, CNot):
                return None
            if op.control == wire and _is_diagonal(u, tol):
                idx = e.prev[wire]
            elif op.target == wire and _commutes_with_x(u, tol):
                idx = e.prev[wire]
            else:
                return None
            steps += 1
        return None

    def add_one_qubit(target, u, label):
        nonlocal phase
        lam = _is_scalar_identity(u, tol)
        if lam is not None:
            phase += float(np.angle(lam))
            return
        midx = find_merge_target(target, u)
        if midx is None:
            push(OneQubit(target, u, label))
            return
        e = stack[midx]
        merged = u @ e.op.u
        lam = _is_scalar_identity(merged, tol)
        if lam is not None:
            phase += float(np.angle(lam))
            e.alive = False
        else:
            e.op = OneQubit(target, merged, label or e.op.label)

    for op in c.ops:
        if isinstance(op, OneQubit):
            add_one_qubit(op.target, op.u, op.label)
        else:  # CNot
            tc = live_top(op.control)
            tt = live_top(op.target)
            if tc >= 0 and tc == tt:
                prev = stack[tc].op
                if (isinstance(prev, CNot) and prev.control == op.control
                        and prev.target == op.target):
                    stack[tc].alive = False
                    continue
            push(op)

    ops = tuple(e.op for e in stack if e.alive)
    return Circuit(c.n, ops, phase)


def expand_intermediates(c, toffoli_mode="exact"):
    """Replace ControlledU and Toffoli gates by basic-gate networks.

    ControlledU uses the ABC factorization. ``toffoli_mode`` is 'exact',
    'cmps', or a mapping from Toffoli occurrence index (0-based, in
    emission order) to one of those; missing indices default to 'exact'.
    """
    from .poly_synth import cmps_toffoli, exact_toffoli

    out = []
    phase = c.global_phase
    tof_index = 0
    for op in c.ops:
        if isinstance(op, ControlledU):
            parts = qmath.abc_decompose(op.u)
            lbl = op.label or "V"
            out.extend([
                OneQubit(op.target, parts.f, f"F[{lbl}]"),
                CNot(op.control, op.target),
                OneQubit(op.target, parts.e, f"E[{lbl}]"),
                CNot(op.control, op.target),
                OneQubit(op.target, parts.d, f"D[{lbl}]"),
                OneQubit(op.control, parts.g, f"G[{lbl}]"),
            ])
        elif isinstance(op, Toffoli):
            if isinstance(toffoli_mode, str):
                mode = toffoli_mode
            else:
                mode = toffoli_mode.get(tof_index, "exact")
            tof_index += 1
            if mode == "cmps":
                sub = cmps_toffoli(op.c1, op.c2, op.target, n=c.n)
            elif mode == "exact":
                sub = exact_toffoli(op.c1, op.c2, op.target, n=c.n)
            else:
                raise ValueError(f"unknown toffoli mode {mode!r}")
            out.extend(sub.ops)
            phase += sub.global_phase
        else:
            out.append(op)
    return Circuit(c.n, tuple(out), phase)


def structurally_equal(a, b, tol=1e-15):
    """Same gate kinds, wires and labels, matrices entrywise within tol."""
    if a.n != b.n or len(a.ops) != len(b.ops):
        return False
    if abs(a.global_phase - b.global_phase) > tol:
        return False
    for x, y in zip(a.ops, b.ops):
        if type(x) is not type(y) or x.wires() != y.wires():
            return False
        if isinstance(x, (OneQubit, ControlledU)):
            if x.label != y.label or np.max(np.abs(x.u - y.u)) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# Serialization


def emit_json(c):
    """Circuit JSON schema v1, lossless for round-tripping."""
    gates = []
    for op in c.ops:
        if isinstance(op, OneQubit):
            g = {"kind": "u", "target": op.target,
                 "matrix": qmath.matrix_to_json(op.u)}
            if op.label:
                g["label"] = op.label
        elif isinstance(op, CNot):
            g = {"kind": "cnot", "control": op.control, "target": op.target}
        elif isinstance(op, Toffoli):
            g = {"kind": "toffoli", "c1": op.c1, "c2": op.c2,
                 "target": op.target}
        elif isinstance(op, ControlledU):
            g = {"kind": "cu", "control": op.control, "target": op.target,
                 "matrix": qmath.matrix_to_json(op.u)}
            if op.label:
                g["label"] = op.label
        else:
            raise TypeError(f"unknown gate kind: {op}")
        gates.append(g)
    doc = {"version": JSON_VERSION, "n": c.n,
           "global_phase": float(c.global_phase), "gates": gates}
    return (json.dumps(doc, separators=(",", ":")) + "\n").encode("utf-8")


class CircuitFormatError(ValueError):
    pass


def parse_json(data):
    try:
        if isinstance(data, (bytes, bytearray)):
            data = data.decode("utf-8")
        doc = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CircuitFormatError(f"invalid circuit JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != JSON_VERSION:
        raise CircuitFormatError("unsupported or missing schema version")
    try:
        n = int(doc["n"])
        phase = float(doc.get("global_phase", 0.0))
        raw_gates = doc["gates"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CircuitFormatError(f"malformed document: {exc}") from None
    ops = []
    for g in raw_gates:
        try:
            kind = g["kind"]
            if kind == "u":
                u = qmath.matrix_from_json(g["matrix"])
                _check_gate_matrix(u)
                ops.append(OneQubit(int(g["target"]), u, g.get("label", "")))
            elif kind == "cnot":
                ops.append(CNot(int(g["control"]), int(g["target"])))
            elif kind == "toffoli":
                ops.append(Toffoli(int(g["c1"]), int(g["c2"]),
                                   int(g["target"])))
            elif kind == "cu":
                u = qmath.matrix_from_json(g["matrix"])
                _check_gate_matrix(u)
                ops.append(ControlledU(int(g["control"]), int(g["target"]),
                                       u, g.get("label", "")))
            else:
                raise CircuitFormatError(f"unknown gate kind {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CircuitFormatError):
                raise
            raise CircuitFormatError(f"malformed gate entry: {exc}") from None
    try:
        return Circuit(n, tuple(ops), phase)
    except ValueError as exc:
        raise CircuitFormatError(str(exc)) from None


def _check_gate_matrix(u):
    ok, dev = qmath.validate_unitary(u, tol=1e-9)
    if not ok:
        raise CircuitFormatError(f"non-unitary gate matrix (deviation {dev:.3e})")


def emit_qasm(c):
    """OpenQASM 2.0 subset for basic circuits.

    One-qubit gates become u1 (diagonal) or u3 via ZYZ angles. QASM 2 has no
    global phase, so per-gate phases are dropped; the accumulated total is
    recorded in a trailing comment and the emitted circuit equals the source
    up to that global phase.
    """
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{c.n}];"]
    dropped = float(c.global_phase)
    for op in c.ops:
        if isinstance(op, CNot):
            lines.append(f"cx q[{op.control - 1}],q[{op.target - 1}];")
        elif isinstance(op, OneQubit):
            q = op.target - 1
            if _is_diagonal(op.u, 1e-12):
                a0 = np.angle(op.u[0, 0])
                a1 = np.angle(op.u[1, 1])
                lines.append(f"u1({_fmt(a1 - a0)}) q[{q}];")
                dropped += float(a0)
            else:
                alpha, beta, gamma, delta = qmath.zyz_angles(op.u)
                lines.append(
                    f"u3({_fmt(gamma)},{_fmt(beta)},{_fmt(delta)}) q[{q}];")
                dropped += float(alpha - (beta + delta) / 2)
        else:
            raise ValueError("emit_qasm requires a basic circuit")
    lines.append(f"// dropped global phase: {_fmt(dropped)} rad")
    return "\n".join(lines) + "\n"


def _fmt(x):
    return repr(float(x))
