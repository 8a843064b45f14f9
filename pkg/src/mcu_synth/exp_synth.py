"""Exponential-complexity synthesis: Gray-code controlled-root networks.

The circuit is a chain of controlled root gates aimed at the target wire.
A basic section realizes the 3-control core; then each level beta =
1..n-4 appends 2**beta repair segments (an A block and a B block each).
Level beta applies the correction

    U ** (x * (2*s - 1) / 2),   x = AND(wires 1..beta+2), s = wire beta+3,

through controlled gates built from V_beta = U ** (1 / 2**(beta+2)), and
the stack of levels telescopes to the fully-controlled gate. The B blocks
walk wire beta+3 through a cyclic Gray sequence of parities of wires
1..beta, which is what makes the non-AND contributions cancel.

Flattened emission writes the chain directly: per controlled-root unit one
CNOT into the target (a parity delta), a phase gate on the carrier wire
and one rotation letter on the target, so that adjacent units share their
boundary rotations. After merging, the one-qubit count is exactly 2**n
(plus one unmergeable letter per level boundary) and the CNOT count is
9/8 of 2**n - 2; the residuals are quantified in the reporting module.
"""

from dataclasses import dataclass

import numpy as np

from . import oracle, qmath
from .circuit import Circuit, CNot, ControlledU, OneQubit, counts, merge_pass
from .graycode import gamma
from .poly_synth import SynthesisError

MAX_WIRES = 26


@dataclass(frozen=True)
class LevelParts:
    beta: int
    v: np.ndarray
    parts: qmath.ABCParts


@dataclass(frozen=True)
class ExpPlan:
    """Per-level roots and factor decompositions for one synthesis."""

    n: int
    u: np.ndarray
    base_unitary: np.ndarray  # unitary realized by the embedded 4-wire part
    base_root: np.ndarray     # chain root inside that part
    levels: tuple             # LevelParts for beta = 1..n-4


def make_plan(n, u):
    if not 1 <= n <= MAX_WIRES:
        raise ValueError(f"n must be in 1..{MAX_WIRES}")
    u = qmath.require_unitary(u)
    base_unitary = qmath.principal_root(u, n - 4) if n > 4 else u
    depth = {1: 0, 2: 0, 3: 1, 4: 2}[min(n, 4)]
    base_root = qmath.principal_root(base_unitary, depth)
    # Every level shares the one chain root V with V**(2**(n-2)) = U; the
    # level corrections then telescope exactly (a level with 2**beta
    # segments swings the target by V**(2**(beta+1)), which is half the
    # weight the level below it still owes). Per-level roots of depth
    # beta+2 only agree with this at the top level and do not verify.
    levels = []
    if n >= 5:
        v = qmath.principal_root(u, n - 2)
        parts = qmath.abc_decompose(v)
        levels = [LevelParts(beta=b, v=v, parts=parts)
                  for b in range(1, n - 3)]
    return ExpPlan(n=n, u=u, base_unitary=base_unitary, base_root=base_root,
                   levels=tuple(levels))


# Gray-walk tables for the basic section: per controlled-root unit the wire
# that fires the parity delta into the target, the control-side re-encode
# CNOT (or None), the wire carrying the parity (gets the phase gate), and
# the unit's orientation. The chain closes with one more CNOT from
# ``close`` into the target.
_BASE_WALK = {
    3: {
        "steps": [(1, None, 1, +1), (2, (1, 2), 2, -1), (1, (1, 2), 2, +1)],
        "close": 2,
    },
    4: {
        "steps": [
            (1, None, 1, +1),
            (2, (1, 2), 2, -1),
            (1, (1, 2), 2, +1),
            (3, (2, 3), 3, -1),
            (1, (1, 3), 3, +1),
            (2, (2, 3), 3, -1),
            (1, (1, 3), 3, +1),
        ],
        "close": 3,
    },
}


def _check_base_args(n, total_wires, target_wire):
    if not 1 <= n <= 4:
        raise ValueError("basic section covers 1..4 controls+target")
    if target_wire <= n - 1 or target_wire > total_wires:
        raise ValueError("target wire must lie beyond the control block")


def exp_base(n, u, total_wires, target_wire):
    """Block-level basic section: controlled chain roots and control-side
    CNOTs on wires 1..n-1 with the target at ``target_wire``."""
    _check_base_args(n, total_wires, target_wire)
    u = qmath.require_unitary(u)
    t = target_wire
    if n == 1:
        return Circuit(total_wires, (OneQubit(t, u, "U"),))
    if n == 2:
        return Circuit(total_wires, (ControlledU(1, t, u, "U"),))
    depth = {3: 1, 4: 2}[n]
    v = qmath.principal_root(u, depth)
    vd = qmath.dagger(v)
    lbl = f"W^(1/{2 ** depth})"
    ops = []
    for xw, enc, carrier, sign in _BASE_WALK[n]["steps"]:
        if enc:
            ops.append(CNot(*enc))
        ops.append(ControlledU(carrier, t, v if sign > 0 else vd,
                               lbl if sign > 0 else lbl + "†"))
    return Circuit(total_wires, tuple(ops))


def _base_flat_ops(n, u, target_wire):
    """Flattened basic section: the shared-letter chain."""
    t = target_wire
    if n == 1:
        return [OneQubit(t, u, "U")]
    if n == 2:
        p = qmath.abc_decompose(u)
        return [
            OneQubit(t, p.f, "F"), CNot(1, t), OneQubit(t, p.e, "E"),
            CNot(1, t), OneQubit(t, p.d, "D"), OneQubit(1, p.g, "G"),
        ]
    depth = {3: 1, 4: 2}[n]
    v = qmath.principal_root(u, depth)
    p = qmath.abc_decompose(v)
    ed, gd = qmath.dagger(p.e), qmath.dagger(p.g)
    ops = [OneQubit(t, p.f, "F")]
    for xw, enc, carrier, sign in _BASE_WALK[n]["steps"]:
        ops.append(CNot(xw, t))
        if enc:
            ops.append(CNot(*enc))
        if sign > 0:
            ops.append(OneQubit(carrier, p.g, "G"))
            ops.append(OneQubit(t, p.e, "E"))
        else:
            ops.append(OneQubit(carrier, gd, "G†"))
            ops.append(OneQubit(t, ed, "E†"))
    ops.append(CNot(_BASE_WALK[n]["close"], t))
    ops.append(OneQubit(t, p.d, "D"))
    return ops


def _level_wires(beta, n):
    p, q, s = beta + 1, beta + 2, beta + 3
    if s >= n:
        raise ValueError("level does not fit the wire count")
    return p, q, s


def a_block(beta, n, plan):
    """Fixed repair block of level beta: wires beta+1..beta+3 and the
    target; three re-encode CNOTs alternating with controlled roots."""
    p, q, s = _level_wires(beta, n)
    lv = plan.levels[beta - 1]
    vd = qmath.dagger(lv.v)
    lbl = f"V{beta}"
    return Circuit(n, (
        CNot(q, s),
        ControlledU(s, n, vd, lbl + "†"),
        CNot(p, s),
        ControlledU(s, n, lv.v, lbl),
        CNot(q, s),
        ControlledU(s, n, vd, lbl + "†"),
    ))


def b_block(gamma_val, beta, n, plan):
    """Gray-indexed repair block: re-encode from wire ``gamma_val`` and one
    controlled root."""
    if not 1 <= gamma_val <= beta:
        raise ValueError("gamma index out of range for this level")
    _, _, s = _level_wires(beta, n)
    lv = plan.levels[beta - 1]
    return Circuit(n, (
        CNot(gamma_val, s),
        ControlledU(s, n, lv.v, f"V{beta}"),
    ))


def _segment_flat_ops(beta, gamma_val, parts, n):
    """Flattened A+B segment: 9 CNOTs and 10 one-qubit gates.

    The A part carries 6 CNOTs and 7 one-qubit gates, the B part 3 and 3.
    Adjacent segments cancel their boundary D/D† letters under merging.
    """
    p, q, s = beta + 1, beta + 2, beta + 3
    d, e, f, g = parts.d, parts.e, parts.f, parts.g
    dd, ed, gd = qmath.dagger(d), qmath.dagger(e), qmath.dagger(g)
    return [
        OneQubit(n, dd, "D†"),
        CNot(q, s),
        CNot(s, n),
        OneQubit(s, gd, "G†"),
        OneQubit(n, ed, "E†"),
        CNot(p, s),
        CNot(p, n),
        OneQubit(s, g, "G"),
        OneQubit(n, e, "E"),
        CNot(q, s),
        CNot(q, n),
        OneQubit(s, gd, "G†"),
        OneQubit(n, ed, "E†"),
        CNot(gamma_val, s),
        CNot(gamma_val, n),
        OneQubit(s, g, "G"),
        OneQubit(n, e, "E"),
        CNot(s, n),
        OneQubit(n, d, "D"),
    ]


def exp_synthesize(n, u, flatten=False, merge=False, verify="auto",
                   trials=8, seed=17, tol=None, info=None):
    """Synthesize the fully-controlled gate with the exponential scheme.

    Emits the basic section then, for each level, the alternating A/B
    segments with B indices from the cyclic Gray walk. The output is
    verified against the oracle and synthesis fails loudly otherwise.
    """
    if info is None:
        info = {}
    info.setdefault("errata", [])
    info["scheme"] = "exponential"
    if merge and not flatten:
        raise ValueError("merge requires flatten")
    plan = make_plan(n, u)
    nb = min(n, 4)

    ops = []
    if flatten:
        ops.extend(_base_flat_ops(nb, plan.base_unitary, n))
        for lv in plan.levels:
            for alpha in range(1, (1 << lv.beta) + 1):
                ops.extend(_segment_flat_ops(
                    lv.beta, gamma(alpha, lv.beta), lv.parts, n))
    else:
        ops.extend(exp_base(nb, plan.base_unitary, n, n).ops)
        for lv in plan.levels:
            for alpha in range(1, (1 << lv.beta) + 1):
                ops.extend(a_block(lv.beta, n, plan).ops)
                ops.extend(b_block(gamma(alpha, lv.beta), lv.beta, n,
                                   plan).ops)

    c = Circuit(n, tuple(ops))
    if merge:
        c = merge_pass(c, aggressive=True)
    result = oracle.verify_circuit(c, n, u, verify, trials, seed, tol)
    if not result.equal:
        raise SynthesisError(
            f"exponential synthesis failed verification "
            f"(deviation {result.max_dev:.3e})")
    info["max_dev"] = result.max_dev
    info["counts"] = counts(c)
    return c
