"""Polynomial-complexity synthesis: Toffoli lattices and the cascade.

The cascade peels one control per level k = 7..n: two four-lattice
multi-controlled-X groups ``T`` around two-qubit controlled roots,

    [T, CU(k-1 -> n, V†), T, CU(k-1 -> n, V)],   T = m1net m2net m1net m2net,

on top of a reconstructed 6-control base. Root tower: the level-k
controlled gates use the (n-k+1)-th principal square root of U.

Toffoli gates are lowered to basic gates per a substitution policy:
either the exact 6-CNOT network or the 7-operation
congruent-modulo-phase-shift (CMPS) form, whose lone defect is a -1 phase
on basis states with c1=1, c2=0, target=1. CMPS placement is licensed by
default everywhere outside the 6-control base plus eight positions inside
it; every synthesis is verified against the oracle, and on failure the
policy automatically falls back to exact substitution (first for the
top-level lattice gates that touch the target wire, then everywhere).
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import qmath
from .circuit import (Circuit, CNot, ControlledU, OneQubit, Toffoli, counts,
                      expand_intermediates, merge_pass)

PAPER_C6_CMPS_POSITIONS = frozenset({4, 6, 8, 10, 15, 20, 25, 30})


class SynthesisError(RuntimeError):
    """Raised when a synthesized circuit fails oracle verification."""


@dataclass(frozen=True)
class LatticeParams:
    """Index-pattern constants of the two Toffoli lattices at level k."""

    k: int
    m1: int
    m2: int
    d: int
    dprime: int
    i0: int
    j0: int

    @classmethod
    def for_level(cls, k):
        if k < 4:
            raise ValueError("lattice split needs k >= 4")
        m1 = k // 2
        m2 = k - m1 - 1
        p = cls(k=k, m1=m1, m2=m2, d=2 * m1 - 4, dprime=2 * k - 2 * m1 - 6,
                i0=m1 - 1, j0=k - m1 - 2)
        assert p.m1 + p.m2 == k - 1
        assert p.d == 2 * (p.m1 - 2) and p.dprime == 2 * (p.m2 - 2)
        assert p.i0 == p.m1 - 1 and p.j0 == p.m2 - 1
        return p


def split_m(k):
    """Control split (m1, m2) with m1 + m2 = k - 1."""
    if k < 4:
        raise ValueError("split needs k >= 4")
    m1 = k // 2
    return m1, k - m1 - 1


def dev_f(i, k):
    """Deviation of lattice index i from the m1 pattern center.

    Integer closed form of the published arctan/tan expression; equal to it
    at every non-singular point and defined by the one-sided limit at
    multiples of the period.
    """
    p = LatticeParams.for_level(k)
    if not 1 <= i <= 2 * p.d:
        raise ValueError(f"i must be in 1..{2 * p.d}")
    return abs(((i - 1) % p.d) + 1 - p.i0)


def dev_g(j, k):
    """Deviation of lattice index j from the m2 pattern center."""
    p = LatticeParams.for_level(k)
    if not 1 <= j <= 2 * p.dprime:
        raise ValueError(f"j must be in 1..{2 * p.dprime}")
    return abs(((j - 1) % p.dprime) + 1 - p.j0)


def _m1_ops(k, target_map=None):
    """Toffoli list of the m1 lattice at level k, per the closed-form index
    pattern. Controls 1..m1, target wire k, works k-1 down to m2+3."""
    p = LatticeParams.for_level(k)
    if p.m1 < 3:
        raise ValueError("m1 lattice needs k >= 6")
    remap = target_map or (lambda w: w)
    ops = []
    tops = []
    for i in range(1, 4 * p.m1 - 8 + 1):
        f = dev_f(i, k)
        a = 2 + f
        if i == p.i0 or i == p.i0 + p.d:
            b = 1
        else:
            b = 1 + (k - k // 2 + f)
        c = k - k // 2 + 2 + f
        ops.append(Toffoli(a, remap(b), remap(c)))
        tops.append(f == p.m1 - 2)
    return ops, tops


def _m2_ops(k, target_map=None):
    """Toffoli list of the m2 lattice at level k. Controls m1+1..k-2 plus
    wire k, target k-1, works among the low wires."""
    p = LatticeParams.for_level(k)
    if p.m2 < 3:
        raise ValueError("m2 lattice needs k >= 7")
    remap = target_map or (lambda w: w)
    ops = []
    for j in range(1, 4 * k - 4 * (k // 2) - 12 + 1):
        g = dev_g(j, k)
        if j == p.j0 or j == p.j0 + p.dprime:
            a = k
        else:
            a = k + (2 * (k // 2) - 2 * k + 3 + g)
        b = k - 2 - g
        if j == 1 or j == 2 * k - 2 * (k // 2) - 5:
            c = k - 1
        else:
            c = k - 1 + (2 * (k // 2) - 2 * k + 5 + g)
        ops.append(Toffoli(remap(a), b, c))
    return ops


def lambda_m1_net(k):
    """Closed-form Toffoli lattice for the m1 multi-controlled X."""
    ops, _ = _m1_ops(k)
    return Circuit(k, tuple(ops))


def lambda_m2_net(k):
    """Closed-form Toffoli lattice for the m2 multi-controlled X."""
    return Circuit(k, tuple(_m2_ops(k)))


def cmps_toffoli(a, b, c, n=None):
    """Toffoli congruent modulo phase shift: 7 basic operations.

    Exact except for a -1 phase on basis states with a=1, b=0, c=1; valid
    only where those phases cancel across the surrounding circuit.
    """
    if len({a, b, c}) != 3:
        raise ValueError("wires must be distinct")
    n = n or max(a, b, c)
    r = qmath.ry(np.pi / 4)
    rd = qmath.dagger(r)
    ops = (
        OneQubit(c, r, "R"),
        CNot(b, c),
        OneQubit(c, r, "R"),
        CNot(a, c),
        OneQubit(c, rd, "R†"),
        CNot(b, c),
        OneQubit(c, rd, "R†"),
    )
    return Circuit(n, ops)


def exact_toffoli(a, b, c, n=None):
    """Standard exact Toffoli network: 6 CNOTs and 9 one-qubit gates."""
    if len({a, b, c}) != 3:
        raise ValueError("wires must be distinct")
    n = n or max(a, b, c)
    h = qmath.HADAMARD
    t = qmath.named_gate("T")
    td = qmath.dagger(t)
    ops = (
        OneQubit(c, h, "H"),
        CNot(b, c),
        OneQubit(c, td, "T†"),
        CNot(a, c),
        OneQubit(c, t, "T"),
        CNot(b, c),
        OneQubit(c, td, "T†"),
        CNot(a, c),
        OneQubit(b, t, "T"),
        OneQubit(c, t, "T"),
        OneQubit(c, h, "H"),
        CNot(a, b),
        OneQubit(a, t, "T"),
        OneQubit(b, td, "T†"),
        CNot(a, b),
    )
    return Circuit(n, ops)


# ---------------------------------------------------------------------------
# The reconstructed 6-control base


@dataclass
class _Emission:
    """Block-level op list plus one tag per Toffoli occurrence."""

    ops: list = field(default_factory=list)
    tags: list = field(default_factory=list)

    def add(self, op, tag=None):
        self.ops.append(op)
        if isinstance(op, Toffoli):
            self.tags.append(tag or {})

    def extend(self, ops, tags):
        for op, tag in zip(ops, tags):
            self.add(op, tag)


def _c6_emit(n, w):
    """Recursive 6-control base: 30 Toffolis, 9 controlled gates, 2 CNOTs.

    Controls 1..5, target wire n (the base is laid out with any extra wires
    between its fifth and last qubit). The multi-controlled-X group of
    level k uses wire k as scratch; at the widest level that scratch is the
    target wire itself, used catalytically.
    """
    if n < 6:
        raise ValueError("the 6-control base needs n >= 6")
    w = qmath.require_unitary(w)
    roots = {6: np.asarray(w, dtype=complex)}
    for k in (5, 4, 3):
        roots[k] = qmath.principal_root(roots[k + 1], 1)
    v = qmath.principal_root(roots[3], 1)

    em = _Emission()
    pos = 0

    def tof(a, b, c, m1_top=False):
        nonlocal pos
        pos += 1
        em.add(Toffoli(a, b, c), {"part": "c6", "pos": pos, "m1_top": m1_top})

    def group4():
        tof(1, 2, 3)

    def group5():
        for _ in range(2):
            tof(1, 2, 5)
            tof(5, 3, 4)

    def group6():
        m1ops, m1tops = _m1_ops(6, target_map=lambda x: n if x == 6 else x)
        for _ in range(2):
            for op, top in zip(m1ops, m1tops):
                tof(op.c1, op.c2, op.target, m1_top=top)
            tof(n, 4, 5)

    # 2-control core on wires 1, 2 -> n
    em.add(ControlledU(1, n, v, "W^1/16"))
    em.add(CNot(1, 2))
    em.add(ControlledU(2, n, qmath.dagger(v), "W^1/16†"))
    em.add(CNot(1, 2))
    em.add(ControlledU(2, n, v, "W^1/16"))

    for k, group in ((4, group4), (5, group5), (6, group6)):
        u = roots[k - 1]
        label = f"W^(1/{2 ** (7 - k)})"
        group()
        em.add(ControlledU(k - 1, n, qmath.dagger(u), label + "†"))
        group()
        em.add(ControlledU(k - 1, n, u, label))

    return em


def c6_base(n, w):
    """Six-control controlled-``w`` on controls 1..5 and target n, built
    from Toffolis, two-qubit controlled roots and two CNOTs."""
    em = _c6_emit(n, w)
    return Circuit(n, tuple(em.ops))


# ---------------------------------------------------------------------------
# Cascade and substitution policy


@dataclass(frozen=True)
class ToffoliPolicy:
    """Per-occurrence choice between exact and CMPS Toffoli substitution.

    ``c6_cmps``: 1-based positions inside the 6-control base allowed to use
    CMPS, or None for every position that verification does not force to
    exact form (the eight lattice gates that touch the target wire).
    ``cascade_mode``: mode for every lattice Toffoli outside the base.
    ``top_level_exact`` forces the top-level lattice gates that target the
    last wire to exact form. ``overrides`` maps global Toffoli occurrence
    indices (0-based) to explicit modes.

    The default is the widest placement that passes verification. The
    published placement (eight listed base positions, everything outside
    the base) is available as ``paper_license()``; its blanket license for
    the top cascade level does not verify and triggers the automatic
    fallback.
    """

    c6_cmps: object = None
    cascade_mode: str = "cmps"
    top_level_exact: bool = True
    overrides: tuple = ()

    @classmethod
    def safe_default(cls):
        return cls()

    @classmethod
    def paper_license(cls):
        return cls(c6_cmps=PAPER_C6_CMPS_POSITIONS, top_level_exact=False)

    @classmethod
    def all_exact(cls):
        return cls(c6_cmps=frozenset(), cascade_mode="exact",
                   top_level_exact=True)

    def mode_map(self, tags, n):
        """Resolve to {occurrence index: mode} for expand_intermediates."""
        overrides = dict(self.overrides)
        modes = {}
        for i, tag in enumerate(tags):
            if i in overrides:
                modes[i] = overrides[i]
            elif tag.get("part") == "c6":
                if self.c6_cmps is None:
                    modes[i] = "exact" if tag.get("m1_top") else "cmps"
                else:
                    modes[i] = "cmps" if tag["pos"] in self.c6_cmps else "exact"
            else:
                if (self.top_level_exact and tag.get("k") == n
                        and tag.get("m1_top")):
                    modes[i] = "exact"
                else:
                    modes[i] = self.cascade_mode
        return modes


def _poly_emit(n, u):
    """Block-level cascade: the 6-control base then levels k = 7..n."""
    em = _c6_emit(n, qmath.principal_root(u, n - 6))
    for k in range(7, n + 1):
        i = n - k + 1
        v = qmath.principal_root(u, i)
        label = f"U^(1/{2 ** i})"
        m1ops, m1tops = _m1_ops(k)
        m2ops = _m2_ops(k)

        def lattice_group():
            for _ in range(2):
                for op, top in zip(m1ops, m1tops):
                    em.add(op, {"part": "cascade", "k": k, "m1_top": top})
                for op in m2ops:
                    em.add(op, {"part": "cascade", "k": k, "m1_top": False})

        lattice_group()
        em.add(ControlledU(k - 1, n, qmath.dagger(v), label + "†"))
        lattice_group()
        em.add(ControlledU(k - 1, n, v, label))
    return em


def poly_synthesize(n, u, policy=None, flatten=False, merge=False,
                    verify="auto", trials=8, seed=17, tol=None, info=None):
    """Synthesize the fully-controlled gate with the polynomial scheme.

    Wire counts below 7 are outside the lattice constructions and delegate
    to the exponential scheme. Every output is verified against the oracle
    (``verify='none'`` skips, for callers that re-verify themselves); a
    CMPS-substituted circuit that fails verification falls back per gate to
    exact substitution and records the event in ``info['errata']``.
    """
    from . import oracle
    from .exp_synth import exp_synthesize

    if info is None:
        info = {}
    info.setdefault("errata", [])
    if merge and not flatten:
        raise ValueError("merge requires flatten")
    if n < 7:
        info["scheme"] = "exponential-fallback"
        info["errata"].append(
            f"n={n} below the polynomial scheme's range; used the "
            "exponential scheme")
        return exp_synthesize(n, u, flatten=flatten, merge=merge,
                              verify=verify, trials=trials, seed=seed,
                              tol=tol, info=info)
    info["scheme"] = "polynomial"
    u = qmath.require_unitary(u)
    em = _poly_emit(n, u)
    block = Circuit(n, tuple(em.ops))
    info["block_counts"] = counts(block)

    if not flatten:
        result = oracle.verify_circuit(block, n, u, verify, trials, seed, tol)
        if not result.equal:
            raise SynthesisError(
                f"block-level cascade failed verification (dev {result.max_dev:.3e})")
        info["max_dev"] = result.max_dev
        return block

    if policy is None:
        policy = ToffoliPolicy.safe_default()

    attempts = [policy]
    if not policy.top_level_exact:
        attempts.append(replace(policy, top_level_exact=True))
    if policy != ToffoliPolicy.all_exact():
        attempts.append(ToffoliPolicy.all_exact())

    last_dev = None
    for stage, pol in enumerate(attempts):
        modes = pol.mode_map(em.tags, n)
        flat = expand_intermediates(block, modes)
        info["flat_counts"] = counts(flat)
        if merge:
            flat = merge_pass(flat, aggressive=False)
        result = oracle.verify_circuit(flat, n, u, verify, trials, seed, tol)
        if result.equal:
            if stage > 0:
                info["errata"].append(
                    "requested CMPS placement failed verification; fell "
                    f"back per gate to exact (stage {stage}: "
                    f"top_level_exact={pol.top_level_exact}, "
                    f"cascade={pol.cascade_mode})")
            info["policy"] = pol
            info["toffoli_modes"] = modes
            info["max_dev"] = result.max_dev
            return flat
        last_dev = result.max_dev

    raise SynthesisError(
        f"polynomial synthesis failed verification after fallback "
        f"(last deviation {last_dev:.3e})")
