"""Complex 2x2 linear algebra for one-qubit gates.

Conventions used throughout the package:
  Rz(t) = diag(exp(-it/2), exp(it/2))
  Ry(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
  V = exp(i*alpha) Rz(beta) Ry(gamma) Rz(delta)   (matrix product)

The ABC factorization turns a controlled one-qubit gate into two CNOTs,
three one-qubit gates and a phase gate on the control: with DEF = I and
exp(ia) D X E X F = V, a controlled-V from wire c to wire t is
[F(t), CNOT(c,t), E(t), CNOT(c,t), D(t), diag(1, exp(ia))(c)] in
execution order.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur
from scipy.stats import unitary_group

TOL_ALGEBRA = 1e-10
TOL_INPUT = 1e-12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

_PARAMETERIZED = {"phase", "rx", "ry", "rz", "random"}
_NAMED = {"I", "X", "Y", "Z", "H", "S", "T"}


@dataclass(frozen=True)
class ABCParts:
    """Phase a and one-qubit factors with d @ e @ f = I and
    exp(ia) d X e X f = V."""

    a: float
    d: np.ndarray
    e: np.ndarray
    f: np.ndarray

    @property
    def g(self):
        """Phase gate diag(1, exp(ia)) placed on the control wire."""
        return phase_gate(self.a)


def rx(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta):
    return np.array(
        [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex
    )


def phase_gate(a):
    return np.array([[1, 0], [0, np.exp(1j * a)]], dtype=complex)


def dagger(m):
    return np.ascontiguousarray(m.conj().T)


def named_gate(name, param=None):
    """Build a standard one-qubit gate by name.

    Parameterized names (phase, rx, ry, rz) require ``param`` as an angle in
    radians; ``random`` requires ``param`` as an integer seed and returns a
    Haar-random unitary, deterministic for the seed. Fixed names reject a
    parameter.
    """
    if name in _NAMED:
        if param is not None:
            raise ValueError(f"gate {name!r} takes no parameter")
        return {
            "I": I2,
            "X": PAULI_X,
            "Y": PAULI_Y,
            "Z": PAULI_Z,
            "H": HADAMARD,
            "S": np.diag([1, 1j]).astype(complex),
            "T": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
        }[name].copy()
    if name not in _PARAMETERIZED:
        raise ValueError(f"unknown gate name {name!r}")
    if param is None:
        raise ValueError(f"gate {name!r} requires a parameter")
    if name == "random":
        return np.asarray(unitary_group.rvs(2, random_state=int(param)), dtype=complex)
    fn = {"phase": phase_gate, "rx": rx, "ry": ry, "rz": rz}[name]
    return fn(float(param))


def validate_unitary(m, tol=TOL_INPUT):
    """Return (is_unitary, max deviation of M†M from I)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    dev = float(np.max(np.abs(m.conj().T @ m - I2)))
    return dev <= tol, dev


def require_unitary(m, tol=TOL_INPUT, what="matrix"):
    ok, dev = validate_unitary(m, tol)
    if not ok:
        raise ValueError(f"{what} is not unitary (deviation {dev:.3e})")
    return np.asarray(m, dtype=complex)


def principal_root(u, k):
    """Principal 2**k-th root: eigenphases taken in (-pi, pi] divided by 2**k.

    Satisfies root**(2**k) == u and the tower property
    principal_root(u, k) == principal_root(principal_root(u, 1), k - 1).
    """
    u = require_unitary(u)
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return u.copy()
    off = max(abs(u[0, 1]), abs(u[1, 0]))
    if off < 1e-14 and abs(u[0, 0] - u[1, 1]) < 1e-14:
        # Scalar multiple of I: avoid eigenvector instability.
        theta = np.angle(u[0, 0])
        return np.exp(1j * theta / 2**k) * I2
    tmat, q = schur(u, output="complex")
    phases = np.angle(np.diag(tmat))  # in (-pi, pi]
    root = q @ np.diag(np.exp(1j * phases / 2**k)) @ q.conj().T
    return np.ascontiguousarray(root)


def zyz_angles(v):
    """Euler angles with exp(ia)Rz(b)Ry(g)Rz(d) = v, g in [0, pi].

    At g in {0, pi} the redundant angle is fixed by d = 0 so the
    factorization is unique and circuits built from it reproduce exactly.
    """
    v = require_unitary(v)
    alpha = np.angle(np.linalg.det(v)) / 2
    su = np.exp(-1j * alpha) * v
    gamma = 2 * np.arctan2(abs(su[1, 0]), abs(su[0, 0]))
    c = np.cos(gamma / 2)
    s = np.sin(gamma / 2)
    if s <= 1e-12:
        beta = -2 * np.angle(su[0, 0])
        delta = 0.0
    elif c <= 1e-12:
        beta = 2 * np.angle(su[1, 0])
        delta = 0.0
    else:
        ang00 = np.angle(su[0, 0])
        ang10 = np.angle(su[1, 0])
        beta = -ang00 + ang10
        delta = -ang00 - ang10
    return float(alpha), float(beta), float(gamma), float(delta)


def zyz_reconstruct(alpha, beta, gamma, delta):
    return np.exp(1j * alpha) * (rz(beta) @ ry(gamma) @ rz(delta))


def abc_decompose(v):
    """ABC factorization of a unitary: DEF = I, exp(ia) D X E X F = V."""
    alpha, beta, gamma, delta = zyz_angles(v)
    d = rz(beta) @ ry(gamma / 2)
    e = ry(-gamma / 2) @ rz(-(delta + beta) / 2)
    f = rz((delta - beta) / 2)
    return ABCParts(a=alpha, d=d, e=e, f=f)


def matrix_to_json(m):
    """Row-major 2x2 with [re, im] pairs, the JSON form used everywhere."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(obj):
    try:
        m = np.array(
            [[complex(e[0], e[1]) for e in row] for row in obj], dtype=complex
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from None
    if m.shape != (2, 2):
        raise ValueError("matrix JSON must be 2x2")
    return m
