"""Single-qubit gates, Haar sampling and conditional gates on a 3-neuron register.

Basis convention: ``|s1 s2 s3>`` is stored at index ``4*s1 + 2*s2 + s3``
(neuron 1 is the most significant bit).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

UNITARY_TOL = 1e-12
N_NEURONS = 3
DIM = 2**N_NEURONS
_SNAP = 4 * np.finfo(float).eps

_PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY2 = np.eye(2, dtype=complex)


def pauli(j: int) -> np.ndarray:
    """Return the Pauli matrix sigma_j for j in {1, 2, 3}."""
    if j not in _PAULI:
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {j!r}")
    return _PAULI[j].copy()


def unitarity_error(u: np.ndarray) -> float:
    """Max-abs entry of ``U^dagger U - I``."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return unitarity_error(u) < tol


@dataclass(frozen=True)
class HamiltonianParams:
    """Angles of a single-neuron gate: the products omega*dt/2 and theta*dt/2 and the axis u."""

    omega_half: float
    theta_half: float
    u: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        u = tuple(float(c) for c in self.u)
        if len(u) != 3:
            raise ValueError("rotation axis must have 3 components")
        object.__setattr__(self, "u", u)


def gate_from_hamiltonian(p: HamiltonianParams) -> np.ndarray:
    """exp(i*omega_half) * [cos(theta_half) I - i sin(theta_half) u.sigma]."""
    u = np.asarray(p.u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > UNITARY_TOL:
        raise ValueError(f"rotation axis must be a unit vector, got norm {np.linalg.norm(u)!r}")
    u_sigma = u[0] * _PAULI[1] + u[1] * _PAULI[2] + u[2] * _PAULI[3]
    rot = np.cos(p.theta_half) * IDENTITY2 - 1j * np.sin(p.theta_half) * u_sigma
    g = np.exp(1j * p.omega_half) * rot
    # drop rounding residue such as cos(pi/2) so Pauli-type gates come out exact
    re, im = g.real.copy(), g.imag.copy()
    re[np.abs(re) < _SNAP] = 0.0
    im[np.abs(im) < _SNAP] = 0.0
    return re + 1j * im


def haar_random_u2(rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed element of U(2).

    Uses ``e^{ia} [[e^{ip} cos t, e^{ic} sin t], [-e^{-ic} sin t, e^{-ip} cos t]]``
    with a, p, c uniform on [0, 2pi) and cos^2 t uniform on [0, 1).
    """
    alpha, psi, chi = rng.uniform(0.0, 2.0 * np.pi, size=3)
    cos_t = np.sqrt(rng.random())
    sin_t = np.sqrt(1.0 - cos_t * cos_t)
    return np.exp(1j * alpha) * np.array(
        [
            [np.exp(1j * psi) * cos_t, np.exp(1j * chi) * sin_t],
            [-np.exp(-1j * chi) * sin_t, np.exp(-1j * psi) * cos_t],
        ]
    )


@dataclass(frozen=True)
class ConditionalGateSpec:
    """Gate on ``target_neuron`` chosen by the bit pattern of ``control_neurons``.

    Neurons are numbered 1..3. ``gate_map`` keys are tuples of control bits in
    the same order as ``control_neurons``.
    """

    target_neuron: int
    control_neurons: tuple[int, ...]
    gate_map: Mapping[tuple[int, ...], np.ndarray] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "control_neurons", tuple(self.control_neurons))
        neurons = (self.target_neuron, *self.control_neurons)
        if any(n not in (1, 2, 3) for n in neurons):
            raise ValueError(f"neuron indices must be in 1..3, got {neurons}")
        if self.target_neuron in self.control_neurons:
            raise ValueError("target neuron cannot also be a control")
        if len(set(self.control_neurons)) != len(self.control_neurons):
            raise ValueError("duplicate control neuron")


def bits_of(index: int) -> tuple[int, int, int]:
    """Neuron bits (s1, s2, s3) of a basis index."""
    return (index >> 2) & 1, (index >> 1) & 1, index & 1


def index_of(bits) -> int:
    s1, s2, s3 = bits
    return 4 * s1 + 2 * s2 + s3


def build_conditional_gate(spec: ConditionalGateSpec) -> np.ndarray:
    """Assemble the 8x8 neural-links operator for one conditioned neuron.

    The result is the block sum over control patterns c of
    ``|c><c| (x) G(c)`` with ``G(c)`` acting on the target and identity on
    any neuron that is neither target nor control.
    """
    patterns = list(itertools.product((0, 1), repeat=len(spec.control_neurons)))
    gates = {}
    for pattern in patterns:
        if pattern not in spec.gate_map:
            raise ValueError(f"gate_map has no entry for control pattern {pattern}")
        g = np.asarray(spec.gate_map[pattern], dtype=complex)
        if g.shape != (2, 2) or not is_unitary(g):
            raise ValueError(f"gate for pattern {pattern} is not a 2x2 unitary")
        gates[pattern] = g

    t = spec.target_neuron - 1
    op = np.zeros((DIM, DIM), dtype=complex)
    for col in range(DIM):
        bits = bits_of(col)
        g = gates[tuple(bits[c - 1] for c in spec.control_neurons)]
        for out_bit in (0, 1):
            row_bits = list(bits)
            row_bits[t] = out_bit
            op[index_of(row_bits), col] += g[out_bit, bits[t]]
    return op
