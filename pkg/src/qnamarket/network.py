"""The 3-neuron recurrent network of one market component.

Neuron 3 holds the component's market state, neuron 1 the incoming market
conditions, and neuron 2 selects between the follow-the-news and contrarian
rules.  One trading round applies ``L_net = L3 @ L2 @ L1``.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .gates import (
    DIM,
    IDENTITY2,
    ConditionalGateSpec,
    HamiltonianParams,
    build_conditional_gate,
    gate_from_hamiltonian,
    is_unitary,
)

NORM_TOL = 1e-10


def phi_from_sin2(sin2phi: float) -> float:
    """Rotation angle in [0, pi/2] with the given sin^2."""
    if not 0.0 <= sin2phi <= 1.0:
        raise ValueError(f"sin^2(phi) must lie in [0, 1], got {sin2phi!r}")
    return float(np.arctan2(np.sqrt(sin2phi), np.sqrt(1.0 - sin2phi)))


def l1(phi: float) -> np.ndarray:
    """Neuron 1 rotated conditionally on neuron 3 (regime-switching link)."""
    x = (1.0, 0.0, 0.0)
    quiet = gate_from_hamiltonian(HamiltonianParams(np.pi, phi + np.pi / 2, x))
    firing = gate_from_hamiltonian(HamiltonianParams(np.pi / 2, phi, x))
    return build_conditional_gate(
        ConditionalGateSpec(target_neuron=1, control_neurons=(3,), gate_map={(0,): quiet, (1,): firing})
    )


def _flip() -> np.ndarray:
    return gate_from_hamiltonian(HamiltonianParams(np.pi / 2, np.pi / 2, (1.0, 0.0, 0.0)))


def l2() -> np.ndarray:
    """Flip neuron 2 iff neurons 1 and 3 disagree."""
    keep = gate_from_hamiltonian(HamiltonianParams(0.0, 0.0, (1.0, 0.0, 0.0)))
    flip = _flip()
    gate_map = {(0, 0): keep, (1, 1): keep, (0, 1): flip, (1, 0): flip}
    return build_conditional_gate(ConditionalGateSpec(2, (1, 3), gate_map))


def l3() -> np.ndarray:
    """Flip neuron 3 iff neuron 2 fires."""
    return build_conditional_gate(ConditionalGateSpec(3, (2,), {(0,): IDENTITY2, (1,): _flip()}))


def l_net(phi: float) -> np.ndarray:
    return l3() @ l2() @ l1(phi)


def basis_state(index: int) -> np.ndarray:
    psi = np.zeros(DIM, dtype=complex)
    psi[index] = 1.0
    return psi


def check_normalized(state: np.ndarray, tol: float = NORM_TOL) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape != (DIM,):
        raise ValueError(f"network state must have {DIM} amplitudes, got shape {state.shape}")
    norm2 = float(np.sum(np.abs(state) ** 2))
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"network state is not normalized (|psi|^2 = {norm2!r})")
    return state


def step(state: np.ndarray, op: np.ndarray) -> np.ndarray:
    """One round of unitary evolution; returns a new state."""
    if not is_unitary(op):
        raise ValueError("evolution operator is not unitary")
    return op @ check_normalized(state)


# Diagonal observables: eigenvalue per basis index, depending only on neuron 3.
def volatility_observable(v0: float) -> np.ndarray:
    return np.array([v0 if s & 1 == 0 else 2.0 - v0 for s in range(DIM)])


def polarization_observable() -> np.ndarray:
    return np.array([-1.0 if s & 1 == 0 else 1.0 for s in range(DIM)])


def expectation(state: np.ndarray, obs: np.ndarray) -> float:
    state = check_normalized(state)
    return float(np.dot(np.asarray(obs, dtype=float), np.abs(state) ** 2))


def projection_weight(state: np.ndarray, s: int) -> float:
    if not 0 <= s < DIM:
        raise ValueError(f"basis index out of range: {s}")
    return float(abs(check_normalized(state)[s]) ** 2)


def ensemble_expectation(members: Sequence[np.ndarray], obs: np.ndarray) -> float:
    """Equal-weight density-operator average of a diagonal observable."""
    if len(members) == 0:
        raise ValueError("ensemble must contain at least one state")
    return float(np.mean([expectation(m, obs) for m in members]))
