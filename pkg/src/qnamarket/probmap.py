"""Classical nonlinear map on the squared real and imaginary amplitude parts.

Each new amplitude mixes exactly two old ones::

    psi(s, t) = sin(phi) psi(s', t-1) + i cos(phi) psi(s'', t-1)

Writing A = (Re psi)^2 and B = (Im psi)^2 gives a 16-variable map.  The
literal map (:func:`step_map`) works on A and B through square roots and so
only sees |Re psi| and |Im psi|; :func:`step_signed` keeps the signs and is
exactly the unitary evolution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import DIM
from .network import l_net

NORM_TOL = 1e-10
INPUT_NORM_TOL = 1e-6


def _routing() -> tuple[np.ndarray, np.ndarray]:
    # sin-source is the nonzero column of L_net(pi/2), i*cos-source that of L_net(0)
    sin_part, cos_part = l_net(np.pi / 2), l_net(0.0)
    src_sin = np.argmax(np.abs(sin_part), axis=1)
    src_cos = np.argmax(np.abs(cos_part), axis=1)
    assert np.allclose(sin_part[np.arange(DIM), src_sin], 1.0)
    assert np.allclose(cos_part[np.arange(DIM), src_cos], 1j)
    return src_sin, src_cos


SIN_SOURCE, COS_SOURCE = _routing()


@dataclass(frozen=True)
class ProbMapState:
    A: np.ndarray
    B: np.ndarray

    def total(self):
        t = np.sum(self.A, axis=-1) + np.sum(self.B, axis=-1)
        return float(t) if np.ndim(t) == 0 else t

    def probabilities(self) -> np.ndarray:
        return self.A + self.B


@dataclass(frozen=True)
class SignedMapState:
    a: np.ndarray  # Re psi
    b: np.ndarray  # Im psi

    def to_probmap(self) -> ProbMapState:
        return ProbMapState(self.a**2, self.b**2)

    def to_quantum(self) -> np.ndarray:
        return self.a + 1j * self.b


@dataclass(frozen=True)
class InterferenceTerms:
    """The four addends of the post-step probability of one string."""

    from_sin_source: float
    from_cos_source: float
    gain: float
    loss: float

    @property
    def total(self) -> float:
        return self.from_sin_source + self.from_cos_source + self.gain + self.loss


def from_quantum(state: np.ndarray) -> ProbMapState:
    state = np.asarray(state, dtype=complex)
    return ProbMapState(state.real**2, state.imag**2)


def signed_from_quantum(state: np.ndarray) -> SignedMapState:
    state = np.asarray(state, dtype=complex)
    return SignedMapState(state.real.copy(), state.imag.copy())


def _check(state: ProbMapState) -> None:
    if np.any(state.A < 0) or np.any(state.B < 0):
        raise ValueError("A and B must be non-negative")
    total = np.sum(state.A, axis=-1) + np.sum(state.B, axis=-1)
    if np.any(np.abs(total - 1.0) > INPUT_NORM_TOL):
        raise ValueError(f"sum of A and B must be 1, got {total!r}")


def _sin_cos(phi):
    """sin and cos of phi, shaped to broadcast against (..., 8) state arrays."""
    phi = np.asarray(phi, dtype=float)
    s, c = np.sin(phi), np.cos(phi)
    return (s[..., None], c[..., None]) if phi.ndim else (s, c)


def step_map(state: ProbMapState, phi: float) -> ProbMapState:
    """One round of the literal map on (A, B).

    Arrays may carry leading batch dimensions; ``phi`` is a scalar or one
    angle per batch row.
    """
    _check(state)
    s, c = _sin_cos(phi)
    ra, rb = np.sqrt(state.A), np.sqrt(state.B)
    A = (ra[..., SIN_SOURCE] * s - rb[..., COS_SOURCE] * c) ** 2
    B = (rb[..., SIN_SOURCE] * s + ra[..., COS_SOURCE] * c) ** 2
    return ProbMapState(A, B)


def step_signed(state: SignedMapState, phi: float) -> SignedMapState:
    s, c = _sin_cos(phi)
    a, b = state.a, state.b
    return SignedMapState(
        a[..., SIN_SOURCE] * s - b[..., COS_SOURCE] * c,
        b[..., SIN_SOURCE] * s + a[..., COS_SOURCE] * c,
    )


def probability(state: ProbMapState, s: int) -> float:
    return float(state.A[s] + state.B[s])


def interference_decomposition(prev: ProbMapState, phi: float, s: int) -> InterferenceTerms:
    """Split Prob[s, t] into the two direct terms and the two sin(2 phi) cross terms."""
    sp, spp = SIN_SOURCE[s], COS_SOURCE[s]
    sin2, cos2, sin2phi = np.sin(phi) ** 2, np.cos(phi) ** 2, np.sin(2 * phi)
    return InterferenceTerms(
        from_sin_source=float(probability(prev, sp) * sin2),
        from_cos_source=float(probability(prev, spp) * cos2),
        gain=float(np.sqrt(prev.B[sp] * prev.A[spp]) * sin2phi),
        loss=float(-np.sqrt(prev.A[sp] * prev.B[spp]) * sin2phi),
    )


def step_map_noisy(state: ProbMapState, beta: float, z: float) -> ProbMapState:
    """Literal map with a logistic-random angle, written in the expanded form.

    The weights are w = 1/(1 + e^{-2 beta z}) on the sin-source and 1 - w on
    the cos-source, with cross terms scaled by 2 e^{-beta z}/(1 + e^{-2 beta z})
    = 1/cosh(beta z).
    """
    _check(state)
    if beta < 0:
        raise ValueError("beta must be non-negative")
    x = beta * np.asarray(z, dtype=float)
    if x.ndim:
        x = x[..., None]
    w = 0.5 * (1.0 + np.tanh(x))
    e = np.exp(-np.abs(x))
    cross = 2.0 * e / (1.0 + e * e)
    A1, B1 = state.A[..., SIN_SOURCE], state.B[..., SIN_SOURCE]
    A2, B2 = state.A[..., COS_SOURCE], state.B[..., COS_SOURCE]
    A = A1 * w + B2 * (1.0 - w) - np.sqrt(A1 * B2) * cross
    B = B1 * w + A2 * (1.0 - w) + np.sqrt(B1 * A2) * cross
    return ProbMapState(np.maximum(A, 0.0), B)


def trajectory(state: ProbMapState, phis) -> list[ProbMapState]:
    out = [state]
    for phi in phis:
        out.append(step_map(out[-1], phi))
    return out


def signed_trajectory(state: SignedMapState, phis) -> list[SignedMapState]:
    out = [state]
    for phi in phis:
        out.append(step_signed(out[-1], phi))
    return out
