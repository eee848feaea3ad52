"""Quantum neural automaton market: a lattice of independent component networks.

Components ``0..K-2`` are volatility components and the last one is the
polarization component.  The joint state is a product state at all times, so
it is kept factorized as a ``(K, 8)`` amplitude array.

Outcomes are sampled from squared amplitudes each round without reducing the
state; only neuron 3 of each component is sampled, since the return depends on
nothing else.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gates import DIM, haar_random_u2
from .network import l_net, phi_from_sin2

_MAX_SEED = 2**64

# L_net(phi) = sin(phi) * L_net(pi/2) + cos(phi) * L_net(0); L1 is linear in (sin, cos)
# and L2, L3 do not depend on phi.
_LNET_SIN = l_net(np.pi / 2)
_LNET_COS = l_net(0.0)
_FIRING = np.array([s & 1 for s in range(DIM)], dtype=bool)

# stream purposes inside one component
_INIT, _OUTCOME, _NOISE = 0, 1, 2


@dataclass(frozen=True)
class MarketConfig:
    n_components: int = 20
    sin2phi: float = 0.6
    v0: float = 0.7
    lam: float = 1000.0
    steps: int = 2100
    transient: int = 100
    seed: int = 0
    noise_beta: Optional[float] = None

    def __post_init__(self):
        if int(self.n_components) != self.n_components or self.n_components < 1:
            raise ValueError(f"n_components must be a positive integer, got {self.n_components!r}")
        if not 0.0 <= self.sin2phi <= 1.0:
            raise ValueError(f"sin2phi must lie in [0, 1], got {self.sin2phi!r}")
        if not 0.0 < self.v0 <= 1.0:
            raise ValueError(f"v0 must lie in (0, 1], got {self.v0!r}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam!r}")
        if self.steps <= 0:
            raise ValueError(f"steps must be positive, got {self.steps!r}")
        if not 0 <= self.transient < self.steps:
            raise ValueError(f"transient must satisfy 0 <= transient < steps, got {self.transient!r}")
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.noise_beta is not None and not self.noise_beta >= 0:
            raise ValueError(f"noise beta must be non-negative, got {self.noise_beta!r}")

    @property
    def phi(self) -> float:
        return phi_from_sin2(self.sin2phi)

    def as_dict(self) -> dict:
        return {
            "n_components": self.n_components,
            "sin2phi": self.sin2phi,
            "v0": self.v0,
            "lambda": self.lam,
            "steps": self.steps,
            "transient": self.transient,
            "seed": self.seed,
            "noise_beta": self.noise_beta,
        }


@dataclass
class MarketState:
    components: np.ndarray  # (n_components, 8) complex amplitudes
    round: int = 0


@dataclass
class ReturnsSeries:
    returns: np.ndarray
    log_prices: np.ndarray
    rounds: int

    def __len__(self):
        return len(self.returns)


class MarketStreams:
    """Independent generators per (component, purpose), derived from one seed.

    Each component owns an init, an outcome and a noise stream, so a
    component's draws never depend on how many other components exist or on
    the order in which components are processed.
    """

    def __init__(self, seed: int, n_components: int):
        self.seed = seed

        def gen(k, purpose):
            ss = np.random.SeedSequence(seed, spawn_key=(k, purpose))
            return np.random.Generator(np.random.PCG64(ss))

        self.init = [gen(k, _INIT) for k in range(n_components)]
        self.outcome = [gen(k, _OUTCOME) for k in range(n_components)]
        self.noise = [gen(k, _NOISE) for k in range(n_components)]

    def uniforms(self, rounds: int = 1) -> np.ndarray:
        """(rounds, K) outcome uniforms; row t is round t for every component."""
        return np.stack([g.random(rounds) for g in self.outcome], axis=1)

    def normals(self, rounds: int = 1) -> np.ndarray:
        return np.stack([g.standard_normal(rounds) for g in self.noise], axis=1)


def volatility_eigenvalue(s3: int, v0: float) -> float:
    return v0 if s3 == 0 else 2.0 - v0


def polarization_eigenvalue(s3: int) -> float:
    return -1.0 if s3 == 0 else 1.0


def returns_eigenvalue(bits, cfg: MarketConfig) -> float:
    """(1/lambda) * prod of volatility factors * polarization sign."""
    bits = np.asarray(bits).astype(int)
    if bits.shape != (cfg.n_components,):
        raise ValueError(f"expected {cfg.n_components} neuron-3 bits, got shape {bits.shape}")
    r = 1.0 / cfg.lam
    for b in bits[:-1]:
        r *= volatility_eigenvalue(b, cfg.v0)
    return r * polarization_eigenvalue(bits[-1])


def returns_from_bits(bits: np.ndarray, v0: float, lam: float) -> np.ndarray:
    """Vectorized :func:`returns_eigenvalue` over a (rounds, K) bit array."""
    vol = np.where(bits[:, :-1], 2.0 - v0, v0)
    sign = np.where(bits[:, -1], 1.0, -1.0)
    out = np.full(bits.shape[0], 1.0 / lam)
    for k in range(vol.shape[1]):
        out *= vol[:, k]
    return out * sign


def sample_phi(beta, z):
    """Noisy rotation angle with sin^2(phi) = 1 / (1 + exp(-2 beta z)).

    Equivalently tan(phi) = exp(beta z). Evaluated through exp(-|beta z|) so it
    stays finite and keeps the small cos(phi) accurate when beta*z is large.
    """
    beta = np.asarray(beta, dtype=float)
    if np.any(beta < 0):
        raise ValueError("beta must be non-negative")
    x = beta * np.asarray(z, dtype=float)
    t = np.exp(-np.abs(x))
    phi = np.where(x >= 0, np.arctan2(1.0, t), np.arctan2(t, 1.0))
    return float(phi) if np.ndim(phi) == 0 else phi


def init_market(cfg: MarketConfig, streams: MarketStreams | None = None) -> MarketState:
    """Each component starts at (Ua (x) Ub (x) Uc)|000> with Haar-random U(2) factors."""
    if streams is None:
        streams = MarketStreams(cfg.seed, cfg.n_components)
    comps = np.empty((cfg.n_components, DIM), dtype=complex)
    for k, rng in enumerate(streams.init[: cfg.n_components]):
        cols = [haar_random_u2(rng)[:, 0] for _ in range(3)]
        comps[k] = np.kron(np.kron(cols[0], cols[1]), cols[2])
    return MarketState(comps, 0)


def firing_probabilities(components: np.ndarray) -> np.ndarray:
    """Probability that neuron 3 fires, per component."""
    return np.sum(np.abs(components[:, _FIRING]) ** 2, axis=1)


def sample_outcomes(components: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Neuron-3 outcome per component: fires iff the uniform draw is below its firing probability."""
    return np.asarray(u) < firing_probabilities(components)


def evolve_components(components: np.ndarray, phi) -> np.ndarray:
    """Apply L_net(phi) to every component; phi is a scalar or one angle per component."""
    phi = np.asarray(phi, dtype=float)
    s = np.sin(phi)[..., None] if phi.ndim else np.sin(phi)
    c = np.cos(phi)[..., None] if phi.ndim else np.cos(phi)
    return s * (components @ _LNET_SIN.T) + c * (components @ _LNET_COS.T)


def _advance(state: MarketState, cfg: MarketConfig, u: np.ndarray, z: np.ndarray | None):
    phi = cfg.phi if cfg.noise_beta is None else sample_phi(cfg.noise_beta, z)
    comps = evolve_components(state.components, phi)
    bits = sample_outcomes(comps, u)
    ret = returns_from_bits(bits[None, :], cfg.v0, cfg.lam)[0]
    return MarketState(comps, state.round + 1), float(ret), bits


def advance_round(state: MarketState, cfg: MarketConfig, streams: MarketStreams):
    """Evolve every component one round and sample that round's return.

    Returns ``(new_state, return)``.  The new state is the unitary image of the
    old one and does not depend on the outcome draw.
    """
    u = streams.uniforms(1)[0]
    z = streams.normals(1)[0] if cfg.noise_beta is not None else None
    new_state, ret, _ = _advance(state, cfg, u, z)
    return new_state, ret


def log_price_path(returns: np.ndarray) -> np.ndarray:
    """ln S(t) = ln S(t-1) + R(t) with ln S(0) = 0."""
    return np.cumsum(np.asarray(returns, dtype=float))


def simulate(cfg: MarketConfig, return_state: bool = False):
    """Run ``cfg.steps`` rounds and keep the post-transient returns.

    Draws are pre-generated per component stream; the result is identical to
    calling :func:`advance_round` ``cfg.steps`` times on the same streams.
    """
    streams = MarketStreams(cfg.seed, cfg.n_components)
    state = init_market(cfg, streams)
    u = streams.uniforms(cfg.steps)
    z = streams.normals(cfg.steps) if cfg.noise_beta is not None else None
    rets = np.empty(cfg.steps)
    for t in range(cfg.steps):
        state, rets[t], _ = _advance(state, cfg, u[t], None if z is None else z[t])
    kept = rets[cfg.transient :]
    series = ReturnsSeries(kept, log_price_path(kept), cfg.steps - cfg.transient)
    return (series, state) if return_state else series
