"""Random states and operators for property checks."""
from __future__ import annotations

import numpy as np

from .state import PureState


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_seeds(master_seed: int, n: int) -> list[int]:
    """Deterministic per-trial seeds derived from one master seed."""
    children = np.random.SeedSequence(master_seed).spawn(n)
    return [int(c.generate_state(1)[0]) for c in children]


def haar_state(n: int, seed=None) -> PureState:
    rng = rng_from(seed)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return PureState(n, v / np.linalg.norm(v))


def random_unitary(seed=None, dim: int = 2) -> np.ndarray:
    """Haar unitary via QR of a complex Gaussian matrix, with the phase fix."""
    rng = rng_from(seed)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_qubit(seed=None) -> np.ndarray:
    rng = rng_from(seed)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_product_state(n: int, seed=None) -> PureState:
    rng = rng_from(seed)
    amps = np.ones(1, dtype=complex)
    for _ in range(n):
        amps = np.kron(amps, random_qubit(rng))
    return PureState(n, amps / np.linalg.norm(amps))
