"""Seeded random sampling of group points, stabilizer points and rationals.

All float randomness flows through Philox (counter-based) keyed by a 64-bit
seed plus a spawn index, so every run is bit-reproducible from the seed
recorded in its report.  Samplers resample until the membership residual
and a conditioning cap (cond <= 1e6) are met; the loop is bounded and
exceeding the bound is an internal error.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .matrices import mat_exp
from .scalars import ComplexRational
from .spaces import SpaceSpec

COND_CAP = 1e6
MEMBERSHIP_TOL = 1e-10
_MAX_ATTEMPTS = 1000


def rng_from_seed(seed: int, *spawn: int) -> np.random.Generator:
    """Deterministic Philox generator for (seed, spawn index...)."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(spawn))
    return np.random.Generator(np.random.Philox(ss))


def fresh_seed() -> int:
    """Draw a fresh 64-bit seed from OS entropy."""
    return int(np.random.SeedSequence().entropy) & (2**64 - 1)


def _uniform_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, shape) + 1j * rng.uniform(-1.0, 1.0, shape)


def _unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Random special unitary matrix via QR with phase fixing."""
    z = _uniform_complex(rng, (d, d))
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    q = q * ph  # make the factorization phase-canonical
    q[:, 0] /= np.linalg.det(q)
    return q


def _orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.uniform(-1.0, 1.0, (d, d))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diagonal(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def _sample_once(space: SpaceSpec, rng: np.random.Generator) -> np.ndarray | None:
    d = space.ambient_dim
    if space.id == "slr-so":
        m = rng.uniform(-1.0, 1.0, (d, d))
        dt = np.linalg.det(m)
        if abs(dt) < 1e-6:
            return None
        x = m / abs(dt) ** (1.0 / d)
        if np.linalg.det(x) < 0:
            x[:, 0] = -x[:, 0]
        return x.astype(complex)
    if space.id == "sus-sp":
        n = space.n
        alpha = _uniform_complex(rng, (n, n)) * 0.35
        beta = _uniform_complex(rng, (n, n)) * 0.35
        a = np.block([[alpha, beta], [-beta.conj(), alpha.conj()]])
        return mat_exp(a)
    if space.id in ("su-so", "su-sp"):
        return _unitary(rng, d)
    if space.id == "slc-su":
        z = _uniform_complex(rng, (d, d))
        dt = np.linalg.det(z)
        if abs(dt) < 1e-6:
            return None
        return z / dt ** (1.0 / d)
    raise AssertionError(space.id)


def sample_group_point(space: SpaceSpec, rng_seed: int, index: int = 0) -> np.ndarray:
    """A random ambient-group point passing membership within 1e-10."""
    for attempt in range(_MAX_ATTEMPTS):
        rng = rng_from_seed(rng_seed, index, attempt)
        x = _sample_once(space, rng)
        if x is None:
            continue
        if np.linalg.cond(x) > COND_CAP:
            continue
        if space.membership(x, MEMBERSHIP_TOL):
            return x
    raise RuntimeError(f"sampler failed to produce a {space.id} point after {_MAX_ATTEMPTS} attempts")


def sample_stabilizer_point(space: SpaceSpec, rng_seed: int, index: int = 0) -> np.ndarray:
    """A random point of the stabilizer K within 1e-10."""
    d = space.ambient_dim
    for attempt in range(_MAX_ATTEMPTS):
        rng = rng_from_seed(rng_seed, index, attempt, 1)
        if space.stabilizer == "so":
            k = _orthogonal(rng, d).astype(complex)
        elif space.stabilizer == "su":
            k = _unitary(rng, d)
        else:  # sp(n): exponential of a symplectic algebra element
            n = space.n
            g = _uniform_complex(rng, (n, n)) * 0.35
            alpha = (g - g.conj().T) / 2.0
            h = _uniform_complex(rng, (n, n)) * 0.35
            beta = (h + h.T) / 2.0
            a = np.block([[alpha, beta], [-beta.conj(), alpha.conj()]])
            k = mat_exp(a)
        if space.stabilizer_membership(k, MEMBERSHIP_TOL):
            return k
    raise RuntimeError(f"stabilizer sampler failed for {space.id}")


# ---------------------------------------------------------------------------
# exact rational sampling (numerators in [-9, 9], denominators in [1, 9])
# ---------------------------------------------------------------------------

def rational_vector(rng: np.random.Generator, n: int) -> list[Fraction]:
    nums = rng.integers(-9, 10, n)
    dens = rng.integers(1, 10, n)
    return [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]


def complex_rational_vector(rng: np.random.Generator, n: int) -> list[ComplexRational]:
    re = rational_vector(rng, n)
    im = rational_vector(rng, n)
    return [ComplexRational(a, b) for a, b in zip(re, im)]
