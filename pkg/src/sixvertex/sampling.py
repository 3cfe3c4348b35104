"""Seeded random spectral points for the float backend.

All randomness flows from a single 64-bit seed through numpy's PCG64
generator.  Points are exponentiated spectral parameters e^lambda with
log-uniform modulus in [0.5, 2] and uniform phase; sets of points are
rejection-sampled until every pairwise difference lambda_i - lambda_j stays
away from the zeros of b (the lattice i pi Z), which keeps all b-weight
denominators well conditioned.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

PRNG_NAME = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_point(rng: np.random.Generator,
                 modulus_range: tuple[float, float] = (0.5, 2.0)) -> complex:
    lo, hi = modulus_range
    mod = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    phase = rng.uniform(-math.pi, math.pi)
    return mod * cmath.exp(1j * phase)


def pole_distance(x: complex, y: complex) -> float:
    """Distance of lambda_x - lambda_y from the zero set of b, i pi Z."""
    d = cmath.log(x / y)
    im = math.remainder(d.imag, math.pi)
    return math.hypot(d.real, im)


def sample_spectral_set(rng: np.random.Generator, count: int,
                        min_pole_distance: float = 1e-2,
                        modulus_range: tuple[float, float] = (0.5, 2.0),
                        max_tries: int = 10_000) -> list[complex]:
    """A pole-guarded set of exponentiated spectral points."""
    for _ in range(max_tries):
        pts = [sample_point(rng, modulus_range) for _ in range(count)]
        ok = all(
            pole_distance(pts[i], pts[j]) >= min_pole_distance
            for i in range(count) for j in range(i + 1, count)
        )
        if ok:
            return pts
    raise RuntimeError("rejection sampling failed; loosen min_pole_distance")


def pairwise_sum(values):
    """Deterministic pairwise summation in index order."""
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]
