"""Shared fixtures: seeded RNG, random matrix/triple factories."""

from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bqtool.geometry import Matrix2C
from bqtool.markoff import MarkoffTriple, mu

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

SEED = 20260816


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> Matrix2C:
    """Random SL(2,C) matrix: random entries, one entry solved from det = 1."""
    a, b, c = (
        complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
        for _ in range(3)
    )
    if abs(a) < 0.1:
        a += 0.5
    d = (1.0 + b * c) / a
    return Matrix2C(a, b, c, d)


def random_loxodromic(
    rng: np.random.Generator,
    ell_half_lo: float = 0.2,
    ell_half_hi: float = 2.5,
) -> tuple[Matrix2C, complex]:
    """(matrix, lambda) with the matrix conjugate to diag(e^l, e^-l).

    lambda = l has positive real part in [ell_half_lo, ell_half_hi] (the
    half complex length before the sign lift) and a uniform rotation part.
    """
    lam = complex(
        rng.uniform(ell_half_lo, ell_half_hi), rng.uniform(-np.pi / 2, np.pi / 2)
    )
    diag = Matrix2C(cmath.exp(lam), 0j, 0j, cmath.exp(-lam))
    conj = random_sl2(rng, scale=2.0)
    return (conj @ diag) @ conj.inverse(), lam


def random_irreducible_triple(
    rng: np.random.Generator, scale: float = 3.0, min_mu_gap: float = 1e-3
) -> MarkoffTriple:
    """Random complex triple bounded away from the reducible locus."""
    while True:
        t = MarkoffTriple(
            complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)),
            complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)),
            complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)),
        )
        if abs(mu(t) - 4.0) > min_mu_gap:
            return t


@pytest.fixture
def so3_triple() -> MarkoffTriple:
    """Traces of two order-two rotations about perpendicular axes."""
    return MarkoffTriple(0j, 0j, 0j)


@pytest.fixture
def fuchsian_triple() -> MarkoffTriple:
    return MarkoffTriple(3 + 0j, 3 + 0j, 3 + 0j)
