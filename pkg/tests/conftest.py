"""Shared seeded instance builders for the test suite."""

import numpy as np

from rankone.core import DenseOperator, Functional, RankOneForm, Vector, invert, pair


def seeded_operator(rng: np.random.Generator, dim: int) -> DenseOperator:
    """Well-conditioned random operator: uniform entries plus a diagonal shift."""
    raw = rng.uniform(-1, 1, (dim, dim)) + 1j * rng.uniform(-1, 1, (dim, dim))
    return DenseOperator(raw + 2.0 * dim * np.eye(dim))


def seeded_vector(rng: np.random.Generator, dim: int) -> Vector:
    return Vector(rng.uniform(-1, 1, dim) + 1j * rng.uniform(-1, 1, dim))


def seeded_functional(rng: np.random.Generator, dim: int) -> Functional:
    return Functional(rng.uniform(-1, 1, dim) + 1j * rng.uniform(-1, 1, dim))


def regular_instance(rng: np.random.Generator, dim: int, min_denominator: float = 0.1):
    """(A, A^-1, form) with |1 - <l|A^-1 f>| above min_denominator."""
    while True:
        a = seeded_operator(rng, dim)
        form = RankOneForm(seeded_vector(rng, dim), seeded_functional(rng, dim))
        a_inv = invert(a)
        if abs(1.0 - pair(form.l, a_inv @ form.f)) > min_denominator:
            return a, a_inv, form


def singular_instance(rng: np.random.Generator, dim: int):
    """(A, A^-1, form) crafted so that <l|A^-1 f> = 1 exactly (up to roundoff)."""
    a = seeded_operator(rng, dim)
    a_inv = invert(a)
    f = seeded_vector(rng, dim)
    l0 = seeded_functional(rng, dim)
    l = l0 * (1.0 / pair(l0, a_inv @ f))
    return a, a_inv, RankOneForm(f, l)
