"""Finite-difference embodiment of the two boundary-value operators.

Standard 3-point stencil on n interior nodes of [0,1], h = 1/(n+1).
The Neumann end uses a mirror ghost node (last diagonal entry 1/h^2):
that keeps the matrix symmetric and makes the matrix difference
t_dd - t_dn exactly (1/h^2) e_n e_n^T, i.e. exactly rank-one, at the
price of O(h) boundary accuracy.  Matrix inverses approximate h times
the continuous kernels at node pairs: T^-1[i,j] ~= h * G(x_i, x_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DenseOperator, Functional, RankOneForm, SingularMatrixError, Vector, invert


class SpectrumHitError(ArithmeticError):
    """z coincides with an eigenvalue of the discretized operator."""


@dataclass(frozen=True)
class Grid:
    """n interior nodes x_i = i*h, i = 1..n, with h = 1/(n+1)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 interior nodes")

    @property
    def h(self) -> float:
        return 1.0 / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(1, self.n + 1) * self.h


@dataclass(frozen=True)
class DiscretePair:
    """Discretized operator pair with the sampled rank-one factors.

    f_vec samples the ramp at the nodes; l_fun carries trapezoid
    weights h times the node coordinates, matching the ramp-moment
    functional.
    """

    grid: Grid
    t_dd: DenseOperator
    t_dn: DenseOperator
    f_vec: Vector
    l_fun: Functional


def build_pair(n: int) -> DiscretePair:
    """Assemble both operators and the sampled factors on n interior nodes."""
    grid = Grid(n)
    h = grid.h
    x = grid.nodes
    main = np.full(n, 2.0 / h**2, dtype=complex)
    off = np.full(n - 1, -1.0 / h**2, dtype=complex)
    t_dd = np.diag(main) + np.diag(off, 1) + np.diag(off, -1)
    t_dn = t_dd.copy()
    t_dn[-1, -1] = 1.0 / h**2
    return DiscretePair(
        grid=grid,
        t_dd=DenseOperator(t_dd),
        t_dn=DenseOperator(t_dn),
        f_vec=Vector(x),
        l_fun=Functional(h * x),
    )


def inverse_difference(pair: DiscretePair) -> DenseOperator:
    """t_dn^-1 - t_dd^-1; exactly rank-one by the single-entry matrix difference."""
    return invert(pair.t_dn) - invert(pair.t_dd)


def resolvent(t: DenseOperator, z: complex) -> DenseOperator:
    """(z - T)^-1 by dense inversion; the brute-force resolvent oracle."""
    z = complex(z)
    shifted = z * DenseOperator.identity(t.dim) - t
    try:
        return invert(shifted)
    except SingularMatrixError as exc:
        raise SpectrumHitError(f"z={z} hits the discrete spectrum") from exc


def discrete_new_eigenvalues(pair: DiscretePair, count: int) -> list[float]:
    """Smallest eigenvalues of t_dn (dense symmetric solve), ascending."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > pair.grid.n:
        raise ValueError("count exceeds the matrix dimension")
    eigen = np.linalg.eigvalsh(pair.t_dn.matrix)
    return [float(v) for v in eigen[:count]]


def krein_denominator_function(
    pair: DiscretePair, form: "RankOneForm | None" = None
) -> Callable[[complex], complex]:
    """Fast discrete denominator D(z) = 1 + z <l|(-I + z R_dd(z)) f>.

    Uses the pair's sampled factors unless an explicit rank-one form is
    given (e.g. factors recovered from the inverse difference).  One
    symmetric eigendecomposition of t_dd up front turns every
    evaluation into an O(n) sum, which keeps root bracketing cheap:

        D(z) = 1 + z(-<l|f> + z * sum_j c_j / (z - lambda_j)),
        c_j = <l|v_j><v_j|f>.
    """
    f = form.f if form is not None else pair.f_vec
    l = form.l if form is not None else pair.l_fun
    lam, vecs = np.linalg.eigh(pair.t_dd.matrix)
    lw = l.weights @ vecs
    vf = vecs.T @ f.entries
    coeff = lw * vf
    lf = complex(np.dot(l.weights, f.entries))

    def d_fn(z: complex) -> complex:
        z = complex(z)
        return 1.0 + z * (-lf + z * complex(np.sum(coeff / (z - lam))))

    return d_fn


def dd_eigenvalues(pair: DiscretePair) -> np.ndarray:
    """Spectrum of t_dd, ascending; the poles of the discrete resolvent."""
    return np.linalg.eigvalsh(pair.t_dd.matrix)
