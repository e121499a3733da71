"""Closed-form testbed: 1-d Laplacian on [0,1] with two boundary conditions.

T is -d^2/dx^2 with u(0) = 0 at the left end and either u(1) = 0
(Dirichlet-Dirichlet, "dd") or u'(1) = 0 (Dirichlet-Neumann, "dn") at
the right end.  The inverse difference is rank-one with kernel x*xi,
i.e. factors f(x) = x (the ramp) and l(u) = integral of xi*u(xi).  The
spectral parameter is z = k^2; every formula below is even in k, so
the square-root branch never matters.

Small |k| evaluates Taylor expansions of the closed forms: the direct
expressions subtract terms of order 1/k^2 and would lose most digits
there.  z = 0 returns the exact continuity limits (the resolvent at
zero is the negated inverse).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

from .krein import SpectralPoint

# Taylor branch below this |k|; direct evaluation above it.
SMALL_K = 1e-4
# Relative guard band around the trigonometric zeros.
POLE_RTOL = 1e-12

KERNEL_KINDS = (
    "dd-static",
    "dn-static",
    "diff-static",
    "dd-spectral",
    "dn-spectral",
    "diff-spectral",
)


class PoleError(ArithmeticError):
    """z sits on a spectral pole of the requested kernel."""


class DirichletPoleError(PoleError):
    """sin(k) vanishes: z is an eigenvalue of the Dirichlet-Dirichlet operator."""


class NeumannPoleError(PoleError):
    """cos(k) vanishes: z is an eigenvalue of the Dirichlet-Neumann operator."""


@dataclass(frozen=True)
class KernelPoint:
    """Argument pair (x, xi) of a kernel on the unit square."""

    x: float
    xi: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.xi <= 1.0):
            raise ValueError(f"kernel coordinates must lie in [0,1], got {(self.x, self.xi)}")


def _check_dd_pole(k: complex):
    if abs(cmath.sin(k)) < POLE_RTOL * max(1.0, abs(k)):
        raise DirichletPoleError(f"sin(k) vanishes at k={k}")


def _check_dn_pole(k: complex):
    if abs(cmath.cos(k)) < POLE_RTOL * max(1.0, abs(k)):
        raise NeumannPoleError(f"cos(k) vanishes at k={k}")


def green_dd_static(pt: KernelPoint) -> float:
    """Green's kernel of the Dirichlet-Dirichlet inverse: min(x,xi)*(1-max(x,xi))."""
    if pt.x <= pt.xi:
        return -pt.x * (pt.xi - 1.0)
    return -(pt.x - 1.0) * pt.xi


def green_dn_static(pt: KernelPoint) -> float:
    """Green's kernel of the Dirichlet-Neumann inverse: min(x, xi)."""
    return min(pt.x, pt.xi)


def static_difference(pt: KernelPoint) -> float:
    """Kernel of the rank-one inverse difference: x*xi."""
    return pt.x * pt.xi


def green_dd_spectral(pt: KernelPoint, s: SpectralPoint) -> complex:
    """Kernel of (z - T_dd)^-1: -sin(k a) sin(k b) / (k sin k), a=min, b=1-max."""
    a = min(pt.x, pt.xi)
    b = 1.0 - max(pt.x, pt.xi)
    if s.z == 0:
        return complex(-green_dd_static(pt))
    k = s.k
    if abs(k) < SMALL_K:
        return -a * b * (1.0 + s.z * (1.0 - a * a - b * b) / 6.0)
    _check_dd_pole(k)
    return -cmath.sin(k * a) * cmath.sin(k * b) / (k * cmath.sin(k))


def ramp_response(x: float, s: SpectralPoint) -> complex:
    """z (z - T_dd)^-1 applied to the ramp, at x: equals x - sin(kx)/sin(k).

    Solves z u + u'' = z x with u(0) = u(1) = 0.
    """
    if s.z == 0:
        return 0.0 + 0.0j
    k, z = s.k, s.z
    if abs(k) < SMALL_K:
        return -x * z * ((1.0 - x * x) / 6.0 + z * (7.0 / 360.0 - x * x / 36.0 + x**4 / 120.0))
    _check_dd_pole(k)
    return x - cmath.sin(k * x) / cmath.sin(k)


def deflected_ramp(x: float, s: SpectralPoint) -> complex:
    """(-I + z (z - T_dd)^-1) applied to the ramp, at x: -sin(kx)/sin(k)."""
    if s.z == 0:
        return complex(-x)
    k, z = s.k, s.z
    if abs(k) < SMALL_K:
        return -x * (1.0 + z * (1.0 - x * x) / 6.0 + z * z * (7.0 / 360.0 - x * x / 36.0 + x**4 / 120.0))
    _check_dd_pole(k)
    return -cmath.sin(k * x) / cmath.sin(k)


def scalar_pairing(s: SpectralPoint) -> complex:
    """Ramp moment of the deflected ramp: cos(k)/(k sin k) - 1/k^2.

    Equals -integral of xi sin(k xi)/sin(k) over [0,1].  The two direct
    terms are each O(1/k^2) and cancel to O(1), so small |k| switches to
    the series -1/3 - z/45 - 2 z^2/945 - z^3/4725.
    """
    if s.z == 0:
        return complex(-1.0 / 3.0)
    k, z = s.k, s.z
    if abs(k) < SMALL_K:
        return -1.0 / 3.0 - z / 45.0 - 2.0 * z * z / 945.0 - z**3 / 4725.0
    _check_dd_pole(k)
    return cmath.cos(k) / (k * cmath.sin(k)) - 1.0 / (k * k)


def krein_denominator(s: SpectralPoint) -> complex:
    """The scalar 1 + z <l|(-I + z R_dd) f> in closed form: k cot(k)."""
    if s.z == 0:
        return 1.0 + 0.0j
    k, z = s.k, s.z
    if abs(k) < SMALL_K:
        return 1.0 - z / 3.0 - z * z / 45.0 - 2.0 * z**3 / 945.0 - z**4 / 4725.0
    _check_dd_pole(k)
    return k * cmath.cos(k) / cmath.sin(k)


def spectral_difference(pt: KernelPoint, s: SpectralPoint) -> complex:
    """Kernel of (z - T_dn)^-1 - (z - T_dd)^-1: -sin(kx) sin(k xi)/(k sin k cos k)."""
    if s.z == 0:
        return complex(-static_difference(pt))
    k, z = s.k, s.z
    x, xi = pt.x, pt.xi
    if abs(k) < SMALL_K:
        return -x * xi * (1.0 + z * (4.0 - x * x - xi * xi) / 6.0)
    _check_dd_pole(k)
    _check_dn_pole(k)
    return -cmath.sin(k * x) * cmath.sin(k * xi) / (k * cmath.sin(k) * cmath.cos(k))


def green_dn_spectral(pt: KernelPoint, s: SpectralPoint) -> complex:
    """Kernel of (z - T_dn)^-1, defined as the dd kernel plus the difference."""
    return green_dd_spectral(pt, s) + spectral_difference(pt, s)


def dn_eigenvalues(count: int) -> list[SpectralPoint]:
    """Eigenvalues introduced by the Neumann condition: z_n = ((n+1/2) pi)^2."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return [SpectralPoint.from_k((n + 0.5) * cmath.pi) for n in range(count)]


@dataclass(frozen=True)
class AnalyticKernel:
    """A named kernel evaluator; spectral kinds require a SpectralPoint."""

    kind: str
    evaluator: Callable[[KernelPoint, SpectralPoint | None], complex]

    def __call__(self, pt: KernelPoint, s: SpectralPoint | None = None) -> complex:
        return self.evaluator(pt, s)


def analytic_kernel(kind: str) -> AnalyticKernel:
    """Kernel factory for the six supported kinds (see KERNEL_KINDS)."""
    if kind not in KERNEL_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KERNEL_KINDS}")

    def evaluator(pt: KernelPoint, s: SpectralPoint | None = None) -> complex:
        if kind.endswith("-static"):
            base = {
                "dd-static": green_dd_static,
                "dn-static": green_dn_static,
                "diff-static": static_difference,
            }[kind]
            return complex(base(pt))
        if s is None:
            raise ValueError(f"kernel kind {kind!r} needs a spectral point")
        spectral = {
            "dd-spectral": green_dd_spectral,
            "dn-spectral": green_dn_spectral,
            "diff-spectral": spectral_difference,
        }[kind]
        return spectral(pt, s)

    return AnalyticKernel(kind=kind, evaluator=evaluator)
