"""Circle rotations, their ergodic (Cesaro) averages and the circle mean."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .domain import TWO_PI, GridDomain
from .errors import DomainError, PreconditionError
from .operators import OperatorFamily, OperatorInstance

DEFAULT_CIRCLE_GRID = 2048
GOLDEN_ANGLE = math.pi * (math.sqrt(5.0) - 1.0)  # 2*pi times (sqrt(5)-1)/2

# angles evaluated per block when averaging long orbits
_ORBIT_BLOCK = 256


@dataclass(frozen=True)
class RotationMap:
    """theta -> (theta + angle) mod 2*pi."""

    angle: float

    def __post_init__(self):
        if not 0.0 < self.angle < TWO_PI:
            raise PreconditionError("rotation angle must lie in (0, 2*pi)")
        # angle < 8, so the high part has at most 27 bits and k*hi is exact for k < 2**26
        hi = math.ldexp(math.floor(math.ldexp(self.angle, 24)), -24)
        object.__setattr__(self, "_hi", hi)
        object.__setattr__(self, "_lo", self.angle - hi)

    def __call__(self, theta):
        return np.mod(np.asarray(theta, dtype=np.float64) + self.angle, TWO_PI)

    def power(self, theta, k):
        """k-fold iterate, computed directly as theta + k*angle mod 2*pi.

        The product is split so the large part is reduced exactly; the
        result stays within a few ulps of the exact value for k < 2**26.
        """
        k = np.asarray(k, dtype=np.float64)
        turns = np.fmod(k * self._hi, TWO_PI) + k * self._lo
        return np.mod(np.asarray(theta, dtype=np.float64) + turns, TWO_PI)


def rational_approximation(alpha_rot, max_denominator=10_000, tol=1e-12):
    """Best p/q (q <= max_denominator) within ``tol`` of alpha_rot/pi, else None."""
    r = alpha_rot / math.pi
    frac = Fraction(r).limit_denominator(max_denominator)
    return frac if abs(r - frac.numerator / frac.denominator) < tol else None


def is_irrational_rotation(alpha_rot, max_denominator=10_000, tol=1e-12) -> bool:
    """Heuristic: no continued-fraction convergent of alpha/pi with q <= max_denominator is within tol."""
    return rational_approximation(alpha_rot, max_denominator, tol) is None


def _circle(domain):
    if domain is None:
        return GridDomain.circle(DEFAULT_CIRCLE_GRID)
    if domain.kind != "circle-angle":
        raise DomainError("operator needs a circle domain")
    return domain


def orbit_average(f, theta, rotation: RotationMap, n: int):
    """(1/n) * sum_{k=0}^{n-1} f(R^k theta)."""
    acc = np.zeros(theta.shape)
    for start in range(0, n, _ORBIT_BLOCK):
        k = np.arange(start, min(start + _ORBIT_BLOCK, n), dtype=np.float64)
        angles = rotation.power(theta[None, :], k[:, None])
        acc += f(angles).sum(axis=0)
    return acc / n


def rotation_family(alpha_rot, max_n=None, domain=None) -> OperatorFamily:
    """member(n)(f) = (1/n) sum_{k=0}^{n-1} f o R^k on the circle grid."""
    rotation = RotationMap(alpha_rot)
    circ = _circle(domain)
    theta = circ.points[:, 0]

    def build(n):
        def nodes():
            k = np.arange(n, dtype=np.float64)
            return rotation.power(theta[None, :], k[:, None]).reshape(-1, 1)

        return OperatorInstance(
            f"weyl({alpha_rot:.6g})({n})", circ, circ, lambda f: orbit_average(f, theta, rotation, n), nodes
        )

    return OperatorFamily(f"weyl({alpha_rot:.6g})", build, circ, circ, max_n)


def rotation_power_family(alpha_rot, max_n=None, domain=None) -> OperatorFamily:
    """member(k)(f) = f o R^{k-1}; its Cesaro means are the Weyl averages."""
    rotation = RotationMap(alpha_rot)
    circ = _circle(domain)
    theta = circ.points[:, 0]

    def build(k):
        where = rotation.power(theta, k - 1)
        return OperatorInstance(f"rot^{k - 1}", circ, circ, lambda f: f(where), where[:, None])

    return OperatorFamily(f"rotations({alpha_rot:.6g})", build, circ, circ, max_n)


def circle_mean_operator(domain=None) -> OperatorInstance:
    """A(f) = (periodic trapezoid mean of f) * 1."""
    circ = _circle(domain)

    def apply(f):
        return np.full(circ.size, float(np.mean(f.on(circ))))

    return OperatorInstance("circle_mean", circ, circ, apply, circ.points)


def circle_composition_operator(psi, domain=None, label="composition") -> OperatorInstance:
    """A(f) = f o psi for a map psi of the circle (angles, reduced mod 2*pi)."""
    circ = _circle(domain)
    where = np.mod(np.asarray(psi(circ.points[:, 0]), dtype=np.float64), TWO_PI)
    return OperatorInstance(label, circ, circ, lambda f: f(where), where[:, None])
