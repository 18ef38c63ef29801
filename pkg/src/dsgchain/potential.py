"""
Double sine-Gordon substrate potential

    V(phi; a) = 1 - (1 - a) cos(2 pi phi) - a cos(4 pi phi),    0 <= a <= 1

together with its analytic derivatives and the classification of its
critical points over one period.

All functions accept scalars or numpy arrays. Arrays of dtype
``np.longdouble`` are evaluated in extended precision (the statics solver
relies on this).
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .errors import DegenerateCriticalPointError, DomainError

# pi to more digits than any supported float format carries
_PI_LONG = np.longdouble("3.14159265358979323846264338327950288")

# a = 1/5 is where the half-integer critical point changes type
TRANSITION_A = 0.2


@dataclass(frozen=True)
class ModelParams:
    """Complete configuration of one chain.

    Parameters
    ----------
    n_sites : int
        Number of lattice points, ``N + 1``; sites are indexed ``0..N``.
    g : float
        Dimensionless elastic coupling between neighbours.
    a : float
        Family parameter of the substrate potential.
    """

    n_sites: int
    g: float
    a: float

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 3:
            raise DomainError(f"n_sites must be an integer >= 3, got {self.n_sites!r}")
        if not (self.g > 0 and math.isfinite(self.g)):
            raise DomainError(f"g must be positive and finite, got {self.g!r}")
        check_family_parameter(self.a)

    @property
    def N(self):
        """Index of the last site."""
        return self.n_sites - 1


class CriticalKind(str, Enum):
    ABSOLUTE_MINIMUM = "absolute-minimum"
    RELATIVE_MINIMUM = "relative-minimum"
    MAXIMUM = "maximum"


@dataclass(frozen=True)
class CriticalPoint:
    location: float
    kind: CriticalKind
    curvature: float


def check_family_parameter(a):
    if not (0.0 <= float(a) <= 1.0):
        raise DomainError(f"family parameter a must lie in [0, 1], got {a!r}")


def _two_pi(phi):
    if np.asarray(phi).dtype == np.longdouble:
        return 2 * _PI_LONG
    return 2 * np.pi


def _coefficients(phi, a):
    check_family_parameter(a)
    if np.asarray(phi).dtype == np.longdouble:
        a = np.longdouble(a)
    return _two_pi(phi), a


def potential_value(phi, a):
    """Substrate energy ``V(phi; a)``; non-negative and 1-periodic."""
    k, a = _coefficients(phi, a)
    return 1 - (1 - a) * np.cos(k * phi) - a * np.cos(2 * k * phi)


def potential_d1(phi, a):
    """First derivative ``dV/dphi``."""
    k, a = _coefficients(phi, a)
    return k * (1 - a) * np.sin(k * phi) + 2 * k * a * np.sin(2 * k * phi)


def potential_d2(phi, a):
    """Second derivative ``d2V/dphi2``."""
    k, a = _coefficients(phi, a)
    return k * k * (1 - a) * np.cos(k * phi) + 4 * k * k * a * np.cos(2 * k * phi)


def _classify(location, a, kind_if_min):
    curvature = float(potential_d2(location, a))
    if curvature == 0.0:
        raise DegenerateCriticalPointError(
            f"zero curvature at phi={location} for a={a}; perturb a away from 1/5"
        )
    kind = kind_if_min if curvature > 0 else CriticalKind.MAXIMUM
    return CriticalPoint(location, kind, curvature)


def critical_points(a):
    """Critical points of ``V(.; a)`` in one period ``[0, 1)``, sorted by location.

    ``phi = 0`` is always an absolute minimum. ``phi = 1/2`` is a maximum
    for ``a < 1/5`` and a relative minimum above it (an absolute one at
    ``a = 1``). For ``a > 1/5`` two further maxima appear at
    ``+-arctan(sqrt((3a + 1)/(5a - 1)))/pi mod 1``.

    Raises
    ------
    DegenerateCriticalPointError
        If ``a == 1/5``, where the curvature at ``phi = 1/2`` vanishes.
    """
    check_family_parameter(a)
    a = float(a)
    if a == TRANSITION_A:
        raise DegenerateCriticalPointError(
            "a = 1/5 has a flat direction at phi = 1/2; perturb a"
        )
    half_kind = (
        CriticalKind.ABSOLUTE_MINIMUM if a == 1.0 else CriticalKind.RELATIVE_MINIMUM
    )
    points = [
        _classify(0.0, a, CriticalKind.ABSOLUTE_MINIMUM),
        _classify(0.5, a, half_kind),
    ]
    if a > TRANSITION_A:
        shift = math.atan(math.sqrt((3 * a + 1) / (5 * a - 1))) / math.pi
        for loc in (shift, 1.0 - shift):
            points.append(_classify(loc, a, CriticalKind.MAXIMUM))
    return sorted(points, key=lambda p: p.location)
