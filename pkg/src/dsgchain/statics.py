"""
Static solutions of the chain: the vacuum and the unit-charge kink.

The kink solves the interior difference equations

    F_n = -V'(phi_n) + g (phi_{n+1} - 2 phi_n + phi_{n-1}) = 0,   0 < n < N

with ``phi_0 = 0`` and ``phi_N = 1``. Newton's method is used on the
``N - 1`` interior unknowns. Residuals are evaluated in ``np.longdouble``:
with ``g`` up to 1e6 the float64 rounding of ``g * phi`` alone is ~1e-10,
well above the 1e-12 convergence target. Corrections are solved in float64
(iterative refinement), which is enough because they are small.
"""

from dataclasses import dataclass, field
from enum import Enum
import logging
import math

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from .errors import DegenerateCriticalPointError, FlatProfileError, SingularStepError, SolverError
from .potential import ModelParams, TRANSITION_A, potential_d1, potential_d2, potential_value

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
CONTINUATION_STEP = 0.1
_DEGENERATE_WINDOW = 1e-6
_POLISH_STEPS = 3
_MIN_DAMPING = 2.0**-30


class FieldKind(str, Enum):
    VACUUM = "vacuum"
    KINK = "kink"


@dataclass(frozen=True)
class FieldConfiguration:
    """Particle displacements ``phi_0..phi_N`` of a static solution.

    ``phi`` is stored as ``np.longdouble``; cast with ``phi.astype(float)``
    when double precision is enough.
    """

    params: ModelParams
    phi: np.ndarray
    kind: FieldKind
    iterations: int = 0

    @property
    def topological_charge(self):
        return float(abs(self.phi[-1] - self.phi[0]))

    def residual(self):
        """Interior residual ``F_1..F_{N-1}`` in extended precision."""
        return static_residual(self.phi, self.params.g, self.params.a)

    def residual_norm(self):
        return float(np.max(np.abs(self.residual())))


@dataclass(frozen=True)
class EnergyProfile:
    per_site: np.ndarray
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", float(np.sum(self.per_site)))


def static_residual(phi, g, a):
    phi = np.asarray(phi)
    g = phi.dtype.type(g)
    slope = np.diff(phi)
    return -potential_d1(phi[1:-1], a) + g * (slope[1:] - slope[:-1])


def vacuum_configuration(params):
    phi = np.zeros(params.n_sites, dtype=np.longdouble)
    return FieldConfiguration(params, phi, FieldKind.VACUUM)


def initial_kink_guess(params):
    """Continuum sine-Gordon profile centred at the chain midpoint.

    The transition spans ``sqrt(g) / (2 pi)`` sites, the continuum kink
    width for curvature ``4 pi^2`` at the minima.
    """
    N = params.N
    n = np.arange(N + 1, dtype=np.longdouble)
    scale = np.longdouble(2 * math.pi / math.sqrt(params.g))
    guess = (2 / np.longdouble(math.pi)) * np.arctan(np.exp(scale * (n - np.longdouble(N) / 2)))
    guess[0], guess[-1] = 0, 1
    return guess


def _reflect(phi):
    # n -> N - n, phi -> 1 - phi maps kinks to kinks; averaging removes the
    # round-off drift along the (antisymmetric) translation mode
    return (phi + (1 - phi[::-1])) / 2


def _newton_step(phi, g, a):
    F = static_residual(phi, g, a)
    diag = (-potential_d2(phi[1:-1], a) - 2 * np.longdouble(g)).astype(float)
    bands = np.zeros((3, diag.size))
    bands[0, 1:] = g
    bands[1] = diag
    bands[2, :-1] = g
    try:
        with np.errstate(divide="ignore", invalid="ignore"):
            step = solve_banded((1, 1), bands, -F.astype(float), check_finite=False)
    except LinAlgError as exc:
        raise SingularStepError(
            f"singular Jacobian: {exc}", residual=float(np.max(np.abs(F)))
        ) from exc
    if not np.all(np.isfinite(step)):
        raise SingularStepError("non-finite Newton step", residual=float(np.max(np.abs(F))))
    return step.astype(np.longdouble)


def _trial(phi, step, t, symmetric):
    trial = phi.copy()
    trial[1:-1] += np.longdouble(t) * step
    return _reflect(trial) if symmetric else trial


def newton_solve(phi0, g, a, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, symmetric=True):
    """Damped Newton iteration for the interior of ``phi0``; endpoints stay fixed.

    Returns ``(phi, residual_norm, iterations)``. Once the tolerance is met a
    few extra steps are taken, kept only if they lower the residual further.

    Raises
    ------
    SolverError
        No convergence within ``max_iter`` or the line search stalled above
        ``tol``.
    SingularStepError
        The tridiagonal Jacobian could not be factored.
    """
    phi = np.array(phi0, dtype=np.longdouble)
    if symmetric:
        phi = _reflect(phi)
    res = float(np.max(np.abs(static_residual(phi, g, a))))
    polish = 0
    for it in range(1, max_iter + 1):
        if res <= tol:
            if polish >= _POLISH_STEPS:
                return phi, res, it - 1
            polish += 1
        step = _newton_step(phi, g, a)
        t = 1.0
        while t >= _MIN_DAMPING:
            trial = _trial(phi, step, t, symmetric)
            trial_res = float(np.max(np.abs(static_residual(trial, g, a))))
            if trial_res < res:
                break
            t /= 2
        else:
            if res <= tol:
                return phi, res, it - 1
            raise SolverError(
                f"line search stalled at residual {res:.3e} (a={a}, g={g})",
                residual=res,
                iterations=it,
            )
        phi, res = trial, trial_res
    if res <= tol:
        return phi, res, max_iter
    raise SolverError(
        f"no convergence after {max_iter} iterations, residual {res:.3e}",
        residual=res,
        iterations=max_iter,
    )


def continuation_ladder(a):
    """Values of ``a`` visited when solving for a two-lump kink."""
    if a <= TRANSITION_A:
        return [a]
    steps = math.ceil((a - TRANSITION_A) / CONTINUATION_STEP - 1e-12)
    return [float(x) for x in np.linspace(TRANSITION_A, a, steps + 1)]


def solve_kink(params, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Unit-charge kink with ``phi_0 = 0`` and ``phi_N = 1``.

    For ``a > 1/5`` the solution is continued from ``a = 1/5`` in steps of at
    most 0.1, warm-starting each solve; a direct solve at ``a`` close to 1
    can land on the single-jump branch.
    """
    if abs(params.a - TRANSITION_A) < _DEGENERATE_WINDOW:
        raise DegenerateCriticalPointError(
            f"a={params.a} is within {_DEGENERATE_WINDOW} of 1/5; perturb it"
        )
    phi = initial_kink_guess(params)
    total_iter = 0
    for a_step in continuation_ladder(params.a):
        phi, res, its = newton_solve(phi, params.g, a_step, tol=tol, max_iter=max_iter)
        total_iter += its
        log.debug("kink a=%g g=%g: residual %.2e after %d iterations", a_step, params.g, res, its)
    return FieldConfiguration(params, phi, FieldKind.KINK, iterations=total_iter)


def static_configuration(params, kind):
    kind = FieldKind(kind)
    if kind is FieldKind.VACUUM:
        return vacuum_configuration(params)
    return solve_kink(params)


def energy_profile(config):
    """Per-site energy ``V(phi_n) + g (phi_{n+1} - phi_n)^2 / 2``; the last
    site carries only its substrate term."""
    phi = config.phi
    per_site = potential_value(phi, config.params.a)
    per_site[:-1] += np.longdouble(config.params.g) / 2 * np.diff(phi) ** 2
    return EnergyProfile(per_site.astype(float))


def lump_centers(profile, threshold=0.5):
    """Sites of the strict local maxima above ``threshold * max(per_site)``.

    Raises
    ------
    FlatProfileError
        No such maxima (for instance the vacuum profile).
    """
    e = np.asarray(profile.per_site, dtype=float)
    peak = e.max() if e.size else 0.0
    inner = np.arange(1, e.size - 1)
    mask = (e[1:-1] > e[:-2]) & (e[1:-1] > e[2:]) & (e[1:-1] > threshold * peak)
    centers = inner[mask].tolist()
    if not centers:
        raise FlatProfileError("energy profile has no maxima above threshold")
    return centers


def energy_support(profile, fraction=0.01):
    """Number of sites whose energy exceeds ``fraction`` of the peak."""
    e = np.asarray(profile.per_site)
    return int(np.count_nonzero(e > fraction * e.max()))
