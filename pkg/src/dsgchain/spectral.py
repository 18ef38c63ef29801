"""
Fluctuation Hessian around a static configuration and its normal modes.

    B = diag(Omega_n + 2 g) - g (shift_up + shift_down),   Omega_n = V''(phi_n)

All N + 1 particles are dynamical; the missing neighbours of the end sites
are treated as fixed (eta_{-1} = eta_{N+1} = 0).
"""

from dataclasses import dataclass
import logging

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import InstabilityError
from .potential import potential_d2
from .statics import FieldKind

log = logging.getLogger(__name__)

# omega^2 at or below this is not a usable oscillator
STABILITY_THRESHOLD = 1e-12

# eigenvalues below this fraction of ||B|| get an extended-precision
# Rayleigh quotient; float64 resolves them only to ~eps * ||B||
_REFINE_FRACTION = 1e-6
_LONG_EPS = float(np.finfo(np.longdouble).eps)


@dataclass(frozen=True)
class HessianMatrix:
    """Symmetric tridiagonal Hessian; ``diagonal`` is kept in extended precision."""

    diagonal: np.ndarray
    g: float
    kind: FieldKind = FieldKind.VACUUM

    @property
    def dimension(self):
        return self.diagonal.size

    @property
    def off_diagonal(self):
        return np.full(self.dimension - 1, -float(self.g))

    def dense(self):
        d = self.diagonal.astype(float)
        return np.diag(d) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def norm_inf(self):
        d = np.abs(self.diagonal.astype(float))
        row = d + 2 * self.g
        if self.dimension > 1:
            row[0] -= self.g
            row[-1] -= self.g
        else:
            row[0] = d[0]
        return float(row.max())

    def matvec_long(self, x):
        x = np.asarray(x, dtype=np.longdouble)
        g = np.longdouble(self.g)
        y = self.diagonal * x
        y[:-1] -= g * x[1:]
        y[1:] -= g * x[:-1]
        return y


@dataclass(frozen=True)
class NormalModes:
    """Eigenpairs of the Hessian, ascending in frequency.

    ``modes[:, k]`` is the normalised eigenvector of ``omega_squared[k]``.
    ``clamped`` lists the modes whose squared frequency was raised to a
    soft floor (see :func:`eigendecompose`); ``raw_omega_squared`` keeps the
    values before clamping.
    """

    omega_squared: np.ndarray
    modes: np.ndarray
    kind: FieldKind = FieldKind.VACUUM
    clamped: tuple = ()
    raw_omega_squared: np.ndarray = None

    @property
    def omega(self):
        return np.sqrt(self.omega_squared)

    @property
    def size(self):
        return self.omega_squared.size


def build_hessian(config):
    phi = np.asarray(config.phi, dtype=np.longdouble)
    diagonal = potential_d2(phi, config.params.a) + 2 * np.longdouble(config.params.g)
    return HessianMatrix(diagonal, float(config.params.g), FieldKind(config.kind))


def _fix_signs(vectors):
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        lead = np.flatnonzero(np.abs(col) > 1e-12)
        if lead.size and col[lead[0]] < 0:
            vectors[:, k] = -col
    return vectors


def rayleigh_quotient(hessian, vector):
    x = np.asarray(vector, dtype=np.longdouble)
    x = x / np.sqrt(np.sum(x * x))
    return np.sum(x * hessian.matvec_long(x))


def eigendecompose(hessian, soft_floor=None):
    """Full spectrum of a Hessian with deterministic ordering and signs.

    Parameters
    ----------
    hessian : HessianMatrix
    soft_floor : float, optional
        By default any ``omega^2 <= STABILITY_THRESHOLD`` raises. A kink on
        a long chain has a translation mode whose true ``omega^2`` can sit
        far below what floating point resolves (around 1e-21 at g=1e4,
        a=0.99). When ``soft_floor`` is given, such modes are clamped up to
        it instead, provided they are not resolvably negative.

    Raises
    ------
    InstabilityError
        A mode is resolvably negative, or non-positive within threshold and
        no ``soft_floor`` was given.
    """
    d = hessian.diagonal.astype(float)
    if hessian.dimension == 1:
        w2, vecs = d.copy(), np.ones((1, 1))
    else:
        w2, vecs = eigh_tridiagonal(d, hessian.off_diagonal)
    vecs = _fix_signs(vecs)

    norm = hessian.norm_inf()
    resolution = 64 * _LONG_EPS * norm
    raw = w2.copy()
    for k in np.flatnonzero(w2 < _REFINE_FRACTION * norm):
        raw[k] = float(rayleigh_quotient(hessian, vecs[:, k]))
    w2 = raw.copy()

    clamped = []
    for k in np.flatnonzero(raw <= STABILITY_THRESHOLD):
        value = raw[k]
        if value < -resolution:
            raise InstabilityError(
                f"mode {k} has omega^2 = {value:.3e} < 0: the static solution is a saddle",
                omega_squared=value,
                index=int(k),
            )
        if soft_floor is None:
            raise InstabilityError(
                f"mode {k} has omega^2 = {value:.3e} <= {STABILITY_THRESHOLD:g}",
                omega_squared=value,
                index=int(k),
            )
        if not soft_floor > 0:
            raise ValueError(f"soft_floor must be positive, got {soft_floor!r}")
        log.info("mode %d: omega^2 %.3e clamped to %.3e", k, value, soft_floor)
        w2[k] = soft_floor
        clamped.append(int(k))

    order = np.argsort(w2, kind="stable")
    return NormalModes(
        omega_squared=w2[order],
        modes=vecs[:, order],
        kind=hessian.kind,
        clamped=tuple(int(np.flatnonzero(order == k)[0]) for k in clamped),
        raw_omega_squared=raw[order],
    )


def normal_modes(config, soft_floor=None):
    return eigendecompose(build_hessian(config), soft_floor=soft_floor)


def zero_point_energy(modes):
    """Ground-state energy of the quadratic Hamiltonian, half the sum of frequencies."""
    return 0.5 * float(np.sum(modes.omega))
