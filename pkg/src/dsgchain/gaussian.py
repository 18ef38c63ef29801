"""
Ground-state Gaussian correlations and bipartite entanglement entropy.

In the ground state of the quadratic Hamiltonian

    <eta_m eta_n> = 1/2 sum_k psi_k(m) psi_k(n) / omega_k
    <pi_m  pi_n>  = 1/2 sum_k omega_k psi_k(m) psi_k(n)

and position/momentum cross-correlations vanish, so the covariance matrix
of ``Y = (eta, pi)`` is block diagonal. The symplectic eigenvalues of the
reduced state on sites ``0..l-1`` are then ``sqrt(eig(X_A P_A))``.

The position block is never factored directly. A quasi-zero translation
mode makes ``X`` ill-conditioned (entries ~1e5 at omega^2 = 1e-12), and
rounding ``X`` to float64 already costs ~1e-9 in the symplectic
eigenvalues. The square-root factors ``U W^{-1/2}/sqrt(2)`` and
``U W^{1/2}/sqrt(2)`` are kept instead; QR of their row blocks gives
triangular factors of ``X_A`` and ``P_A`` at a backward error set by the
factor, and the symplectic eigenvalues come out as singular values.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging

import numpy as np
from scipy.linalg import cholesky, svdvals
from scipy.signal import find_peaks

from .errors import DomainError, InstabilityError, NumericalDegeneracyError
from .statics import FieldKind

log = logging.getLogger(__name__)

UNCERTAINTY_SLACK = 1e-9


@dataclass(frozen=True)
class CovarianceData:
    """Position-position and momentum-momentum ground-state correlations.

    ``x_factor`` and ``p_factor`` satisfy ``xpos = x_factor @ x_factor.T``
    and ``ppos = p_factor @ p_factor.T``. They are optional; without them
    the blocks are Cholesky-factored.
    """

    xpos: np.ndarray
    ppos: np.ndarray
    x_factor: np.ndarray = None
    p_factor: np.ndarray = None
    kind: FieldKind = FieldKind.VACUUM

    @property
    def n_sites(self):
        return self.xpos.shape[0]

    def block_covariance(self, length=None):
        """Full ``2l x 2l`` covariance ``diag(X_A, P_A)`` in (eta, pi) ordering."""
        length = self.n_sites if length is None else length
        x = self.xpos[:length, :length]
        p = self.ppos[:length, :length]
        zero = np.zeros_like(x)
        return np.block([[x, zero], [zero, p]])


@dataclass(frozen=True)
class SymplecticSpectrum:
    lambdas: np.ndarray
    raw_min: float

    @property
    def mean_phonons(self):
        return self.lambdas - 0.5


@dataclass(frozen=True)
class EntropyScan:
    """Block entropies by length; ``min_symplectic`` holds the smallest
    symplectic eigenvalue of each block before rounding up to 1/2."""

    lengths: np.ndarray
    entropy: np.ndarray
    kind: FieldKind
    min_symplectic: np.ndarray = None

    def maxima(self, prominence=1e-6):
        return local_maxima(self.lengths, self.entropy, prominence)

    def value_at(self, length):
        return float(self.entropy[np.flatnonzero(self.lengths == length)[0]])


def _symmetrize(a):
    return 0.5 * (a + a.T)


def covariance(modes):
    w2 = np.asarray(modes.omega_squared, dtype=float)
    if np.any(w2 <= 0):
        k = int(np.argmin(w2))
        raise InstabilityError(
            f"mode {k} has omega^2 = {w2[k]:.3e}", omega_squared=w2[k], index=k
        )
    w = np.sqrt(w2)
    x_factor = modes.modes / np.sqrt(2 * w)
    p_factor = modes.modes * np.sqrt(w / 2)
    return CovarianceData(
        xpos=_symmetrize(x_factor @ x_factor.T),
        ppos=_symmetrize(p_factor @ p_factor.T),
        x_factor=x_factor,
        p_factor=p_factor,
        kind=modes.kind,
    )


def correlation_profile(cov, m):
    """``xi_{m, m+n}`` for separations ``n = 0 .. N - m``."""
    if not 0 <= m < cov.n_sites:
        raise DomainError(f"anchor site {m} outside 0..{cov.n_sites - 1}")
    return cov.xpos[m, m:].copy()


def _triangular_factors(cov, length):
    if cov.x_factor is not None and cov.p_factor is not None:
        rx = np.linalg.qr(cov.x_factor[:length].T, mode="r")
        rp = np.linalg.qr(cov.p_factor[:length].T, mode="r")
        return rx, rp
    # upper Cholesky: X_A = rx.T @ rx
    rx = cholesky(cov.xpos[:length, :length])
    rp = cholesky(cov.ppos[:length, :length])
    return rx, rp


def symplectic_eigenvalues(cov, length):
    """Williamson spectrum of the reduced state on sites ``0..length-1``.

    Values in ``[1/2 - 1e-9, 1/2)`` are rounded up to 1/2; anything lower
    raises ``NumericalDegeneracyError``.
    """
    if not 1 <= length <= cov.n_sites:
        raise DomainError(f"block length {length} outside 1..{cov.n_sites}")
    rx, rp = _triangular_factors(cov, length)
    lam = np.sort(svdvals(rx @ rp.T))
    raw_min = float(lam[0])
    if raw_min < 0.5 - UNCERTAINTY_SLACK:
        raise NumericalDegeneracyError(
            f"symplectic eigenvalue {raw_min!r} below 1/2 for block length {length}"
        )
    return SymplecticSpectrum(np.maximum(lam, 0.5), raw_min)


def symplectic_spectrum_jm(covariance_matrix):
    """Symplectic eigenvalues of a ``2n x 2n`` covariance in (q, p) ordering,
    taken as the moduli of the eigenvalues of ``J M``.

    Works for any positive covariance, block diagonal or not. Returns the
    ``n`` values in ascending order.
    """
    m = np.asarray(covariance_matrix, dtype=float)
    n = m.shape[0] // 2
    eye = np.eye(n)
    zero = np.zeros((n, n))
    j = np.block([[zero, eye], [-eye, zero]])
    moduli = np.sort(np.abs(np.linalg.eigvals(j @ m)))
    # eigenvalues come in +-i lambda pairs
    return 0.5 * (moduli[0::2] + moduli[1::2])


def mode_entropy(lam):
    """Von Neumann entropy of one mode with symplectic eigenvalue ``lam``,
    ``(lam + 1/2) ln(lam + 1/2) - (lam - 1/2) ln(lam - 1/2)``, with
    ``0 ln 0 = 0``."""
    lam = np.asarray(lam, dtype=float)
    upper = lam + 0.5
    lower = lam - 0.5
    safe = np.where(lower > 0, lower, 1.0)
    return upper * np.log(upper) - np.where(lower > 0, lower * np.log(safe), 0.0)


def entanglement_entropy(spectrum):
    lam = spectrum.lambdas if isinstance(spectrum, SymplecticSpectrum) else spectrum
    return float(np.sum(mode_entropy(lam)))


def block_entropy(cov, length):
    return entanglement_entropy(symplectic_eigenvalues(cov, length))


def entropy_scan(modes, lengths=None, workers=1):
    """Entanglement entropy of left-anchored blocks for each requested length.

    The per-length evaluations only read the covariance; with ``workers > 1``
    they run on a thread pool and are returned in input order.
    """
    cov = modes if isinstance(modes, CovarianceData) else covariance(modes)
    if lengths is None:
        lengths = range(1, cov.n_sites + 1)
    lengths = np.asarray(list(lengths), dtype=int)

    def one(length):
        return symplectic_eigenvalues(cov, int(length))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            spectra = list(pool.map(one, lengths))
    else:
        spectra = [one(l) for l in lengths]
    return EntropyScan(
        lengths,
        np.array([entanglement_entropy(s) for s in spectra]),
        cov.kind,
        np.array([s.raw_min for s in spectra]),
    )


def local_maxima(lengths, values, prominence=1e-6):
    """Positions of local maxima whose prominence exceeds ``prominence``
    times the largest value. Flat tops report their middle sample."""
    values = np.asarray(values, dtype=float)
    peaks, _ = find_peaks(values, prominence=prominence * float(np.max(np.abs(values))))
    return [int(np.asarray(lengths)[p]) for p in peaks]
