"""
Gaussian covariance matrices in shot-noise units

Quadratures are interleaved per mode, (x1, p1, x2, p2, ...), so every mode
owns a contiguous 2x2 block.
"""

import logging
from dataclasses import InitVar, dataclass
from typing import Iterable, List, Sequence, Union

import numpy as np
from scipy import linalg

from sqzkey.errors import InvalidArgumentError, InvalidStateError, NumericalDomainError

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-12
UNCERTAINTY_TOL = 1e-9
SYMPLECTIC_TOL = 1e-10
PURE_TOL = 1e-9

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form for interleaved ordering"""
    return np.kron(np.eye(n_modes), _OMEGA_1)


def _mode_indices(mode: int) -> List[int]:
    return [2 * mode, 2 * mode + 1]


def _quadrature_index(mode: int, quadrature: str) -> int:
    if quadrature not in ("x", "p"):
        raise InvalidArgumentError(f"quadrature must be 'x' or 'p', got {quadrature!r}")
    return 2 * mode + (0 if quadrature == "x" else 1)


@dataclass(frozen=True, eq=False)
class CovMat:
    """Real symmetric covariance matrix of an N-mode Gaussian state"""

    matrix: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0 or m.shape[0] % 2:
            raise InvalidArgumentError(f"covariance must be a non-empty 2N x 2N array, got shape {m.shape}")
        scale = max(float(np.max(np.abs(m))), 1.0)
        if np.max(np.abs(m - m.T)) > SYMMETRY_RTOL * scale:
            raise InvalidStateError("covariance matrix is not symmetric")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if validate:
            nu = symplectic_eigenvalues(self)
            if nu[-1] < 1.0 - UNCERTAINTY_TOL:
                raise InvalidStateError(f"uncertainty relation violated: smallest symplectic eigenvalue {nu[-1]:.12g}")

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def block(self, mode: int) -> np.ndarray:
        """2x2 covariance block of one mode"""
        idx = _mode_indices(mode)
        return self.matrix[np.ix_(idx, idx)]

    def variances(self, mode: int) -> tuple:
        b = self.block(mode)
        return float(b[0, 0]), float(b[1, 1])

    def allclose(self, other: "CovMat", atol: float = 1e-12) -> bool:
        return self.matrix.shape == other.matrix.shape and bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class Symplectic:
    """Linear symplectic transform acting on an N-mode covariance matrix"""

    matrix: np.ndarray

    def __post_init__(self):
        s = np.array(self.matrix, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise InvalidArgumentError(f"symplectic matrix must be 2N x 2N, got shape {s.shape}")
        omega = symplectic_form(s.shape[0] // 2)
        if np.max(np.abs(s @ omega @ s.T - omega)) >= SYMPLECTIC_TOL:
            raise InvalidArgumentError("matrix does not preserve the symplectic form")
        s.setflags(write=False)
        object.__setattr__(self, "matrix", s)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    @classmethod
    def identity(cls, n_modes: int) -> "Symplectic":
        return cls(np.eye(2 * n_modes))

    def compose(self, other: "Symplectic") -> "Symplectic":
        """Transform that applies `other` first, then `self`"""
        if other.n_modes != self.n_modes:
            raise InvalidArgumentError(f"mode mismatch: {self.n_modes} vs {other.n_modes}")
        return Symplectic(self.matrix @ other.matrix)

    def inverse(self) -> "Symplectic":
        omega = symplectic_form(self.n_modes)
        return Symplectic(-omega @ self.matrix.T @ omega)


def vacuum_state(n_modes: int) -> CovMat:
    if n_modes < 1:
        raise InvalidArgumentError(f"n_modes must be at least 1, got {n_modes}")
    return CovMat(np.eye(2 * n_modes), validate=False)


def thermal_state(variance: float) -> CovMat:
    if variance < 1.0:
        raise InvalidArgumentError(f"thermal variance must be >= 1, got {variance}")
    return CovMat(variance * np.eye(2), validate=False)


def two_mode_squeezed_vacuum(variance: float) -> CovMat:
    """TMSV with arm variance V and x/p correlations +/- sqrt(V^2 - 1)"""
    if variance < 1.0:
        raise InvalidArgumentError(f"TMSV variance must be >= 1, got {variance}")
    c = np.sqrt(variance**2 - 1.0)
    z = np.diag([1.0, -1.0])
    return CovMat(np.block([[variance * np.eye(2), c * z], [c * z, variance * np.eye(2)]]))


def direct_sum(*states: CovMat) -> CovMat:
    """Covariance of uncorrelated subsystems"""
    if not states:
        raise InvalidArgumentError("direct_sum needs at least one state")
    return CovMat(linalg.block_diag(*(s.matrix for s in states)), validate=False)


def _embed(s: Symplectic, n_modes: int) -> Symplectic:
    m = np.eye(2 * n_modes)
    k = 2 * s.n_modes
    m[:k, :k] = s.matrix
    return Symplectic(m)


def apply(s: Symplectic, gamma: CovMat) -> CovMat:
    """Return S gamma S^T; a transform on fewer modes acts as identity on the trailing ones"""
    if s.n_modes > gamma.n_modes:
        raise InvalidArgumentError(f"transform acts on {s.n_modes} modes, state has {gamma.n_modes}")
    if s.n_modes < gamma.n_modes:
        s = _embed(s, gamma.n_modes)
    return CovMat(s.matrix @ gamma.matrix @ s.matrix.T, validate=False)


def partial_trace(gamma: CovMat, keep: Iterable[int]) -> CovMat:
    """Marginal on the kept modes, in ascending mode order"""
    modes = sorted(set(keep))
    if not modes:
        raise InvalidArgumentError("keep must name at least one mode")
    if modes[0] < 0 or modes[-1] >= gamma.n_modes:
        raise InvalidArgumentError(f"mode indices {modes} out of range for {gamma.n_modes} modes")
    idx = [i for m in modes for i in _mode_indices(m)]
    return CovMat(gamma.matrix[np.ix_(idx, idx)], validate=False)


def _split(gamma: CovMat, mode: int):
    if not 0 <= mode < gamma.n_modes:
        raise InvalidArgumentError(f"mode {mode} out of range for {gamma.n_modes} modes")
    if gamma.n_modes < 2:
        raise InvalidArgumentError("conditioning needs at least one remaining mode")
    rest = [i for m in range(gamma.n_modes) if m != mode for i in _mode_indices(m)]
    return rest, _mode_indices(mode)


def condition_homodyne(gamma: CovMat, measured_mode: int, quadrature: str) -> CovMat:
    """Conditional state after a homodyne measurement; the measured mode is removed"""
    rest, _ = _split(gamma, measured_mode)
    q = _quadrature_index(measured_mode, quadrature)
    v = gamma.matrix[q, q]
    if v <= 0.0:
        raise NumericalDomainError(f"measured quadrature variance {v} is not positive")
    g_a = gamma.matrix[np.ix_(rest, rest)]
    sigma = gamma.matrix[rest, q]
    return CovMat(g_a - np.outer(sigma, sigma) / v, validate=False)


def condition_heterodyne(gamma: CovMat, measured_mode: int) -> CovMat:
    """Conditional state after a heterodyne measurement; the measured mode is removed"""
    rest, meas = _split(gamma, measured_mode)
    g_a = gamma.matrix[np.ix_(rest, rest)]
    g_b = gamma.matrix[np.ix_(meas, meas)]
    sigma = gamma.matrix[np.ix_(rest, meas)]
    update = sigma @ linalg.solve(g_b + np.eye(2), sigma.T, assume_a="pos")
    return CovMat(g_a - update, validate=False)


def condition_sequence(gamma: CovMat, measurements: Sequence[tuple]) -> CovMat:
    """Apply several homodyne measurements given as (mode, quadrature) on the original indices"""
    state = gamma
    for mode, quadrature in sorted(measurements, key=lambda mq: mq[0], reverse=True):
        state = condition_homodyne(state, mode, quadrature)
    return state


def symplectic_eigenvalues(gamma: Union[CovMat, np.ndarray]) -> np.ndarray:
    """Symplectic spectrum in descending order"""
    m = gamma.matrix if isinstance(gamma, CovMat) else np.asarray(gamma, dtype=float)
    n = m.shape[0] // 2
    try:
        l = linalg.cholesky(m, lower=True)
    except linalg.LinAlgError as e:
        raise InvalidStateError(f"covariance matrix is not positive definite: {e}") from e
    a = l.T @ symplectic_form(n) @ l
    eig = linalg.eigvalsh(1j * a)
    return np.sort(eig)[::-1][:n].copy()


def g_function(nu: float) -> float:
    """Entropy in bits of a thermal mode with symplectic eigenvalue nu"""
    if abs(nu - 1.0) <= PURE_TOL:
        return 0.0
    if nu < 1.0 - PURE_TOL:
        raise InvalidStateError(f"symplectic eigenvalue {nu:.12g} below 1")
    a = (nu + 1.0) / 2.0
    b = (nu - 1.0) / 2.0
    return float(a * np.log2(a) - b * np.log2(b))


def von_neumann_entropy(gamma: CovMat) -> float:
    """Entropy in bits"""
    return float(sum(g_function(float(nu)) for nu in symplectic_eigenvalues(gamma)))
