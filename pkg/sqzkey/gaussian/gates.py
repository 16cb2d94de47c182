"""
Symplectic gates on interleaved (x, p) quadratures
"""

from typing import Optional

import numpy as np

from sqzkey.errors import InvalidArgumentError
from sqzkey.gaussian.covariance import Symplectic


def _resolve_modes(n_modes: Optional[int], *modes: int) -> int:
    needed = max(modes) + 1
    if min(modes) < 0:
        raise InvalidArgumentError(f"mode indices must be non-negative, got {modes}")
    if n_modes is None:
        return needed
    if n_modes < needed:
        raise InvalidArgumentError(f"mode {needed - 1} out of range for {n_modes} modes")
    return n_modes


def squeezer(mode: int, variance_x: float, n_modes: Optional[int] = None) -> Symplectic:
    """Single-mode squeezer taking vacuum to diag(variance_x, 1/variance_x)"""
    if variance_x <= 0:
        raise InvalidArgumentError(f"squeezed variance must be positive, got {variance_x}")
    n = _resolve_modes(n_modes, mode)
    s = np.eye(2 * n)
    r = np.sqrt(variance_x)
    s[2 * mode, 2 * mode] = r
    s[2 * mode + 1, 2 * mode + 1] = 1.0 / r
    return Symplectic(s)


def beamsplitter(mode_a: int, mode_b: int, transmittance: float, n_modes: Optional[int] = None) -> Symplectic:
    """x_a' = sqrt(T) x_a + sqrt(1-T) x_b, x_b' = -sqrt(1-T) x_a + sqrt(T) x_b, same for p"""
    if mode_a == mode_b:
        raise InvalidArgumentError("beamsplitter needs two distinct modes")
    if not 0.0 <= transmittance <= 1.0:
        raise InvalidArgumentError(f"transmittance must lie in [0, 1], got {transmittance}")
    n = _resolve_modes(n_modes, mode_a, mode_b)
    t = np.sqrt(transmittance)
    r = np.sqrt(1.0 - transmittance)
    s = np.eye(2 * n)
    for q in (0, 1):
        a = 2 * mode_a + q
        b = 2 * mode_b + q
        s[a, a], s[a, b] = t, r
        s[b, a], s[b, b] = -r, t
    return Symplectic(s)


def rotation(mode: int, theta: float, n_modes: Optional[int] = None) -> Symplectic:
    """Phase-space rotation: x' = cos x + sin p, p' = -sin x + cos p"""
    n = _resolve_modes(n_modes, mode)
    c, sn = np.cos(theta), np.sin(theta)
    s = np.eye(2 * n)
    i = 2 * mode
    s[i : i + 2, i : i + 2] = [[c, sn], [-sn, c]]
    return Symplectic(s)


def qnd_gate(target: int, ancilla: int, gain: float, n_modes: Optional[int] = None) -> Symplectic:
    """x_ancilla += gain x_target and p_target -= gain p_ancilla

    Keeps x and p sectors decoupled; with a vacuum ancilla it adds gain**2 of
    noise to the target's p-quadrature only.
    """
    if target == ancilla:
        raise InvalidArgumentError("QND gate needs two distinct modes")
    n = _resolve_modes(n_modes, target, ancilla)
    s = np.eye(2 * n)
    s[2 * ancilla, 2 * target] = gain
    s[2 * target + 1, 2 * ancilla + 1] = -gain
    return Symplectic(s)
