"""
Gaussian-state linear algebra
"""

from sqzkey.gaussian.covariance import (
    CovMat,
    Symplectic,
    apply,
    condition_heterodyne,
    condition_homodyne,
    condition_sequence,
    direct_sum,
    g_function,
    partial_trace,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_state,
    two_mode_squeezed_vacuum,
    vacuum_state,
    von_neumann_entropy,
)
from sqzkey.gaussian.gates import beamsplitter, qnd_gate, rotation, squeezer

__all__ = [
    "CovMat",
    "Symplectic",
    "apply",
    "beamsplitter",
    "condition_heterodyne",
    "condition_homodyne",
    "condition_sequence",
    "direct_sum",
    "g_function",
    "partial_trace",
    "qnd_gate",
    "rotation",
    "squeezer",
    "symplectic_eigenvalues",
    "symplectic_form",
    "thermal_state",
    "two_mode_squeezed_vacuum",
    "vacuum_state",
    "von_neumann_entropy",
]
