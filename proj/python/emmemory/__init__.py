"""Gravitational and electromagnetic memory on the celestial sphere."""

from ._core import (
    Grid,
    Parity,
    Pulse,
    af_train,
    aw_from_xi,
    bns_energy,
    compute_kernel,
    divergence,
    gradient,
    integrate_jacobi,
    scalar_harmonic,
    sht_analyze,
    sht_synthesize,
    solve_memory,
    tensor_analyze,
    tensor_basis,
    tensor_divergence_factor,
    total_mass_change,
    validate,
    vector_basis,
    xi_train,
)

__all__ = [
    "Grid",
    "Parity",
    "Pulse",
    "af_train",
    "aw_from_xi",
    "bns_energy",
    "compute_kernel",
    "divergence",
    "gradient",
    "integrate_jacobi",
    "scalar_harmonic",
    "sht_analyze",
    "sht_synthesize",
    "solve_memory",
    "tensor_analyze",
    "tensor_basis",
    "tensor_divergence_factor",
    "total_mass_change",
    "validate",
    "vector_basis",
    "xi_train",
]
