"""State fidelity and the composite fitness score.

The composite score rewards fidelity to the target and penalizes the length
and the T-count of the genome:

    composite = w_fidelity * fidelity - w_depth * depth / d_max - w_tops * t_ops / d_max

Dividing both penalties by the largest genome length the search allows
bounds them in [0, 1], so the weights are comparable across experiments
that use different depth ranges.

"""
from typing import NamedTuple

import jax.numpy as jnp
import numpy as np

from qevo.core.states import check_density
from qevo.errors import DimensionMismatch, InvalidInput

__all__ = [
    "FitnessReport",
    "FitnessWeights",
    "fidelities",
    "fidelity_density",
    "fidelity_pure",
    "fitness",
]


class FitnessWeights(NamedTuple):
    w_fidelity: float = 1.0
    w_depth: float = 0.1
    w_tops: float = 0.05

    def validate(self) -> "FitnessWeights":
        if self.w_fidelity <= 0:
            raise InvalidInput(f"w_fidelity must be positive, got {self.w_fidelity}.")
        if self.w_depth < 0 or self.w_tops < 0:
            raise InvalidInput("Penalty weights must be non-negative.")
        return self


class FitnessReport(NamedTuple):
    fidelity: float
    depth_score: float
    tops_score: float
    composite: float

    def to_json(self):
        return self._asdict()


def _clamp(value) -> float:
    return float(min(max(float(value), 0.0), 1.0))


def fidelity_pure(psi, phi) -> float:
    """Fidelity |<psi|phi>|**2 between two pure states."""
    psi = jnp.asarray(psi, dtype=jnp.complex128)
    phi = jnp.asarray(phi, dtype=jnp.complex128)
    if psi.shape != phi.shape:
        raise DimensionMismatch(
            f"Cannot compare states of shapes {psi.shape} and {phi.shape}."
        )
    return _clamp(jnp.abs(jnp.vdot(psi, phi)) ** 2)


def fidelities(states: np.ndarray, target) -> np.ndarray:
    """Fidelity of each row of `states` with the target, clamped to [0, 1].

    This is the evaluation hot path. Every evaluation mode goes through it
    on host memory so the reports do not depend on how states were batched.
    """
    states = np.asarray(states, dtype=np.complex128)
    target = np.asarray(target, dtype=np.complex128)
    if states.shape[-1] != target.shape[0]:
        raise DimensionMismatch(
            f"Cannot compare states of dimension {states.shape[-1]} with a target"
            f" of dimension {target.shape[0]}."
        )
    overlaps = states @ np.conj(target)
    return np.clip(np.abs(overlaps) ** 2, 0.0, 1.0)


# Eigenvalues below this fraction of the largest are treated as zero.
EIGENVALUE_CUTOFF = 1e-12


def _sqrtm_psd(rho: jnp.ndarray) -> jnp.ndarray:
    eigenvalues, eigenvectors = jnp.linalg.eigh(rho)
    cutoff = EIGENVALUE_CUTOFF * jnp.max(jnp.abs(eigenvalues))
    roots = jnp.where(eigenvalues > cutoff, jnp.sqrt(jnp.clip(eigenvalues, 0.0, None)), 0.0)
    return (eigenvectors * roots) @ jnp.conj(eigenvectors.T)


def fidelity_density(rho, sigma) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))**2.

    The trace is computed as the sum of the singular values of
    sqrt(rho) sqrt(sigma), which equals it and does not take the square root
    of the round-off eigenvalues of a rank-deficient product. The square
    roots of `rho` and `sigma` drop eigenvalues below `EIGENVALUE_CUTOFF`
    times the largest one.
    """
    rho = check_density(rho)
    sigma = check_density(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(
            f"Cannot compare density matrices of shapes {rho.shape} and {sigma.shape}."
        )
    product = _sqrtm_psd(rho) @ _sqrtm_psd(sigma)
    singular_values = jnp.linalg.svd(product, compute_uv=False)
    return _clamp(jnp.sum(singular_values) ** 2)


def fitness(
    fidelity: float,
    depth: int,
    t_ops: int,
    weights: FitnessWeights,
    d_max: int,
) -> FitnessReport:
    if d_max <= 0:
        raise InvalidInput(f"d_max must be positive, got {d_max}.")
    if depth < 0 or t_ops < 0:
        raise InvalidInput("Depth and T-count are non-negative.")
    if t_ops > depth:
        raise InvalidInput(f"A genome of depth {depth} cannot hold {t_ops} T gates.")

    fidelity = _clamp(fidelity)
    depth_score = depth / d_max
    tops_score = t_ops / d_max
    composite = (
        weights.w_fidelity * fidelity
        - weights.w_depth * depth_score
        - weights.w_tops * tops_score
    )
    return FitnessReport(fidelity, depth_score, tops_score, composite)
