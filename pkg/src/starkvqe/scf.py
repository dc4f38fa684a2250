"""Restricted closed-shell Hartree-Fock."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


MAX_DAMPING = 0.999


class SCFError(RuntimeError):
    """SCF failed; `result` holds the last iterate when available."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass
class SCFResult:
    mo_coefficients: np.ndarray
    orbital_energies: np.ndarray
    hf_electronic_energy: float
    density: np.ndarray
    fock: np.ndarray
    converged: bool
    iterations: int
    energy_history: list
    hf_total_energy: float | None = None


def lowdin_orthogonalizer(s: np.ndarray, threshold: float = 1e-10) -> np.ndarray:
    """Symmetric orthogonalizer X = S^{-1/2}."""
    w, v = np.linalg.eigh(s)
    if w.min() < threshold:
        raise np.linalg.LinAlgError(f"overlap matrix is near-singular (smallest eigenvalue {w.min():.3e})")
    return (v / np.sqrt(w)) @ v.T


def two_electron_matrix(density: np.ndarray, eri: np.ndarray) -> np.ndarray:
    """G_ij = sum_kl D_kl [(ij|kl) - 1/2 (ik|jl)]."""
    coulomb = np.einsum("ijkl,kl->ij", eri, density)
    exchange = np.einsum("ikjl,kl->ij", eri, density)
    return coulomb - 0.5 * exchange


def electronic_energy(density, h_core, fock) -> float:
    return 0.5 * float(np.sum(density * (h_core + fock)))


def _split_degenerate(eps, c, tolerance=1e-10):
    """Fix the basis inside degenerate eigenvalue clusters.

    Exactly degenerate eigenvectors are arbitrary; for far-separated atoms
    LAPACK returns atom-localized vectors, which traps Roothaan iterations
    between ionic densities. Within each cluster the vectors are rotated to
    diagonalize the projector onto the uniform AO combination, largest
    weight first, so symmetric combinations are preferred.
    """
    c = c.copy()
    uniform = np.ones(c.shape[0]) / np.sqrt(c.shape[0])
    start = 0
    while start < len(eps):
        stop = start + 1
        while stop < len(eps) and eps[stop] - eps[start] < tolerance * max(1.0, abs(eps[start])):
            stop += 1
        if stop - start > 1:
            block = c[:, start:stop]
            w = block.T @ uniform
            _, u = np.linalg.eigh(np.outer(w, w))
            c[:, start:stop] = block @ u[:, ::-1]
        start = stop
    return c


def _diagonalize(fock, x):
    eps, c_prime = np.linalg.eigh(x.T @ fock @ x)
    return eps, _split_degenerate(eps, x @ c_prime)


def scf_solve(
    h_core: np.ndarray,
    eri: np.ndarray,
    s: np.ndarray,
    n_electrons: int,
    *,
    max_iterations: int = 5000,
    density_tolerance: float = 1e-10,
    energy_tolerance: float = 1e-12,
    damping: float = 0.5,
    always_damp: bool = False,
) -> SCFResult:
    """Roothaan iterations from the core-Hamiltonian guess.

    Args:
        h_core: one-electron Hamiltonian, field term included.
        eri: AO integrals (ij|kl).
        s: AO overlap.
        n_electrons: even electron count.
        damping: initial weight of the previous density once damping is
            active; raised toward MAX_DAMPING while the energy keeps
            oscillating without shrinking.
        always_damp: damp from the first iteration instead of waiting for
            the energy to oscillate.

    Raises:
        SCFError: odd electron count, too many electrons, or no convergence.
    """
    if n_electrons % 2:
        raise SCFError("restricted closed-shell SCF needs an even electron count")
    n_orb = h_core.shape[0]
    n_occ = n_electrons // 2
    if n_occ > n_orb:
        raise SCFError("more electron pairs than orbitals")
    x = lowdin_orthogonalizer(s)

    eps, c = _diagonalize(h_core, x)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    fock = h_core + two_electron_matrix(density, eri)
    energy = electronic_energy(density, h_core, fock)
    history = [energy]
    damp = always_damp
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        eps, c = _diagonalize(fock, x)
        new_density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        if damp:
            new_density = damping * density + (1.0 - damping) * new_density
        rms = float(np.sqrt(np.mean((new_density - density) ** 2)))
        density = new_density
        fock = h_core + two_electron_matrix(density, eri)
        new_energy = electronic_energy(density, h_core, fock)
        delta = new_energy - energy
        # sign changes of successive energy steps mark an oscillation
        if len(history) >= 2:
            prev = history[-1] - history[-2]
            if delta * prev < 0 and abs(delta) > energy_tolerance:
                if not damp:
                    damp = True
                    log.debug("SCF energy oscillates at iteration %d; damping on", it)
                elif abs(delta) >= 0.5 * abs(prev):
                    # still oscillating at this damping: halve the step
                    damping = min(0.5 * (1.0 + damping), MAX_DAMPING)
                    log.debug("SCF damping raised to %.4f at iteration %d", damping, it)
        energy = new_energy
        history.append(energy)
        if rms < density_tolerance and abs(delta) < energy_tolerance:
            converged = True
            break

    # final orbitals from the converged Fock matrix
    eps, c = _diagonalize(fock, x)
    result = SCFResult(c, eps, energy, density, fock, converged, it, history)
    if not converged:
        raise SCFError(f"SCF did not converge in {max_iterations} iterations", result)
    return result


def ao_to_mo(h: np.ndarray, eri: np.ndarray, c: np.ndarray):
    """Transform one- and two-electron integrals to the MO basis.

    The two-electron transform runs one index at a time.
    """
    h_mo = c.T @ h @ c
    t = np.einsum("pi,pjkl->ijkl", c, eri)
    t = np.einsum("qj,iqkl->ijkl", c, t)
    t = np.einsum("rk,ijrl->ijkl", c, t)
    t = np.einsum("sl,ijks->ijkl", c, t)
    return h_mo, t
