"""Second-quantized Hamiltonian over spin orbitals.

Spin orbitals use blocked ordering: spatial orbital k with spin up is mode
k, with spin down mode K + k. The Hamiltonian is

    H = sum_pq t_pq a+_p a_q + 1/2 sum_pqrs u_pqrs a+_p a+_r a_s a_q,

with u_pqrs = (pq|rs) in chemist order. The factor 1/2 is applied when the
tensors are consumed, never stored.

Occupation-number basis states are integers whose bit q is the occupation
of mode q. Fermionic signs follow the Jordan-Wigner ordering: a_q picks up
(-1)^(number of occupied modes below q).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DENSE_MODES = 10


@dataclass(frozen=True)
class SpinOrbitalTensors:
    one_body: np.ndarray
    two_body: np.ndarray

    @property
    def n_spin_orbitals(self) -> int:
        return self.one_body.shape[0]


def build_spin_orbital_tensors(h_mo: np.ndarray, eri_mo: np.ndarray) -> SpinOrbitalTensors:
    """Expand spatial MO integrals to spin orbitals (blocked ordering)."""
    k = h_mo.shape[0]
    n = 2 * k
    one = np.zeros((n, n))
    two = np.zeros((n, n, n, n))
    for s in (0, k):
        one[s : s + k, s : s + k] = h_mo
        for t in (0, k):
            two[s : s + k, s : s + k, t : t + k, t : t + k] = eri_mo
    return SpinOrbitalTensors(one, two)


def apply_operator(ops, state: int):
    """Apply a product of ladder operators to a basis state.

    Args:
        ops: sequence of (mode, is_creation), rightmost applied first.
        state: occupation bit string.

    Returns:
        (sign, new_state), or (0, None) if the state is annihilated.
    """
    sign = 1
    for mode, creation in reversed(ops):
        occupied = (state >> mode) & 1
        if occupied == creation:
            return 0, None
        if bin(state & ((1 << mode) - 1)).count("1") % 2:
            sign = -sign
        state ^= 1 << mode
    return sign, state


def operator_matrix(ops, n_modes: int) -> np.ndarray:
    """Dense matrix of a ladder-operator product on the full Fock space."""
    dim = 1 << n_modes
    out = np.zeros((dim, dim))
    for col in range(dim):
        sign, row = apply_operator(ops, col)
        if sign:
            out[row, col] += sign
    return out


def dense_fock_matrix(tensors: SpinOrbitalTensors, tolerance: float = 0.0) -> np.ndarray:
    """Brute-force matrix of the Hamiltonian on all 2^n occupation states."""
    n = tensors.n_spin_orbitals
    if n > MAX_DENSE_MODES:
        raise ValueError(f"{n} modes exceeds the dense limit of {MAX_DENSE_MODES}")
    terms = []
    for p, q in zip(*np.nonzero(np.abs(tensors.one_body) > tolerance)):
        terms.append((tensors.one_body[p, q], ((p, 1), (q, 0))))
    for p, q, r, s in zip(*np.nonzero(np.abs(tensors.two_body) > tolerance)):
        terms.append((0.5 * tensors.two_body[p, q, r, s], ((p, 1), (r, 1), (s, 0), (q, 0))))
    dim = 1 << n
    out = np.zeros((dim, dim))
    for col in range(dim):
        for coeff, ops in terms:
            sign, row = apply_operator(ops, col)
            if sign:
                out[row, col] += sign * coeff
    return out


def popcount_sector(n_modes: int, n_particles: int) -> np.ndarray:
    """Indices of basis states holding exactly n_particles."""
    idx = np.arange(1 << n_modes)
    return idx[np.bitwise_count(idx) == n_particles]


def hf_occupation(n_electrons: int, n_spin_orbitals: int) -> int:
    """Bit string with the lowest MOs doubly occupied (blocked spin order)."""
    k = n_spin_orbitals // 2
    n_up = (n_electrons + 1) // 2
    n_down = n_electrons // 2
    state = 0
    for i in range(n_up):
        state |= 1 << i
    for i in range(n_down):
        state |= 1 << (k + i)
    return state
