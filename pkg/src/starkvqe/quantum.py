"""Statevector simulation, expectation values and the UCCSD ansatz.

Amplitude index bit q is qubit q (qubit 0 least significant), matching the
Pauli-mask layout of `jw`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import jw
from .fermiop import hf_occupation
from .jw import PauliString, PauliSum

NORM_TOLERANCE = 1e-10
DEFAULT_SHOTS = 4096


@dataclass
class Statevector:
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        dim = self.amplitudes.shape[0]
        if self.amplitudes.ndim != 1 or dim & (dim - 1):
            raise ValueError("amplitude vector length must be a power of two")

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy())

    @classmethod
    def basis_state(cls, n_qubits: int, index: int) -> "Statevector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps)


def hf_reference(n_electrons: int, n_qubits: int) -> Statevector:
    """Determinant with the lowest MO(s) occupied in both spins."""
    if not 0 <= n_electrons <= n_qubits:
        raise ValueError("electron count must lie between 0 and the qubit count")
    return Statevector.basis_state(n_qubits, hf_occupation(n_electrons, n_qubits))


def _parity(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values).astype(np.int64) & 1


def apply_pauli(amplitudes: np.ndarray, x: int, z: int) -> np.ndarray:
    """P(x, z) applied to an amplitude vector (a new array)."""
    idx = np.arange(amplitudes.shape[0], dtype=np.int64)
    src = idx ^ x
    phase = jw._IPOW[bin(x & z).count("1") % 4]
    return phase * (1 - 2 * _parity(src & z)) * amplitudes[src]


def apply_exp_pauli(state: Statevector, p: PauliString, inplace: bool = False) -> Statevector:
    """exp(-i theta P / 2) with theta taken from the string's coefficient.

    Uses exp(-i theta P/2) = cos(theta/2) - i sin(theta/2) P, since P^2 = 1.
    """
    theta = complex(p.coefficient)
    if abs(theta.imag) > 1e-14:
        raise ValueError("rotation angle must be real")
    out = state if inplace else state.copy()
    a = out.amplitudes
    half = 0.5 * theta.real
    rotated = apply_pauli(a, p.x, p.z)
    a *= np.cos(half)
    a += -1j * np.sin(half) * rotated
    return out


def expectation(state: Statevector, h: PauliSum) -> float:
    """Exact sum over terms of coeff * <psi|P|psi>."""
    if not h.is_hermitian():
        raise ValueError("expectation needs a Hermitian Pauli sum")
    psi = state.amplitudes
    idx = np.arange(psi.shape[0], dtype=np.int64)
    total = 0.0
    for x, z, c in zip(*h.compiled()):
        # (P psi)[i ^ x] = c' (-1)^{|i & z|} psi[i], with c' carrying i^{|x&z|}
        total += c * np.vdot(psi[idx ^ x], (1 - 2 * _parity(idx & z)) * psi)
    return float(total.real)


def _rotate_to_z(amplitudes: np.ndarray, n_qubits: int, x: int, z: int) -> np.ndarray:
    """Rotate qubits with X or Y letters so the string becomes diagonal."""
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    # Y = S X S^dagger, so H S^dagger maps Y to Z
    y_rot = hadamard @ np.diag([1, -1j])
    psi = amplitudes.reshape([2] * n_qubits)  # axis k is qubit n-1-k
    for q in range(n_qubits):
        if not (x >> q) & 1:
            continue
        u = y_rot if (z >> q) & 1 else hadamard
        axis = n_qubits - 1 - q
        psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [axis])), 0, axis)
    return psi.reshape(-1)


def sampled_expectation(
    state: Statevector,
    h: PauliSum,
    shots: int = DEFAULT_SHOTS,
    seed: int | np.random.Generator | None = None,
) -> float:
    """Shot-noise estimate of <h>, measuring each Pauli term separately.

    For each non-identity term the state is rotated into that term's
    eigenbasis, `shots` bit strings are drawn from the resulting
    probabilities, and the parity eigenvalues are averaged.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    if not h.is_hermitian():
        raise ValueError("expectation needs a Hermitian Pauli sum")
    rng = np.random.default_rng(seed)
    n = state.n_qubits
    outcomes = np.arange(1 << n, dtype=np.int64)
    total = 0.0
    for term in h.terms:
        c = term.coefficient.real
        if term.x == 0 and term.z == 0:
            total += c
            continue
        probs = np.abs(_rotate_to_z(state.amplitudes, n, term.x, term.z)) ** 2
        probs /= probs.sum()
        counts = rng.multinomial(shots, probs)
        eig = 1 - 2 * _parity(outcomes & (term.x | term.z))
        total += c * float(counts @ eig) / shots
    return total


# ------------------------------------------------------------------ UCCSD


@dataclass(frozen=True)
class Excitation:
    """Spin-conserving excitation: occupied modes -> virtual modes."""

    occupied: tuple[int, ...]
    virtual: tuple[int, ...]

    def ladder_ops(self):
        """Operator string of T = a+_a (a+_b) (a_j) a_i."""
        creators = [(m, 1) for m in self.virtual]
        annihilators = [(m, 0) for m in reversed(self.occupied)]
        return creators + annihilators


@dataclass
class UCCAnsatz:
    n_qubits: int
    n_electrons: int
    excitations: list[Excitation]
    generators: list[PauliSum]
    trotter_steps: int = 1
    _compiled: list = field(default=None, repr=False)

    @property
    def parameter_count(self) -> int:
        return len(self.generators)

    def compiled(self):
        """Per generator, the (a, b) index pairs it rotates and their signs.

        Every generator here is a single or double excitation minus its
        adjoint. Its matrix couples disjoint pairs of determinants, G|a> =
        s|b>, G|b> = -s|a>, so exp(t G) is a set of plane rotations. This
        equals the ordered product of its Pauli exponentials because the
        terms of one generator commute.
        """
        if self._compiled is None:
            out = []
            for g in self.generators:
                m = g.to_sparse().tocoo()
                val = m.data.real
                if np.abs(m.data.imag).max(initial=0.0) > 1e-12:
                    raise ValueError("generator matrix is not real")
                keep = (np.abs(val) > 1e-12) & (m.row > m.col)
                b, a, s = m.row[keep], m.col[keep], np.rint(val[keep])
                if len(np.unique(np.concatenate([a, b]))) != 2 * len(a):
                    raise ValueError("generator does not act on disjoint determinant pairs")
                out.append((a, b, s))
            self._compiled = out
        return self._compiled


def enumerate_excitations(n_electrons: int, n_qubits: int) -> list[Excitation]:
    """Spin-conserving singles then doubles, blocked spin ordering."""
    k = n_qubits // 2
    ref = hf_occupation(n_electrons, n_qubits)
    occ = [q for q in range(n_qubits) if (ref >> q) & 1]
    vir = [q for q in range(n_qubits) if not (ref >> q) & 1]

    def spin(q):
        return q // k

    singles = [Excitation((i,), (a,)) for i in occ for a in vir if spin(i) == spin(a)]
    doubles = []
    for i, j in combinations(occ, 2):
        for a, b in combinations(vir, 2):
            if spin(i) + spin(j) == spin(a) + spin(b):
                doubles.append(Excitation((i, j), (a, b)))
    return singles + doubles


def build_uccsd(n_electrons: int, n_qubits: int, trotter_steps: int = 1) -> UCCAnsatz:
    """UCCSD generators JW(T_k - T_k^dagger), one real parameter each."""
    if trotter_steps < 1:
        raise ValueError("trotter_steps must be at least 1")
    excitations = enumerate_excitations(n_electrons, n_qubits)
    generators = []
    for ex in excitations:
        t = jw.ladder_product(ex.ladder_ops(), n_qubits)
        generators.append((t - t.adjoint()).simplify())
    return UCCAnsatz(n_qubits, n_electrons, excitations, generators, trotter_steps)


def _check_parameters(ansatz: UCCAnsatz, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.parameter_count,):
        raise ValueError(f"expected {ansatz.parameter_count} parameters, got shape {theta.shape}")
    return theta


def apply_ansatz(ansatz: UCCAnsatz, theta, reference: Statevector) -> Statevector:
    """First-order Trotter product of exp(theta_k G_k / n), n = trotter_steps.

    Each generator is G = sum_j (-i g_j) P_j with real g_j, so exp(t G) is
    applied as exp(-i (2 t g_j) P_j / 2) for each term in letter order.
    """
    theta = _check_parameters(ansatz, theta)
    state = reference.copy()
    n = ansatz.trotter_steps
    for _ in range(n):
        for t, g in zip(theta, ansatz.generators):
            if t == 0.0:
                continue
            for term in g.terms:
                angle = 2.0 * (t / n) * (1j * term.coefficient).real
                apply_exp_pauli(state, PauliString(term.n_qubits, term.x, term.z, angle), inplace=True)
    return state


def apply_ansatz_fast(ansatz: UCCAnsatz, theta, reference: np.ndarray) -> np.ndarray:
    """Same product as `apply_ansatz` on a real amplitude vector, via plane rotations."""
    theta = _check_parameters(ansatz, theta)
    psi = np.array(reference, dtype=float)
    n = ansatz.trotter_steps
    compiled = ansatz.compiled()
    for _ in range(n):
        for t, (a, b, s) in zip(theta, compiled):
            if t == 0.0:
                continue
            c, sn = np.cos(t / n), np.sin(t / n)
            pa, pb = psi[a], psi[b]
            psi[a] = c * pa - s * sn * pb
            psi[b] = c * pb + s * sn * pa
    return psi
