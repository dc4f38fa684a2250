"""Pauli-string algebra and the Jordan-Wigner mapping.

A Pauli string on n qubits is stored as two bit masks (x, z). Qubit q
carries I, X, Z or Y when (bit q of x, bit q of z) is (0,0), (1,0), (0,1)
or (1,1); Y = i X Z. Qubit 0 is the least significant bit of a
statevector index and the leftmost letter of the text form.

Acting on a basis state, P(x, z)|b> = i^{|x & z|} (-1)^{|b & z|} |b ^ x>.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .fermiop import SpinOrbitalTensors

_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTER.items()}
_IPOW = (1, 1j, -1, -1j)


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Weighted Pauli string coefficient * P(x, z)."""

    n_qubits: int
    x: int
    z: int
    coefficient: complex = 1.0

    @classmethod
    def from_letters(cls, letters: str, coefficient: complex = 1.0) -> "PauliString":
        x = z = 0
        for q, ch in enumerate(letters.upper()):
            bx, bz = _BITS[ch]
            x |= bx << q
            z |= bz << q
        return cls(len(letters), x, z, coefficient)

    @property
    def letters(self) -> str:
        return "".join(_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n_qubits))

    @property
    def key(self) -> tuple[int, int]:
        return self.x, self.z

    def to_matrix(self) -> np.ndarray:
        return PauliSum(self.n_qubits, {self.key: self.coefficient}).to_matrix()


def pauli_mul(p: PauliString, q: PauliString) -> PauliString:
    """Product p*q with the phase from the single-qubit multiplication table."""
    if p.n_qubits != q.n_qubits:
        raise ValueError("Pauli strings act on different qubit counts")
    phase, x, z = _mul_masks(p.x, p.z, q.x, q.z)
    return PauliString(p.n_qubits, x, z, p.coefficient * q.coefficient * phase)


def _mul_masks(x1: int, z1: int, x2: int, z2: int):
    x3, z3 = x1 ^ x2, z1 ^ z2
    k = _popcount(x1 & z1) + _popcount(x2 & z2) - _popcount(x3 & z3) + 2 * _popcount(z1 & x2)
    return _IPOW[k % 4], x3, z3


class PauliSum:
    """Linear combination of Pauli strings over a fixed number of qubits.

    Terms live in a dict keyed by (x, z) masks, so duplicates merge on
    construction. Instances are treated as immutable.
    """

    __slots__ = ("n_qubits", "_terms", "_cache")

    def __init__(self, n_qubits: int, terms: dict | Iterable[PauliString] | None = None):
        self.n_qubits = n_qubits
        merged: dict[tuple[int, int], complex] = {}
        if isinstance(terms, dict):
            for k, c in terms.items():
                merged[k] = merged.get(k, 0) + complex(c)
        elif terms is not None:
            for t in terms:
                if t.n_qubits != n_qubits:
                    raise ValueError("term has the wrong number of qubits")
                merged[t.key] = merged.get(t.key, 0) + complex(t.coefficient)
        self._terms = merged
        self._cache = {}

    # construction helpers
    @classmethod
    def identity(cls, n_qubits: int, coefficient: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {(0, 0): coefficient})

    @property
    def terms(self) -> list[PauliString]:
        """Terms in lexicographic order of their letters."""
        out = [PauliString(self.n_qubits, x, z, c) for (x, z), c in self._terms.items()]
        return sorted(out, key=lambda t: t.letters)

    def coefficient(self, letters: str) -> complex:
        p = PauliString.from_letters(letters)
        return self._terms.get(p.key, 0.0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms)

    # algebra
    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        merged = dict(self._terms)
        for k, c in other._terms.items():
            merged[k] = merged.get(k, 0) + c
        return PauliSum(self.n_qubits, merged)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __rmul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(self.n_qubits, {k: scalar * c for k, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PauliSum):
            return other * self
        self._check(other)
        out: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                phase, x, z = _mul_masks(x1, z1, x2, z2)
                out[(x, z)] = out.get((x, z), 0) + phase * c1 * c2
        return PauliSum(self.n_qubits, out)

    def adjoint(self) -> "PauliSum":
        return PauliSum(self.n_qubits, {k: np.conj(c) for k, c in self._terms.items()})

    def commutator(self, other: "PauliSum") -> "PauliSum":
        return (self * other - other * self).simplify()

    def simplify(self, tolerance: float = 1e-12) -> "PauliSum":
        return PauliSum(self.n_qubits, {k: c for k, c in self._terms.items() if abs(c) > tolerance})

    def is_hermitian(self, tolerance: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tolerance for c in self._terms.values())

    def equals(self, other: "PauliSum", tolerance: float = 1e-12) -> bool:
        return len((self - other).simplify(tolerance)) == 0

    def _check(self, other):
        if self.n_qubits != other.n_qubits:
            raise ValueError("Pauli sums act on different qubit counts")

    # numerics
    def compiled(self):
        """Arrays (x, z, coefficient * i^{|x&z|}) for vectorized evaluation."""
        if "compiled" not in self._cache:
            keys = list(self._terms)
            x = np.array([k[0] for k in keys], dtype=np.int64)
            z = np.array([k[1] for k in keys], dtype=np.int64)
            c = np.array([self._terms[k] * _IPOW[_popcount(k[0] & k[1]) % 4] for k in keys], dtype=complex)
            self._cache["compiled"] = (x, z, c)
        return self._cache["compiled"]

    def to_sparse(self) -> sp.csr_matrix:
        if "sparse" not in self._cache:
            dim = 1 << self.n_qubits
            idx = np.arange(dim, dtype=np.int64)
            rows, cols, vals = [], [], []
            for x, z, c in zip(*self.compiled()):
                sign = 1 - 2 * (np.bitwise_count(idx & z).astype(np.int64) & 1)
                rows.append(idx ^ x)
                cols.append(idx)
                vals.append(c * sign)
            if rows:
                m = sp.csr_matrix(
                    (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
                )
            else:
                m = sp.csr_matrix((dim, dim), dtype=complex)
            m.sum_duplicates()
            self._cache["sparse"] = m
        return self._cache["sparse"]

    def to_matrix(self) -> np.ndarray:
        return self.to_sparse().toarray()

    # text form
    def serialize(self) -> str:
        lines = [f"{t.coefficient.real:.17g} {t.coefficient.imag:.17g} {t.letters}" for t in self.terms]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def parse(cls, text: str) -> "PauliSum":
        terms = []
        for line in text.splitlines():
            if not line.strip():
                continue
            re_, im_, letters = line.split()
            terms.append(PauliString.from_letters(letters, complex(float(re_), float(im_))))
        if not terms:
            raise ValueError("empty Pauli sum text")
        return cls(terms[0].n_qubits, terms)

    def __repr__(self):
        return f"PauliSum(n_qubits={self.n_qubits}, n_terms={len(self)})"


CONVENTIONS = ("qi", "physics")


@lru_cache(maxsize=None)
def jw_lowering(mode: int, n_qubits: int, convention: str = "qi") -> PauliSum:
    """JW image of the annihilator a_mode.

    "qi": a = Z...Z (X + iY)/2, so |1> is the occupied state.
    "physics": a = Z...Z (X - iY)/2, the alternative sign convention.
    """
    if not 0 <= mode < n_qubits:
        raise IndexError(f"mode {mode} out of range for {n_qubits} qubits")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown JW convention {convention!r}")
    string = (1 << mode) - 1
    x = 1 << mode
    s = 1 if convention == "qi" else -1
    return PauliSum(n_qubits, {(x, string): 0.5, (x, string | x): 0.5j * s})


def jw_raising(mode: int, n_qubits: int, convention: str = "qi") -> PauliSum:
    return jw_lowering(mode, n_qubits, convention).adjoint()


@lru_cache(maxsize=200_000)
def _ladder_product(ops: tuple, n_qubits: int, convention: str) -> PauliSum:
    out = PauliSum.identity(n_qubits)
    for mode, creation in ops:
        factor = jw_raising(mode, n_qubits, convention) if creation else jw_lowering(mode, n_qubits, convention)
        out = out * factor
    return out.simplify(1e-15)


def ladder_product(ops, n_qubits: int, convention: str = "qi") -> PauliSum:
    """JW image of a product of ladder operators given as (mode, is_creation)."""
    return _ladder_product(tuple((int(m), int(c)) for m, c in ops), n_qubits, convention)


def number_operator(n_qubits: int) -> PauliSum:
    """Total particle number sum_q (I - Z_q)/2."""
    terms = {(0, 0): n_qubits / 2}
    for q in range(n_qubits):
        terms[(0, 1 << q)] = -0.5
    return PauliSum(n_qubits, terms)


def map_hamiltonian(
    tensors: SpinOrbitalTensors,
    convention: str = "qi",
    tolerance: float = 1e-12,
    constant: float = 0.0,
) -> PauliSum:
    """JW image of the second-quantized Hamiltonian; coefficients made real."""
    n = tensors.n_spin_orbitals
    acc: dict[tuple[int, int], complex] = {(0, 0): constant}

    def add(coeff, image):
        for key, c in image._terms.items():
            acc[key] = acc.get(key, 0) + coeff * c

    one, two = tensors.one_body, tensors.two_body
    for p, q in zip(*np.nonzero(np.abs(one) > 1e-15)):
        add(one[p, q], _ladder_product(((int(p), 1), (int(q), 0)), n, convention))
    for p, q, r, s in zip(*np.nonzero(np.abs(two) > 1e-15)):
        if p == r or q == s:
            continue  # a+_p a+_p = 0
        ops = ((int(p), 1), (int(r), 1), (int(s), 0), (int(q), 0))
        add(0.5 * two[p, q, r, s], _ladder_product(ops, n, convention))
    out = {}
    for key, c in acc.items():
        if abs(c) > tolerance:
            if abs(c.imag) > 1e-10:
                raise ValueError("mapped Hamiltonian has a non-real coefficient")
            out[key] = c.real
    return PauliSum(n, out)
