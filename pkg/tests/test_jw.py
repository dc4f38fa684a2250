from functools import reduce
from itertools import product

import numpy as np
import pytest

from starkvqe import fermiop, integrals1e, integrals2e, jw, scf
from starkvqe.basis import build_sto3g, make_molecule
from starkvqe.jw import PauliString, PauliSum

PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def _kron(letters):
    # qubit 0 is the least significant bit, so it sits rightmost in the product
    return reduce(np.kron, [PAULI[ch] for ch in reversed(letters)])


def _molecular_tensors(name, d):
    mol = make_molecule(name, d)
    basis = build_sto3g(mol)
    h = integrals1e.core_hamiltonian(mol, basis)
    g = integrals2e.build_eri_tensor(basis)
    res = scf.scf_solve(h, g, integrals1e.overlap_matrix(basis), mol.n_electrons)
    return fermiop.build_spin_orbital_tensors(*scf.ao_to_mo(h, g, res.mo_coefficients))


@pytest.fixture(scope="module")
def h2_tensors():
    return _molecular_tensors("H2", 1.4)


@pytest.fixture(scope="module")
def lih_tensors():
    return _molecular_tensors("LiH", 3.0)


def test_letters_round_trip_and_matrix_layout():
    p = PauliString.from_letters("XIZY", 0.5)
    assert p.letters == "XIZY"
    assert np.allclose(p.to_matrix(), 0.5 * _kron("XIZY"))


@pytest.mark.parametrize(
    "a,b,phase,letters",
    [("X", "X", 1, "I"), ("X", "Y", 1j, "Z"), ("Y", "X", -1j, "Z"), ("Y", "Z", 1j, "X"), ("Z", "X", 1j, "Y"), ("Z", "Y", -1j, "X")],
)
def test_single_qubit_table(a, b, phase, letters):
    r = jw.pauli_mul(PauliString.from_letters(a), PauliString.from_letters(b))
    assert r.letters == letters
    assert r.coefficient == phase


def test_pauli_mul_against_kronecker_products():
    rng = np.random.default_rng(5)
    for _ in range(50):
        la = "".join(rng.choice(list("IXYZ"), 6))
        lb = "".join(rng.choice(list("IXYZ"), 6))
        r = jw.pauli_mul(PauliString.from_letters(la), PauliString.from_letters(lb))
        assert np.allclose(r.to_matrix(), _kron(la) @ _kron(lb), atol=1e-14)


def test_pauli_mul_size_mismatch():
    with pytest.raises(ValueError):
        jw.pauli_mul(PauliString.from_letters("X"), PauliString.from_letters("XX"))


def test_single_mode_number_operator():
    n = jw.jw_raising(0, 1) * jw.jw_lowering(0, 1)
    expected = 0.5 * (PauliSum.identity(1) - PauliSum(1, [PauliString.from_letters("Z")]))
    assert n.simplify().equals(expected)
    assert np.allclose(n.to_matrix(), np.diag([0, 1]))


@pytest.mark.parametrize("convention", jw.CONVENTIONS)
def test_anticommutation_six_modes(convention):
    n = 6
    for a, b in product(range(n), repeat=2):
        lo, hi = jw.jw_lowering(a, n, convention), jw.jw_raising(b, n, convention)
        anti = (lo * hi + hi * lo).simplify()
        assert anti.equals(PauliSum.identity(n) if a == b else PauliSum(n))
        lo_b = jw.jw_lowering(b, n, convention)
        assert (lo * lo_b + lo_b * lo).simplify().equals(PauliSum(n))


def test_lowering_matches_dense_fock_operator():
    assert np.allclose(jw.jw_lowering(2, 4).to_matrix(), fermiop.operator_matrix([(2, 0)], 4), atol=1e-15)
    assert np.allclose(jw.jw_raising(1, 4).to_matrix(), fermiop.operator_matrix([(1, 1)], 4), atol=1e-15)


def test_lowering_index_checked():
    with pytest.raises(IndexError):
        jw.jw_lowering(4, 4)
    with pytest.raises(ValueError):
        jw.jw_lowering(0, 4, "other")


@pytest.mark.parametrize("name", ["h2_tensors", "lih_tensors"])
def test_mapped_hamiltonian_matches_dense_oracle(name, request):
    t = request.getfixturevalue(name)
    h = jw.map_hamiltonian(t)
    dense = fermiop.dense_fock_matrix(t)
    assert all(c.coefficient.imag == 0 for c in h.terms)
    assert np.abs(h.to_matrix() - dense).max() < 1e-10
    assert h.coefficient("I" * t.n_spin_orbitals).real == pytest.approx(np.trace(dense) / dense.shape[0], abs=1e-12)


def test_h2_term_census(h2_tensors):
    h = jw.map_hamiltonian(h2_tensors)
    # regression value from the first principled run
    assert len(h) == 15
    assert all(abs(t.coefficient) >= 1e-12 for t in h.terms)


def test_constant_is_added_to_identity(h2_tensors):
    base = jw.map_hamiltonian(h2_tensors)
    shifted = jw.map_hamiltonian(h2_tensors, constant=0.7)
    assert shifted.coefficient("IIII") == pytest.approx(base.coefficient("IIII") + 0.7)


def test_number_operator_commutes(lih_tensors):
    h = jw.map_hamiltonian(lih_tensors)
    assert len(jw.number_operator(8).commutator(h).simplify()) == 0


def test_simplify_idempotent_and_faithful(lih_tensors):
    h = jw.map_hamiltonian(lih_tensors, tolerance=0.0)
    once = h.simplify()
    assert once.equals(once.simplify())
    assert np.abs(once.to_matrix() - h.to_matrix()).max() < 1e-12


def test_physics_convention_spectrum(h2_tensors):
    qi = np.linalg.eigvalsh(jw.map_hamiltonian(h2_tensors, convention="qi").to_matrix())
    phys = np.linalg.eigvalsh(jw.map_hamiltonian(h2_tensors, convention="physics").to_matrix())
    assert np.allclose(qi, phys, atol=1e-12)


def test_serialization_round_trip(h2_tensors):
    h = jw.map_hamiltonian(h2_tensors)
    text = h.serialize()
    first = text.splitlines()[0].split()
    assert len(first) == 3 and first[2] == "IIII"
    back = PauliSum.parse(text)
    assert back.equals(h, tolerance=0.0)
    assert back.serialize() == text


def test_adjoint_and_hermiticity():
    op = jw.jw_raising(0, 3) * jw.jw_lowering(2, 3)
    assert not op.is_hermitian()
    assert (op + op.adjoint()).is_hermitian()
    assert np.allclose(op.adjoint().to_matrix(), op.to_matrix().conj().T)


def test_sparse_and_dense_agree():
    rng = np.random.default_rng(8)
    terms = [PauliString.from_letters("".join(rng.choice(list("IXYZ"), 5)), complex(*rng.normal(size=2))) for _ in range(10)]
    s = PauliSum(5, terms)
    dense = sum(t.coefficient * _kron(t.letters) for t in terms)
    assert np.allclose(s.to_matrix(), dense, atol=1e-14)
    assert np.allclose(s.to_sparse().toarray(), dense, atol=1e-14)
