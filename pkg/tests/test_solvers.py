import numpy as np
import pytest

from starkvqe import fermiop, integrals1e, integrals2e, jw, quantum, scf, solvers
from starkvqe.basis import build_sto3g, make_molecule
from starkvqe.jw import PauliString, PauliSum
from starkvqe.solvers import VQEConfig


def _problem(name, d):
    mol = make_molecule(name, d)
    basis = build_sto3g(mol)
    h = integrals1e.core_hamiltonian(mol, basis)
    g = integrals2e.build_eri_tensor(basis)
    res = scf.scf_solve(h, g, integrals1e.overlap_matrix(basis), mol.n_electrons)
    tensors = fermiop.build_spin_orbital_tensors(*scf.ao_to_mo(h, g, res.mo_coefficients))
    return res, tensors, jw.map_hamiltonian(tensors)


@pytest.fixture(scope="module")
def h2():
    return _problem("H2", 1.4)


def test_exact_single_z():
    assert solvers.exact_ground_energy(PauliSum(1, [PauliString.from_letters("Z")])) == -1.0


def test_exact_xx_plus_yy():
    h = PauliSum(2, [PauliString.from_letters("XX", 0.5), PauliString.from_letters("YY", 0.5)])
    assert solvers.exact_ground_energy(h) == pytest.approx(-1.0, abs=1e-14)
    # the -1 state is (|01> - |10>)/sqrt(2), inside the one-particle sector
    assert solvers.exact_ground_energy(h, 1) == pytest.approx(-1.0, abs=1e-14)
    assert solvers.exact_ground_energy(h, 0) == pytest.approx(0.0, abs=1e-14)


def test_exact_matches_dense_fock_oracle(h2):
    _, tensors, h = h2
    dense = fermiop.dense_fock_matrix(tensors)
    idx = fermiop.popcount_sector(4, 2)
    ref = np.linalg.eigvalsh(dense[np.ix_(idx, idx)])[0]
    assert solvers.exact_ground_energy(h, 2) == pytest.approx(ref, abs=1e-10)


def test_exact_qubit_limit():
    with pytest.raises(ValueError):
        solvers.exact_ground_energy(PauliSum.identity(12))


def test_config_validation():
    with pytest.raises(ValueError):
        VQEConfig(optimizer="cobyla")
    with pytest.raises(ValueError):
        VQEConfig(max_iterations=0)
    with pytest.raises(ValueError):
        VQEConfig(shots=0)


def test_nelder_mead_quadratic():
    res = solvers.nelder_mead(lambda x: float(np.sum((x - 1.0) ** 2)), np.zeros(3), VQEConfig(energy_tolerance=1e-16))
    assert np.abs(res.x - 1.0).max() < 1e-6
    assert res.converged


def test_nelder_mead_rosenbrock():
    def rosen(x):
        return float(100.0 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2)

    res = solvers.nelder_mead(rosen, [-1.2, 1.0], VQEConfig(energy_tolerance=1e-16, initial_step=0.5))
    assert np.abs(res.x - 1.0).max() < 1e-4


def test_nelder_mead_constant_function():
    x0 = np.array([0.3, -0.2])
    res = solvers.nelder_mead(lambda x: 2.0, x0)
    assert res.converged
    assert np.array_equal(res.x, x0)
    assert res.fun == 2.0


def test_nelder_mead_history_non_increasing():
    res = solvers.nelder_mead(lambda x: float(np.sum(np.cos(3 * x) + x**2)), np.full(4, 0.4))
    assert np.all(np.diff(res.history) <= 0)


def test_nelder_mead_respects_iteration_ceiling():
    res = solvers.nelder_mead(lambda x: float(np.sum(x**2)), np.ones(5), VQEConfig(max_iterations=10))
    assert res.iterations <= 10
    assert not res.converged


def test_spsa_quadratic():
    cfg = VQEConfig(optimizer="spsa", max_iterations=2000, energy_tolerance=0.0, seed=4)
    res = solvers.spsa(lambda x: float(np.sum((x - 0.5) ** 2)), np.zeros(3), cfg)
    assert np.abs(res.x - 0.5).max() < 1e-3


def test_spsa_deterministic_under_seed():
    cfg = VQEConfig(optimizer="spsa", max_iterations=100, seed=9)
    f = lambda x: float(np.sum((x - 0.5) ** 2))  # noqa: E731
    a, b = solvers.spsa(f, np.zeros(4), cfg), solvers.spsa(f, np.zeros(4), cfg)
    assert np.array_equal(a.x, b.x) and a.history == b.history


def test_spsa_history_non_increasing():
    cfg = VQEConfig(optimizer="spsa", max_iterations=300, seed=1)
    res = solvers.spsa(lambda x: float(np.sum(np.sin(x) + x**2)), np.ones(3), cfg)
    assert np.all(np.diff(res.history) <= 0)
    assert res.evaluations == 3 * res.iterations + 1


def test_spsa_under_noise():
    target = np.array([0.5, -0.3, 0.2])
    x0 = np.zeros(3)
    ratios = []
    for seed in range(50):
        noise = np.random.default_rng(1000 + seed)

        def f(x):
            return float(np.sum((x - target) ** 2) + noise.normal(scale=0.01))

        res = solvers.spsa(f, x0, VQEConfig(optimizer="spsa", max_iterations=2000, energy_tolerance=0.0, seed=seed))
        ratios.append(np.linalg.norm(x0 - target) / np.linalg.norm(res.x - target))
    assert np.median(ratios) >= 10


def test_objective_at_zero_is_hf(h2):
    res, _, h = h2
    ansatz = quantum.build_uccsd(2, 4)
    f = solvers.make_objective(h, ansatz, quantum.hf_reference(2, 4), 2)
    assert f(np.zeros(3)) == pytest.approx(res.hf_electronic_energy, abs=1e-8)


def test_objective_matches_statevector_expectation(h2):
    _, _, h = h2
    ansatz = quantum.build_uccsd(2, 4)
    ref = quantum.hf_reference(2, 4)
    f = solvers.make_objective(h, ansatz, ref, 2)
    theta = np.array([0.2, -0.1, 0.3])
    assert f(theta) == pytest.approx(quantum.expectation(quantum.apply_ansatz(ansatz, theta, ref), h), abs=1e-12)


def test_vqe_h2_reaches_fci(h2):
    res, _, h = h2
    ansatz = quantum.build_uccsd(2, 4)
    ref = quantum.hf_reference(2, 4)
    out = solvers.vqe_minimize(h, ansatz, ref)
    exact = solvers.exact_ground_energy(h, 2)
    assert out.energy >= exact - 1e-12
    assert out.energy - exact < 1e-6
    assert out.energy < res.hf_electronic_energy
    assert np.all(np.diff(out.history) <= 0)
    state = quantum.apply_ansatz(ansatz, out.parameters, ref)
    assert out.energy == pytest.approx(quantum.expectation(state, h), abs=1e-12)


def test_vqe_spsa_with_shots(h2):
    _, _, h = h2
    ansatz = quantum.build_uccsd(2, 4)
    cfg = VQEConfig(optimizer="spsa", shots=512, max_iterations=150, seed=2)
    a = solvers.vqe_minimize(h, ansatz, quantum.hf_reference(2, 4), cfg)
    b = solvers.vqe_minimize(h, ansatz, quantum.hf_reference(2, 4), cfg)
    assert a.energy == b.energy and a.sampled_energy == b.sampled_energy
    assert a.energy >= solvers.exact_ground_energy(h, 2) - 1e-12
    assert a.sampled_energy is not None


def test_vqe_rejects_qubit_mismatch(h2):
    _, _, h = h2
    with pytest.raises(ValueError):
        solvers.vqe_minimize(h, quantum.build_uccsd(2, 6), quantum.hf_reference(2, 6))
