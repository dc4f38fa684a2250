import dataclasses
import math

import numpy as np
import pytest

from oracles import ONE_ELECTRON_FAMILIES, ORACLE_3D, family_errors
from starkvqe import integrals1e, integrals2e, scf, stark
from starkvqe.basis import build_sto3g, make_molecule
from starkvqe.specfun import integrate_3d
from starkvqe.stark import FieldConfig


@pytest.fixture(scope="module")
def lih3():
    mol = make_molecule("LiH", 3.0)
    return mol, build_sto3g(mol)


def _quadrature_field_matrix(basis, magnitude, d):
    out = np.zeros((len(basis), len(basis)))
    for i, oi in enumerate(basis):
        for j, oj in enumerate(basis):
            f = lambda r, z: -magnitude * z * oi.value(r, z) * oj.value(r, z)  # noqa: E731
            out[i, j] = integrate_3d(f, spec=ORACLE_3D, axis_points=(0.0, d)).value
    return out


def test_compensated_diagonal_is_zero(lih3):
    mol, basis = lih3
    m = stark.field_matrix(mol, basis, FieldConfig(0.1, "compensated"))
    assert np.all(np.diag(m) == 0.0)


def test_compensated_entries_against_quadrature(lih3):
    mol, basis = lih3
    m = stark.field_matrix(mol, basis, FieldConfig(0.1, "compensated"))
    ref = _quadrature_field_matrix(basis, 0.1, 3.0)
    # the proton at A offsets -F d <1s|1s> on the H 1s diagonal
    s = integrals1e.overlap_matrix(basis)
    ref[0, 0] += 0.1 * 3.0 * s[0, 0]
    assert np.abs(m - ref).max() < 1e-7


def test_dipole_entries_against_quadrature(lih3):
    mol, basis = lih3
    m = stark.field_matrix(mol, basis, FieldConfig(0.1))
    assert np.abs(m - _quadrature_field_matrix(basis, 0.1, 3.0)).max() < 1e-7


@pytest.mark.parametrize("convention", stark.CONVENTIONS)
def test_linear_and_odd_in_field(lih3, convention):
    mol, basis = lih3
    m1 = stark.field_matrix(mol, basis, FieldConfig(0.01, convention))
    m2 = stark.field_matrix(mol, basis, FieldConfig(0.02, convention))
    mneg = stark.field_matrix(mol, basis, FieldConfig(-0.01, convention))
    assert np.abs(m2 - 2 * m1).max() < 1e-15
    assert np.array_equal(mneg, -m1)
    assert np.array_equal(m1, m1.T)


def test_same_center_s_and_p_diagonal_vanish(lih3):
    _, basis = lih3
    z = stark.dipole_matrix(basis)
    assert z[1, 1] == z[2, 2] == z[3, 3] == 0.0
    assert z[0, 0] == pytest.approx(3.0 * integrals1e.overlap(basis[0], basis[0]), rel=1e-12)


def test_field_config_validation():
    with pytest.raises(ValueError):
        FieldConfig(0.1, "gauge")
    with pytest.raises(ValueError):
        FieldConfig(math.nan)


@pytest.mark.parametrize("name,d,expected", [("H2", 2.0, 0.5), ("LiH", 3.0, 1.0)])
def test_nuclear_repulsion(name, d, expected):
    assert stark.nuclear_energy(make_molecule(name, d)) == pytest.approx(expected, rel=1e-15)
    assert stark.nuclear_energy(make_molecule(name, d), FieldConfig(0.1, "compensated")) == pytest.approx(expected)


def test_nuclear_repulsion_decays():
    assert stark.nuclear_energy(make_molecule("LiH", 1e6)) < 1e-5


def test_dipole_convention_adds_nuclear_field_energy():
    mol = make_molecule("LiH", 3.0)
    # only the proton at z = d contributes
    assert stark.nuclear_energy(mol, FieldConfig(0.1)) == pytest.approx(1.0 + 0.3, rel=1e-14)


def test_coincident_nuclei_rejected():
    mol = make_molecule("H2", 1.0)
    a, b = mol.atoms
    collapsed = dataclasses.replace(mol, atoms=(dataclasses.replace(a, position=b.position), b))
    with pytest.raises(ValueError):
        stark.nuclear_energy(collapsed)


def _h2_hf_energy(field):
    mol = make_molecule("H2", 1.4)
    basis = build_sto3g(mol)
    h = integrals1e.core_hamiltonian(mol, basis) + stark.field_matrix(mol, basis, field)
    res = scf.scf_solve(h, integrals2e.build_eri_tensor(basis), integrals1e.overlap_matrix(basis), 2)
    return res.hf_electronic_energy + stark.nuclear_energy(mol, field)


def test_dipole_convention_keeps_h2_parity():
    assert _h2_hf_energy(FieldConfig(0.05)) == pytest.approx(_h2_hf_energy(FieldConfig(-0.05)), abs=1e-12)


def test_compensated_convention_breaks_h2_parity():
    plus = _h2_hf_energy(FieldConfig(0.05, "compensated"))
    minus = _h2_hf_energy(FieldConfig(-0.05, "compensated"))
    assert abs(plus - minus) > 1e-3


@pytest.mark.parametrize("family", [f for f in ONE_ELECTRON_FAMILIES if f.kind == "dipole"], ids=lambda f: f.name)
def test_dipole_family_matches_quadrature(family):
    worst, analytic, ref = family_errors(family, n_sets=3, seed=sum(map(ord, family.name)))
    assert worst <= 1e-7, (analytic, ref)
