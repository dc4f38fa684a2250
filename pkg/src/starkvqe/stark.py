"""Uniform electric field along the molecular (z) axis.

Electrons couple through H_S = -F z (F = field strength in atomic units,
origin at atom B). Two bookkeeping conventions are offered:

* ``"dipole"`` (default): the AO matrix of -F z is used as is, and the
  nuclei contribute +F * sum_A Z_A z_A to the constant energy. Total
  energies are then independent of the coordinate origin and H2 energies
  are even in F.
* ``"compensated"``: the diagonal element on atom A (the H 1s) is zeroed,
  as if its -F d were cancelled by the proton at A; the nuclear energy then
  carries no field term. The diagonal is zero throughout, but the shift is
  applied to a single AO, which breaks the F -> -F symmetry of H2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hermite
from .basis import ContractedOrbital, Molecule

CONVENTIONS = ("dipole", "compensated")
_SAME = 1e-12


@dataclass(frozen=True)
class FieldConfig:
    """Field strength along +z in atomic units (signed values allowed)."""

    magnitude: float = 0.0
    convention: str = "dipole"

    def __post_init__(self):
        if not math.isfinite(self.magnitude):
            raise ValueError("field magnitude must be finite")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown field convention {self.convention!r}")


def dipole_ss(a, za, b, zb) -> float:
    """<s_a| z |s_b> = K (pi/p)^{3/2} P_z."""
    p = a + b
    pz = (a * za + b * zb) / p
    return math.exp(-a * b / p * (za - zb) ** 2) * (math.pi / p) ** 1.5 * pz


def dipole_sp(a, za, b, zb) -> float:
    """<s_a| z |p_b> for s (exponent a at za) and p_z (exponent b at zb).

    Covers both the same-center case (where it reduces to
    pi^{3/2} / (2 p^{5/2})) and the two-center case.
    """
    p = a + b
    pz = (a * za + b * zb) / p
    k = math.exp(-a * b / p * (za - zb) ** 2)
    return k * (math.pi / p) ** 1.5 * (0.5 / p + pz * (pz - zb))


def dipole_pp_same_center(p: float, zc: float) -> float:
    return zc * (math.pi / p) ** 1.5 * 0.5 / p


def dipole_primitive(a, za, la, b, zb, lb) -> float:
    if la == 0 and lb == 0:
        return dipole_ss(a, za, b, zb)
    if la == 0 and lb == 1:
        return dipole_sp(a, za, b, zb)
    if la == 1 and lb == 0:
        return dipole_sp(b, zb, a, za)
    if abs(za - zb) < _SAME:
        return dipole_pp_same_center(a + b, za)
    return hermite.moment_z((a, za, la), (b, zb, lb))


def dipole(oi: ContractedOrbital, oj: ContractedOrbital) -> float:
    """<i| z |j> with the origin at atom B."""
    total = 0.0
    for ci, a, za, la in oi.axis_primitives():
        for cj, b, zb, lb in oj.axis_primitives():
            total += ci * cj * dipole_primitive(a, za, la, b, zb, lb)
    return total


def dipole_matrix(basis) -> np.ndarray:
    n = len(basis)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = dipole(basis[i], basis[j])
    return out


def field_matrix(molecule: Molecule, basis, field: FieldConfig, dipoles: np.ndarray | None = None) -> np.ndarray:
    """AO matrix of the electron-field interaction.

    Args:
        molecule: supplies atom A's position for the compensated convention.
        basis: AO basis.
        field: strength and convention.
        dipoles: optional precomputed `dipole_matrix(basis)`.
    """
    z = dipole_matrix(basis) if dipoles is None else dipoles
    out = -field.magnitude * z
    if field.convention == "compensated":
        za = molecule.atoms[0].position[2]
        for i, orb in enumerate(basis):
            if abs(orb.z - za) < _SAME and orb.angular.value == 0:
                out[i, i] = 0.0
    return out


def nuclear_energy(molecule: Molecule, field: FieldConfig | None = None) -> float:
    """Nuclear repulsion plus, in the dipole convention, the nuclei's field energy."""
    a, b = molecule.atoms
    d = math.dist(a.position, b.position)
    if d == 0:
        raise ValueError("coincident nuclei")
    energy = a.charge * b.charge / d
    if field is not None and field.convention == "dipole":
        energy += field.magnitude * sum(atom.charge * atom.position[2] for atom in molecule.atoms)
    return energy
