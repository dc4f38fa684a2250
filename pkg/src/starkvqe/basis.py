"""STO-3G contracted Gaussian orbitals for H and Li on the molecular axis.

Geometry: Li (or the second H of H2) sits at the origin, H at (0, 0, d).
Only s and p_z functions appear, so every center lies on the z axis and
every primitive is fully described by its exponent, angular type and z.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886


class Angular(enum.Enum):
    S = 0
    PZ = 1


@dataclass(frozen=True)
class GaussianPrimitive:
    """A normalized primitive c(alpha) z^l exp(-alpha r^2) with contraction d."""

    exponent: float
    contraction: float
    angular: Angular

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError("primitive exponent must be positive")

    @property
    def norm(self) -> float:
        return normalization_constant(self.exponent, self.angular)


@dataclass(frozen=True)
class ContractedOrbital:
    primitives: tuple[GaussianPrimitive, ...]
    center: tuple[float, float, float]
    label: str
    zeta: float

    @property
    def z(self) -> float:
        return self.center[2]

    @property
    def angular(self) -> Angular:
        return self.primitives[0].angular

    def axis_primitives(self) -> list[tuple[float, float, float, int]]:
        """(coefficient, exponent, z, power) tuples with normalization folded in."""
        return [
            (p.contraction * p.norm, p.exponent, self.z, p.angular.value) for p in self.primitives
        ]

    def value(self, rho, z):
        """Orbital amplitude at cylindrical coordinates (rho, z), bohr."""
        dz = z - self.z
        r2 = rho * rho + dz * dz
        return sum(c * dz**l * np.exp(-a * r2) for c, a, _, l in self.axis_primitives())


@dataclass(frozen=True)
class Atom:
    element: str
    charge: float
    position: tuple[float, float, float]


@dataclass(frozen=True)
class Molecule:
    """Two atoms on the z axis.

    Attributes:
        name: "H2" or "LiH".
        atoms: (A, B) with A = H at (0, 0, d) and B at the origin.
        bond_length: d in bohr.
        n_electrons: total electron count.
    """

    name: str
    atoms: tuple[Atom, Atom]
    bond_length: float
    n_electrons: int
    zeta: dict = field(default_factory=dict, compare=False, hash=False)


# Tabulated STO-3G primitives: exponents (already scaled by zeta^2) and
# contraction coefficients, keyed by shell.
_STO3G_1S_D = (0.1543289673, 0.5353281423, 0.4446345422)
STO3G_TABLE = {
    "H1s": dict(
        zeta=1.24,
        exponents=(3.425250914, 0.6239137298, 0.1688554040),
        coefficients=_STO3G_1S_D,
        angular=Angular.S,
    ),
    "Li1s": dict(
        zeta=2.69,
        exponents=(16.11957475, 2.936200663, 0.7946504870),
        coefficients=_STO3G_1S_D,
        angular=Angular.S,
    ),
    "Li2s": dict(
        zeta=0.75,
        exponents=(0.6362897469, 0.1478600533, 0.04808867840),
        coefficients=(-0.09996722919, 0.3995128261, 0.7001154689),
        angular=Angular.S,
    ),
    "Li2pz": dict(
        zeta=0.75,
        exponents=(0.6362897469, 0.1478600533, 0.04808867840),
        coefficients=(0.1559162750, 0.6076837186, 0.3919573931),
        angular=Angular.PZ,
    ),
}

_SHELLS = {"H": ("H1s",), "Li": ("Li1s", "Li2s", "Li2pz")}
_CHARGES = {"H": 1.0, "Li": 3.0}


def normalization_constant(exponent: float, angular: Angular) -> float:
    """Normalization of exp(-a r^2) (s) or z exp(-a r^2) (p_z)."""
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    if angular is Angular.S:
        return (2.0 * exponent / math.pi) ** 0.75
    return (128.0 * exponent**5 / math.pi**3) ** 0.25


def make_molecule(name: str, bond_length: float, zeta: dict | None = None) -> Molecule:
    """Build H2 or LiH with bond length in bohr.

    Args:
        name: "H2" or "LiH" (case-insensitive).
        bond_length: internuclear distance in bohr, > 0.
        zeta: optional overrides of shell zeta values, e.g. {"Li2s": 0.8}.
    """
    key = name.lower()
    if bond_length <= 0:
        raise ValueError("bond length must be positive")
    a = Atom("H", 1.0, (0.0, 0.0, float(bond_length)))
    if key == "h2":
        b = Atom("H", 1.0, (0.0, 0.0, 0.0))
        return Molecule("H2", (a, b), float(bond_length), 2, dict(zeta or {}))
    if key == "lih":
        b = Atom("Li", 3.0, (0.0, 0.0, 0.0))
        return Molecule("LiH", (a, b), float(bond_length), 4, dict(zeta or {}))
    raise ValueError(f"unsupported molecule {name!r}")


def make_shell(shell: str, center, zeta: float | None = None) -> ContractedOrbital:
    """One contracted orbital; a zeta override rescales the tabulated exponents."""
    entry = STO3G_TABLE[shell]
    scale = 1.0 if zeta is None else (zeta / entry["zeta"]) ** 2
    prims = tuple(
        GaussianPrimitive(a * scale, d, entry["angular"])
        for a, d in zip(entry["exponents"], entry["coefficients"])
    )
    return ContractedOrbital(
        prims, tuple(float(c) for c in center), shell, entry["zeta"] if zeta is None else zeta
    )


def build_sto3g(molecule: Molecule) -> list[ContractedOrbital]:
    """Basis in the fixed order [H1s, Li1s, Li2s, Li2pz] or [H_a 1s, H_b 1s]."""
    basis = []
    for atom in molecule.atoms:
        if atom.element not in _SHELLS:
            raise ValueError(f"unsupported element {atom.element!r}")
        for shell in _SHELLS[atom.element]:
            basis.append(make_shell(shell, atom.position, molecule.zeta.get(shell)))
    return basis


def nuclear_charge(element: str) -> float:
    return _CHARGES[element]
