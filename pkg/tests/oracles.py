"""Brute-force quadrature references for primitive integrals.

Primitives are normalized (coefficient, exponent, center_z, power) tuples.
Families enumerate every center/angular pattern that occurs for a diatomic
with atom A at z = d and atom B at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from starkvqe import integrals1e, integrals2e, stark
from starkvqe.basis import Angular, normalization_constant
from starkvqe.specfun import QuadratureSpec, integrate_3d, integrate_6d

# absolute tolerance well below the 1e-9 comparison floor; needed for
# integrals that vanish by parity, where no relative target exists
ORACLE_3D = QuadratureSpec(relative_tolerance=1e-11, absolute_tolerance=1e-12)

DISTANCES = (1.0, 2.0, 4.0)


def prim(exponent, center, power):
    angular = Angular.PZ if power else Angular.S
    return (normalization_constant(exponent, angular), exponent, center, power)


def value(p, rho, z):
    c, a, zc, l = p
    dz = z - zc
    return c * dz**l * math.exp(-a * (rho * rho + dz * dz))


def laplacian(p, rho, z):
    c, a, zc, l = p
    dz = z - zc
    r2 = rho * rho + dz * dz
    return (4.0 * a * a * r2 - (6.0 + 4.0 * l) * a) * value(p, rho, z)


def _axis(*ps, extra=()):
    return tuple(sorted({p[2] for p in ps} | set(extra)))


def overlap_oracle(p, q):
    return integrate_3d(lambda r, z: value(p, r, z) * value(q, r, z), axis_points=_axis(p, q), spec=ORACLE_3D).value


def kinetic_oracle(p, q):
    return integrate_3d(lambda r, z: -0.5 * value(p, r, z) * laplacian(q, r, z), axis_points=_axis(p, q), spec=ORACLE_3D).value


def nuclear_oracle(p, q, zc):
    return integrate_3d(
        lambda r, z: value(p, r, z) * value(q, r, z) / math.hypot(r, z - zc), axis_points=_axis(p, q, extra=(zc,)), spec=ORACLE_3D
    ).value


def dipole_oracle(p, q):
    return integrate_3d(lambda r, z: value(p, r, z) * z * value(q, r, z), axis_points=_axis(p, q), spec=ORACLE_3D).value


def eri_oracle(p, q, r, s):
    return integrate_6d([[p], [q], [r], [s]]).value


def _analytic(fn, p, q, *extra):
    return p[0] * q[0] * fn(p[1], p[2], p[3], q[1], q[2], q[3], *extra)


@dataclass(frozen=True)
class Family:
    """One closed-form family: angular powers, centers ("A" or "B") and kind."""

    name: str
    kind: str  # overlap, kinetic, nuclear, dipole, eri
    powers: tuple
    centers: str
    nucleus: str | None = None

    def primitives(self, rng, d):
        z = {"A": d, "B": 0.0}
        exps = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=len(self.powers)))
        return [prim(float(a), z[c], l) for a, c, l in zip(exps, self.centers, self.powers)]

    def evaluate(self, prims, d):
        """(analytic, oracle) pair for one parameter set."""
        z = {"A": d, "B": 0.0}
        if self.kind == "overlap":
            return _analytic(integrals1e.overlap_primitive, *prims), overlap_oracle(*prims)
        if self.kind == "kinetic":
            return _analytic(integrals1e.kinetic_primitive, *prims), kinetic_oracle(*prims)
        if self.kind == "nuclear":
            zc = z[self.nucleus]
            return _analytic(integrals1e.nuclear_primitive, *prims, zc), nuclear_oracle(*prims, zc)
        if self.kind == "dipole":
            return _analytic(stark.dipole_primitive, *prims), dipole_oracle(*prims)
        if self.kind == "eri":
            coef = math.prod(p[0] for p in prims)
            analytic = coef * integrals2e.eri_primitive(*[(p[1], p[2], p[3]) for p in prims])
            return analytic, eri_oracle(*prims)
        raise ValueError(self.kind)


ONE_ELECTRON_FAMILIES = [
    Family("overlap ss two-center", "overlap", (0, 0), "AB"),
    Family("overlap sp two-center", "overlap", (0, 1), "AB"),
    Family("overlap pp same-center", "overlap", (1, 1), "BB"),
    Family("kinetic ss same-center", "kinetic", (0, 0), "AA"),
    Family("kinetic ss two-center", "kinetic", (0, 0), "AB"),
    Family("kinetic sp same-center", "kinetic", (0, 1), "BB"),
    Family("kinetic sp two-center", "kinetic", (0, 1), "AB"),
    Family("kinetic pp same-center", "kinetic", (1, 1), "BB"),
    Family("attraction ss same-center, own nucleus", "nuclear", (0, 0), "AA", "A"),
    Family("attraction ss same-center, other nucleus", "nuclear", (0, 0), "AA", "B"),
    Family("attraction ss two-center, nucleus A", "nuclear", (0, 0), "AB", "A"),
    Family("attraction ss two-center, nucleus B", "nuclear", (0, 0), "AB", "B"),
    Family("attraction sp same-center, own nucleus", "nuclear", (0, 1), "BB", "B"),
    Family("attraction sp same-center, other nucleus", "nuclear", (0, 1), "BB", "A"),
    Family("attraction pp same-center, own nucleus", "nuclear", (1, 1), "BB", "B"),
    Family("attraction pp same-center, other nucleus", "nuclear", (1, 1), "BB", "A"),
    Family("attraction sp two-center, nucleus at p", "nuclear", (0, 1), "AB", "B"),
    Family("attraction sp two-center, nucleus at s", "nuclear", (0, 1), "AB", "A"),
    Family("dipole ss same-center", "dipole", (0, 0), "AA"),
    Family("dipole ss two-center", "dipole", (0, 0), "AB"),
    Family("dipole sp same-center", "dipole", (0, 1), "BB"),
    Family("dipole sp two-center", "dipole", (0, 1), "AB"),
    Family("dipole pp same-center", "dipole", (1, 1), "BB"),
]

TWO_ELECTRON_FAMILIES = [
    Family("eri (ss|ss) one-center", "eri", (0, 0, 0, 0), "BBBB"),
    Family("eri (sp|sp) one-center", "eri", (0, 1, 0, 1), "BBBB"),
    Family("eri (ss|pp) one-center", "eri", (0, 0, 1, 1), "BBBB"),
    Family("eri (pp|pp) one-center", "eri", (1, 1, 1, 1), "BBBB"),
    Family("eri (ss|ss) Coulomb two-center", "eri", (0, 0, 0, 0), "AABB"),
    Family("eri (ss|ss) exchange two-center", "eri", (0, 0, 0, 0), "ABAB"),
    Family("eri (ss|ss) hybrid", "eri", (0, 0, 0, 0), "ABBB"),
    Family("eri (sp|sp) exchange two-center", "eri", (0, 1, 0, 1), "ABAB"),
    Family("eri (sp|sp) hybrid", "eri", (0, 1, 0, 1), "ABBB"),
    Family("eri (ss|pp) Coulomb two-center", "eri", (0, 0, 1, 1), "AABB"),
    Family("eri (ss|pp) hybrid", "eri", (0, 0, 1, 1), "ABBB"),
    Family("eri (pp|ss) one-center p pair", "eri", (1, 1, 0, 0), "BBAB"),
    Family("eri (ss|sp) hybrid", "eri", (0, 0, 0, 1), "AABB"),
]


def family_errors(family: Family, n_sets: int, seed: int, distances=DISTANCES, floor: float = 1e-9):
    """Worst (relative error beyond the absolute floor, analytic, oracle) over the sample."""
    rng = np.random.default_rng(seed)
    worst = (0.0, None, None)
    for _ in range(n_sets):
        for d in distances:
            analytic, ref = family.evaluate(family.primitives(rng, d), d)
            excess = max(abs(analytic - ref) - floor, 0.0)
            rel = excess / abs(ref) if ref != 0 else excess
            if rel >= worst[0]:
                worst = (rel, analytic, ref)
    return worst


