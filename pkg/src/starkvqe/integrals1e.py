"""Overlap, kinetic and nuclear-attraction integrals over STO-3G orbitals.

Contracted integrals are sums over primitive pairs. Each primitive pair is
routed to a closed-form family when its (center, angular) pattern has one,
otherwise to the general McMurchie-Davidson engine in `hermite`. Two
nuclear-attraction families (s and p on different atoms, nucleus on one of
them) are evaluated as 1D semi-infinite integrals over Dawson's function.

Primitive arguments below are unnormalized; normalization and contraction
coefficients are applied when contracting.
"""

from __future__ import annotations

import math

import numpy as np

from . import hermite
from .basis import ContractedOrbital, Molecule
from .specfun import QuadratureSpec, boys, boys_f0, dawson, integrate_semi_infinite

# tighter than any comparison tolerance used on the assembled matrices
RADIAL_QUADRATURE = QuadratureSpec(relative_tolerance=1e-11, absolute_tolerance=1e-16, max_subdivisions=200)

_SAME = 1e-12


def _gauss_product(a: float, za: float, b: float, zb: float):
    p = a + b
    return p, (a * za + b * zb) / p, math.exp(-a * b / p * (za - zb) ** 2)


# ---------------------------------------------------------------- overlap


def overlap_primitive(a, za, la, b, zb, lb) -> float:
    """Gaussian-product overlap for s/p_z primitives on the z axis."""
    p, pz, k = _gauss_product(a, za, b, zb)
    base = k * (math.pi / p) ** 1.5
    # <(z - A)^la (z - B)^lb> over the product Gaussian
    if la == 0 and lb == 0:
        return base
    if la == 1 and lb == 0:
        return base * (pz - za)
    if la == 0 and lb == 1:
        return base * (pz - zb)
    return base * ((pz - za) * (pz - zb) + 0.5 / p)


# ---------------------------------------------------------------- kinetic


def kinetic_ss(a: float, b: float, r: float) -> float:
    """s-s kinetic energy for centers a distance r apart (r = 0 allowed)."""
    p = a + b
    mu = a * b / p
    return (math.pi / p) ** 1.5 * mu * (3.0 - 2.0 * mu * r * r) * math.exp(-mu * r * r)


def kinetic_sp(a: float, b: float, r: float) -> float:
    """s (exponent a) with p_z (exponent b); r = z_s - z_p, signed.

    Vanishes for r = 0 by parity.
    """
    p = a + b
    mu = a * b / p
    return (math.pi / p) ** 1.5 * a * a * b * r / p**2 * (5.0 - 2.0 * mu * r * r) * math.exp(-mu * r * r)


def kinetic_pp_same_center(a: float, b: float) -> float:
    p = a + b
    return 2.5 * math.pi**1.5 * a * b / p**3.5


def kinetic_primitive(a, za, la, b, zb, lb) -> float:
    if la == 0 and lb == 0:
        return kinetic_ss(a, b, za - zb)
    if la == 0 and lb == 1:
        return kinetic_sp(a, b, za - zb)
    if la == 1 and lb == 0:
        return kinetic_sp(b, a, zb - za)
    if abs(za - zb) < _SAME:
        return kinetic_pp_same_center(a, b)
    return hermite.kinetic((a, za, la), (b, zb, lb))


# ------------------------------------------------------ nuclear attraction


def nuclear_ss(a, za, b, zb, zc) -> float:
    """<s_a| 1/|r - C| |s_b> for arbitrary axial centers."""
    p, pz, k = _gauss_product(a, za, b, zb)
    return 2.0 * math.pi / p * k * boys_f0(p * (pz - zc) ** 2)


def nuclear_sp_same_center(p: float, r: float) -> float:
    """s and p_z on one center, nucleus at signed offset r along z.

    Equal to pi^{3/2} erf(x) / (2 p^{5/2} r^2) - pi exp(-x^2) / (p^2 r) with
    x = sqrt(p) |r|; evaluated through F1 to avoid cancellation.
    """
    return 2.0 * math.pi * r * boys(1, p * r * r)[1] / p


def nuclear_pp_same_center(p: float, r: float) -> float:
    """Two p_z on one center, nucleus at distance |r| (r = 0 allowed)."""
    t = p * r * r
    return 2.0 * math.pi / p**2 * (t + 1.0) * boys(1, t)[1]


def _dawson_over_x(x: float) -> float:
    if x < 1e-3:
        return 1.0 - 2.0 * x * x / 3.0 + 4.0 * x**4 / 15.0
    return dawson(x) / x


def _sinc_minus_cos(u: float) -> float:
    """sin(u)/u - cos(u), series near zero."""
    if u < 1e-2:
        return u * u / 3.0 - u**4 / 30.0 + u**6 / 840.0
    return math.sin(u) / u - math.cos(u)


def nuclear_sp_nucleus_at_p(a: float, b: float, r: float, spec: QuadratureSpec = RADIAL_QUADRATURE) -> float:
    """s (exponent a) at distance r from a p_z (exponent b); nucleus at the p center.

    The s Gaussian is expanded in plane waves; the angular integrals leave a
    1D k integral whose p-side factor involves Dawson's function.
    r is signed (z_s - z_p); the result is odd in r.
    """
    if r == 0.0:
        return 0.0
    d = abs(r)
    sb = 2.0 * math.sqrt(b)

    def integrand(k):
        x = k / sb
        bracket = 2.0 * x * dawson(x) + _dawson_over_x(x) - 1.0
        return bracket * _sinc_minus_cos(k * d) * math.exp(-k * k / (4.0 * a))

    val = integrate_semi_infinite(integrand, spec, envelope=1.0 / (4.0 * a), period=2.0 * math.pi / d)
    return math.copysign((math.pi / a) ** 1.5 / (math.pi * b * d) * val, r)


def nuclear_sp_nucleus_at_s(a: float, b: float, r: float, spec: QuadratureSpec = RADIAL_QUADRATURE) -> float:
    """s (exponent a) at signed offset r from a p_z (exponent b); nucleus at the s center."""
    if r == 0.0:
        return 0.0
    d = abs(r)
    scale = 1.0 / (2.0 * math.sqrt(a) * d)
    envelope = 1.0 / (4.0 * b * d * d)

    def integrand(x):
        osc = x**3 * _sinc_minus_cos(x) if x < 1e-2 else math.sin(x) - x * math.cos(x)
        return osc * math.exp(-envelope * x * x) * dawson(x * scale)

    val = integrate_semi_infinite(integrand, spec, envelope=envelope, period=2.0 * math.pi)
    return math.copysign(math.sqrt(math.pi) / (math.sqrt(a) * b**2.5 * d**3) * val, r)


def nuclear_primitive(a, za, la, b, zb, lb, zc) -> float:
    """<a| 1/|r - C| |b> for one primitive pair, dispatched by pattern."""
    if la == 0 and lb == 0:
        return nuclear_ss(a, za, b, zb, zc)
    if abs(za - zb) < _SAME:
        if la + lb == 1:
            # odd in z about the shared center
            return nuclear_sp_same_center(a + b, zc - za)
        return nuclear_pp_same_center(a + b, zc - za)
    if la + lb == 1:
        s_exp, s_z, p_exp, p_z = (a, za, b, zb) if la == 0 else (b, zb, a, za)
        if abs(zc - p_z) < _SAME:
            return nuclear_sp_nucleus_at_p(s_exp, p_exp, s_z - p_z)
        if abs(zc - s_z) < _SAME:
            return nuclear_sp_nucleus_at_s(s_exp, p_exp, s_z - p_z)
    return hermite.nuclear((a, za, la), (b, zb, lb), zc)


# ------------------------------------------------------------ contraction


def _contract(fn, orb_i: ContractedOrbital, orb_j: ContractedOrbital, *extra) -> float:
    total = 0.0
    for ci, a, za, la in orb_i.axis_primitives():
        for cj, b, zb, lb in orb_j.axis_primitives():
            total += ci * cj * fn(a, za, la, b, zb, lb, *extra)
    return total


def overlap(orb_i: ContractedOrbital, orb_j: ContractedOrbital) -> float:
    return _contract(overlap_primitive, orb_i, orb_j)


def kinetic(orb_i: ContractedOrbital, orb_j: ContractedOrbital) -> float:
    return _contract(kinetic_primitive, orb_i, orb_j)


def nuclear_attraction(orb_i: ContractedOrbital, orb_j: ContractedOrbital, nucleus_center, charge: float = 1.0) -> float:
    """charge * <i| 1/|r - C| |j>; positive (the assembler applies the sign)."""
    zc = nucleus_center[2] if np.ndim(nucleus_center) else float(nucleus_center)
    return charge * _contract(nuclear_primitive, orb_i, orb_j, zc)


def _symmetric(basis, fn) -> np.ndarray:
    n = len(basis)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = fn(basis[i], basis[j])
    return out


def overlap_matrix(basis) -> np.ndarray:
    return _symmetric(basis, overlap)


def kinetic_matrix(basis) -> np.ndarray:
    return _symmetric(basis, kinetic)


def attraction_matrix(molecule: Molecule, basis) -> np.ndarray:
    """Sum over nuclei of Z_A <i|1/r_A|j> (positive)."""
    return _symmetric(
        basis,
        lambda oi, oj: sum(nuclear_attraction(oi, oj, atom.position, atom.charge) for atom in molecule.atoms),
    )


def core_hamiltonian(molecule: Molecule, basis) -> np.ndarray:
    """T - sum_A Z_A / r_A in the AO basis."""
    return kinetic_matrix(basis) - attraction_matrix(molecule, basis)
