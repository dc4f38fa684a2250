"""Two-electron repulsion integrals (ij|kl), chemist order.

Every primitive pair product is a Gaussian centred at P (times a polynomial
in z). The basic quantity is the Coulomb energy of two s-type charge clouds,

    (pi^3 / (p q)^{3/2}) * G(R),   G(R) = erf(sqrt(rho) R) / R,

with rho = pq/(p+q) and R = P_z - Q_z. Pairs containing p_z functions are
obtained by differentiating with respect to the cloud centers; the needed
derivatives of G are written through Boys functions, which is also what
keeps the R -> 0 limits finite. Patterns without a closed form here go to
the McMurchie-Davidson engine.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from . import hermite
from .basis import ContractedOrbital
from .specfun import boys

_SAME = 1e-12
_PI52 = math.pi**2.5


def _kernel_derivatives(p: float, q: float, r: float) -> tuple[float, float, float]:
    """G, dG/dR, d2G/dR2 for G(R) = erf(sqrt(rho) R) / R."""
    rho = p * q / (p + q)
    f = boys(2, rho * r * r)
    pref = 2.0 * math.sqrt(rho / math.pi)
    g0 = pref * f[0]
    g1 = pref * (-2.0 * rho * r * f[1])
    g2 = pref * (-2.0 * rho * f[1] + 4.0 * rho * rho * r * r * f[2])
    return g0, g1, g2


# ------------------------------------------------------------ one center


def one_center_ssss(p: float, q: float) -> float:
    return 2.0 * _PI52 / (p * q * math.sqrt(p + q))


def one_center_spsp(p: float, q: float) -> float:
    """(s p_z | s p_z) on one atom, any order within each pair."""
    return _PI52 / (3.0 * p * q * (p + q) ** 1.5)


def one_center_sspp(p: float, q: float) -> float:
    """(s s | p_z p_z) on one atom; p is the s-pair exponent sum."""
    return _PI52 / (p * q * q * math.sqrt(p + q)) * (1.0 - p / (3.0 * (p + q)))


def one_center_pppp(p: float, q: float) -> float:
    s = p + q
    return _PI52 / ((p * q) ** 2 * math.sqrt(s)) * (1.0 / 3.0 + 0.3 * p * q / s**2)


# ------------------------------------------------------------ two center


def _pair(a, za, b, zb):
    p = a + b
    return p, (a * za + b * zb) / p, math.exp(-a * b / p * (za - zb) ** 2)


def ssss(a, za, b, zb, c, zc, d, zd) -> float:
    """(s s | s s) for arbitrary centers on the axis."""
    p, pz, k1 = _pair(a, za, b, zb)
    q, qz, k2 = _pair(c, zc, d, zd)
    rho = p * q / (p + q)
    return k1 * k2 * 2.0 * _PI52 / (p * q * math.sqrt(p + q)) * boys(0, rho * (pz - qz) ** 2)[0]


def spsp(pair1, pair2) -> float:
    """(s p_z | s p_z) with one s and one p_z in each pair, any centers.

    Each pair is (s_exp, s_z, p_exp, p_z). With X_i = P_i - (p center),
    the result is M pi^3/(pq)^{3/2} times
    X1 X2 G + (X2/(2p) - X1/(2q)) G' - G''/(4pq).
    """
    a, za, b, zb = pair1
    c, zc, d, zd = pair2
    p, pz, k1 = _pair(a, za, b, zb)
    q, qz, k2 = _pair(c, zc, d, zd)
    x1, x2 = pz - zb, qz - zd
    g0, g1, g2 = _kernel_derivatives(p, q, pz - qz)
    i1 = x1 * x2 * g0
    i2 = (x2 / (2.0 * p) - x1 / (2.0 * q)) * g1
    i3 = -g2 / (4.0 * p * q)
    return k1 * k2 * math.pi**3 / (p * q) ** 1.5 * (i1 + i2 + i3)


def sspp(a, za, b, zb, c, d, zc) -> float:
    """(s s | p_z p_z) with the p pair on one center zc, s pair anywhere."""
    p, pz, k1 = _pair(a, za, b, zb)
    q = c + d
    g0, _, g2 = _kernel_derivatives(p, q, pz - zc)
    return k1 * math.pi**3 / (p * q) ** 1.5 * (g0 / (2.0 * q) + g2 / (4.0 * q * q))


def eri_primitive(pa, pb, pc, pd) -> float:
    """(ab|cd) for primitives given as (exponent, z, power)."""
    prims = (pa, pb, pc, pd)
    powers = tuple(p[2] for p in prims)
    zs = [p[1] for p in prims]
    n_p = sum(powers)
    if n_p == 0:
        return ssss(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1], pd[0], pd[1])
    if max(zs) - min(zs) < _SAME:
        if n_p % 2:
            return 0.0
        p, q = pa[0] + pb[0], pc[0] + pd[0]
        if n_p == 4:
            return one_center_pppp(p, q)
        if powers[0] + powers[1] == 1:
            return one_center_spsp(p, q)
        if powers[0] + powers[1] == 0:
            return one_center_sspp(p, q)
        return one_center_sspp(q, p)
    if n_p == 2:
        if powers[0] + powers[1] == 1:
            s1, p1 = (pa, pb) if powers[0] == 0 else (pb, pa)
            s2, p2 = (pc, pd) if powers[2] == 0 else (pd, pc)
            return spsp((s1[0], s1[1], p1[0], p1[1]), (s2[0], s2[1], p2[0], p2[1]))
        ss, pp = ((pa, pb), (pc, pd)) if powers[0] == 0 else ((pc, pd), (pa, pb))
        if abs(pp[0][1] - pp[1][1]) < _SAME:
            return sspp(ss[0][0], ss[0][1], ss[1][0], ss[1][1], pp[0][0], pp[1][0], pp[0][1])
    return hermite.eri(pa, pb, pc, pd)


def _primitives(orb: ContractedOrbital):
    return [(c, (a, z, l)) for c, a, z, l in orb.axis_primitives()]


def eri(oi: ContractedOrbital, oj: ContractedOrbital, ok: ContractedOrbital, ol: ContractedOrbital) -> float:
    """Contracted (ij|kl) summed over all primitive quadruples."""
    total = 0.0
    for (ca, pa), (cb, pb), (cc, pc), (cd, pd) in product(
        _primitives(oi), _primitives(oj), _primitives(ok), _primitives(ol)
    ):
        total += ca * cb * cc * cd * eri_primitive(pa, pb, pc, pd)
    return total


def build_eri_tensor(basis) -> np.ndarray:
    """Dense K^4 tensor filled from symmetry-unique quadruples."""
    n = len(basis)
    out = np.zeros((n, n, n, n))
    for i, j, k, l in product(range(n), repeat=4):
        ij, kl = i * n + j, k * n + l
        if j > i or l > k or kl > ij:
            continue
        val = eri(basis[i], basis[j], basis[k], basis[l])
        for a, b, c, d in (
            (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
            (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
        ):
            out[a, b, c, d] = val
    return out
