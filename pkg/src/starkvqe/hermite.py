"""McMurchie-Davidson integrals for Gaussians centred on the z axis.

A primitive is (exponent, z, power) and stands for
(z - z0)^power * exp(-exponent * |r - (0, 0, z0)|^2), unnormalized.
Because every center is on the z axis, the x and y Hermite expansions
are trivial and only the z direction carries structure.
"""

from __future__ import annotations

import math

import numpy as np

from .specfun import boys

Primitive = tuple[float, float, int]


def hermite_coefficients(i: int, j: int, a: float, b: float, za: float, zb: float) -> np.ndarray:
    """E^{ij}_t for t = 0..i+j along z (includes the exp(-mu X^2) factor)."""
    p = a + b
    pz = (a * za + b * zb) / p
    xpa, xpb = pz - za, pz - zb
    table = {(0, 0): np.array([math.exp(-a * b / p * (za - zb) ** 2)])}

    def get(ii, jj):
        if (ii, jj) in table:
            return table[(ii, jj)]
        if ii > 0:
            prev, shift = get(ii - 1, jj), xpa
        else:
            prev, shift = get(ii, jj - 1), xpb
        n = len(prev)
        out = np.zeros(n + 1)
        for t in range(n + 1):
            val = 0.0
            if t > 0:
                val += prev[t - 1] / (2 * p)
            if t < n:
                val += shift * prev[t]
            if t + 1 < n:
                val += (t + 1) * prev[t + 1]
            out[t] = val
        table[(ii, jj)] = out
        return out

    return get(i, j)


def overlap_1d(i: int, j: int, a: float, b: float, za: float, zb: float) -> float:
    return hermite_coefficients(i, j, a, b, za, zb)[0] * math.sqrt(math.pi / (a + b))


def overlap(pa: Primitive, pb: Primitive) -> float:
    (a, za, la), (b, zb, lb) = pa, pb
    p = a + b
    return (math.pi / p) * overlap_1d(la, lb, a, b, za, zb)


def kinetic(pa: Primitive, pb: Primitive) -> float:
    """<a| -1/2 nabla^2 |b> from second derivatives of the ket."""
    (a, za, la), (b, zb, lb) = pa, pb
    p = a + b
    sx = math.sqrt(math.pi / p)
    # x and y: d^2/dx^2 exp(-b x^2) = (4 b^2 x^2 - 2 b) exp(-b x^2)
    dxx = 4 * b * b * overlap_1d(0, 2, a, b, 0.0, 0.0) - 2 * b * sx
    sz = overlap_1d(la, lb, a, b, za, zb)
    dzz = 4 * b * b * overlap_1d(la, lb + 2, a, b, za, zb)
    dzz -= 2 * b * (2 * lb + 1) * sz
    if lb >= 2:
        dzz += lb * (lb - 1) * overlap_1d(la, lb - 2, a, b, za, zb)
    return -0.5 * (2 * dxx * sx * sz + sx * sx * dzz)


def moment_z(pa: Primitive, pb: Primitive, origin: float = 0.0) -> float:
    """<a| (z - origin) |b>."""
    (a, za, la), (b, zb, lb) = pa, pb
    p = a + b
    val = overlap_1d(la, lb + 1, a, b, za, zb) + (zb - origin) * overlap_1d(la, lb, a, b, za, zb)
    return (math.pi / p) * val


def hermite_coulomb(n_max: int, alpha: float, rz: float) -> np.ndarray:
    """R_{00v}(alpha, Z) for v = 0..n_max with X = Y = 0."""
    f = boys(n_max, alpha * rz * rz)
    # R^{n}_{000} = (-2 alpha)^n F_n
    aux = [[(-2 * alpha) ** n * f[n] for n in range(n_max + 1)]]
    # aux[v][n] = R^{n}_{00v}
    for v in range(n_max):
        row = []
        for n in range(n_max - v):
            val = rz * aux[v][n + 1]
            if v > 0:
                val += v * aux[v - 1][n + 1]
            row.append(val)
        aux.append(row)
    return np.array([aux[v][0] for v in range(n_max + 1)])


def nuclear(pa: Primitive, pb: Primitive, zc: float) -> float:
    """<a| 1/|r - C| |b> for a point C = (0, 0, zc)."""
    (a, za, la), (b, zb, lb) = pa, pb
    p = a + b
    pz = (a * za + b * zb) / p
    e = hermite_coefficients(la, lb, a, b, za, zb)
    r = hermite_coulomb(len(e) - 1, p, pz - zc)
    return 2 * math.pi / p * float(np.dot(e, r))


def eri(pa: Primitive, pb: Primitive, pc: Primitive, pd: Primitive) -> float:
    """(ab|cd) in chemist order."""
    (a, za, la), (b, zb, lb) = pa, pb
    (c, zc, lc), (d, zd, ld) = pc, pd
    p, q = a + b, c + d
    pz = (a * za + b * zb) / p
    qz = (c * zc + d * zd) / q
    e1 = hermite_coefficients(la, lb, a, b, za, zb)
    e2 = hermite_coefficients(lc, ld, c, d, zc, zd)
    alpha = p * q / (p + q)
    r = hermite_coulomb(len(e1) + len(e2) - 2, alpha, pz - qz)
    total = 0.0
    for t, et in enumerate(e1):
        for u, eu in enumerate(e2):
            total += et * eu * (-1) ** u * r[t + u]
    return 2 * math.pi**2.5 / (p * q * math.sqrt(p + q)) * total

