"""Special functions and numerical quadrature used by the integral code.

The closed-form integrals need erf, the Boys function and Dawson's
function. The quadrature routines in this module are the independent
reference ("oracle") implementations the analytic formulas are tested
against, plus the 1D semi-infinite integrator that two nuclear-attraction
families need at runtime.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate, special

# Below this argument boys_f0 switches to its Maclaurin series.
BOYS_SERIES_THRESHOLD = 1e-4


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive quadrature.

    Attributes:
        relative_tolerance: target relative error.
        absolute_tolerance: target absolute error; also sets the cutoff of
            Gaussian envelopes in `integrate_semi_infinite`.
        max_subdivisions: interval subdivision limit per adaptive call.
    """

    relative_tolerance: float = 1e-10
    absolute_tolerance: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.relative_tolerance > 0 and self.absolute_tolerance > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to meet its tolerance.

    The last estimate and its error bound are kept so callers can decide
    whether the result is still usable.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class QuadratureResult(NamedTuple):
    value: float
    error: float


def erf(x: float) -> float:
    """Error function of a real argument."""
    return math.erf(x)


def boys_f0(x: float) -> float:
    """Zeroth-order Boys function F0(x) = integral_0^1 exp(-x t^2) dt.

    Uses sqrt(pi/4x) erf(sqrt(x)) away from zero and a 5-term Maclaurin
    series below `BOYS_SERIES_THRESHOLD`, where the closed form loses digits.

    Raises:
        ValueError: if x is negative.
    """
    if x < 0:
        raise ValueError(f"boys_f0 is defined for x >= 0, got {x}")
    if x < BOYS_SERIES_THRESHOLD:
        # sum_k (-x)^k / (k! (2k+1))
        return 1.0 - x / 3.0 + x**2 / 10.0 - x**3 / 42.0 + x**4 / 216.0
    sx = math.sqrt(x)
    return 0.5 * math.sqrt(math.pi) * math.erf(sx) / sx


def boys(n_max: int, x: float) -> np.ndarray:
    """Boys functions F_0(x) ... F_{n_max}(x) as an array.

    Small arguments use the convergent series for F_{n_max} followed by
    downward recursion (stable); large arguments start from the erf form of
    F_0 and recurse upward, which is stable once exp(-x) is negligible.
    """
    if x < 0:
        raise ValueError(f"Boys function needs x >= 0, got {x}")
    out = np.empty(n_max + 1)
    ex = math.exp(-x)
    if x < 30.0:
        # F_n(x) = exp(-x) sum_k (2x)^k / ((2n+1)(2n+3)...(2n+2k+1))
        term = 1.0 / (2 * n_max + 1)
        total = term
        k = 0
        while term > 1e-17 * total:
            k += 1
            term *= 2.0 * x / (2 * n_max + 2 * k + 1)
            total += term
        out[n_max] = ex * total
        for n in range(n_max, 0, -1):
            out[n - 1] = (2.0 * x * out[n] + ex) / (2 * n - 1)
    else:
        out[0] = boys_f0(x)
        for n in range(n_max):
            out[n + 1] = ((2 * n + 1) * out[n] - ex) / (2.0 * x)
    return out


def dawson(x: float) -> float:
    """Dawson's integral F_D(x) = exp(-x^2) integral_0^x exp(t^2) dt.

    Delegates to the rational approximation in scipy, which is accurate over
    the whole real line and never forms erfi(x) explicitly.
    """
    return float(special.dawsn(x))


def _checked_quad(f, a, b, spec: QuadratureSpec, points=None) -> QuadratureResult:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(
            f,
            a,
            b,
            epsabs=spec.absolute_tolerance,
            epsrel=spec.relative_tolerance,
            limit=spec.max_subdivisions,
            points=points,
        )
    return QuadratureResult(value, err)


def _tolerance(value: float, spec: QuadratureSpec) -> float:
    return max(spec.absolute_tolerance, spec.relative_tolerance * abs(value))


def integrate_semi_infinite(
    f: Callable[[float], float],
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    envelope: float | None = None,
    period: float | None = None,
    slack: float = 10.0,
) -> float:
    """Integrate f over [0, inf).

    Args:
        f: integrand.
        spec: tolerances.
        envelope: if given, f is assumed bounded by a polynomial times
            exp(-envelope * x^2). The range is then truncated where the
            envelope drops below the absolute tolerance.
        period: oscillation period of f. With an envelope, the truncated
            range is split into half-period panels so every panel holds at
            most one sign change.
        slack: the accumulated error bound may exceed the per-panel target by
            this factor before a failure is reported.

    Raises:
        QuadratureError: if the error bound exceeds the tolerance.
    """
    if envelope is None:
        value, err = _checked_quad(f, 0.0, np.inf, spec)
        if err > slack * _tolerance(value, spec):
            raise QuadratureError("semi-infinite quadrature did not converge", value, err)
        return value

    # exp(-b x^2) < atol, with headroom for polynomial prefactors
    x_max = math.sqrt((-math.log(spec.absolute_tolerance) + 10.0) / envelope)
    if period is None:
        edges = np.linspace(0.0, x_max, 9)
    else:
        n_panels = max(1, math.ceil(x_max / (0.5 * period)))
        if n_panels > 20 * spec.max_subdivisions:
            raise QuadratureError("too many oscillation panels", float("nan"), float("inf"))
        edges = np.linspace(0.0, n_panels * 0.5 * period, n_panels + 1)
    total = 0.0
    total_err = 0.0
    magnitude = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, err = _checked_quad(f, a, b, spec)
        total += value
        total_err += err
        magnitude += abs(value)
    # with cancelling panels the attainable accuracy is relative to the
    # summed panel magnitudes, not to the net result
    if total_err > slack * _tolerance(magnitude, spec) * max(1.0, len(edges) ** 0.5):
        raise QuadratureError("panelled quadrature did not converge", total, total_err)
    return total


def integrate_3d(
    f: Callable[[float, float], float],
    spec: QuadratureSpec = QuadratureSpec(relative_tolerance=1e-11, absolute_tolerance=1e-15),
    axis_points: Sequence[float] = (0.0,),
    slack: float = 100.0,
) -> QuadratureResult:
    """Integrate an axially symmetric function over all of space.

    The integrand is given in cylindrical coordinates as f(rho, z); the
    result is 2 pi * integral f(rho, z) rho drho dz. The z range is split at
    `axis_points` (nuclear positions), where Coulomb kernels are least
    smooth. In cylindrical coordinates rho/|r - C| stays bounded, so the
    nested adaptive rule handles 1/r kernels without special treatment.

    Raises:
        QuadratureError: if the accumulated error bound is too large.
    """
    pts = sorted(set(float(p) for p in axis_points))
    err_total = 0.0

    def inner(z: float) -> float:
        nonlocal err_total
        # split rho at 1 so the near-axis structure of 1/r is resolved
        a = _checked_quad(lambda rho: f(rho, z) * rho, 0.0, 1.0, spec)
        b = _checked_quad(lambda rho: f(rho, z) * rho, 1.0, np.inf, spec)
        err_total += a.error + b.error
        return a.value + b.value

    pieces = [(-np.inf, pts[0])]
    pieces += list(zip(pts[:-1], pts[1:]))
    pieces.append((pts[-1], np.inf))
    value = 0.0
    magnitude = 0.0
    outer_err = 0.0
    for a, b in pieces:
        r = _checked_quad(inner, a, b, spec)
        value += r.value
        magnitude += abs(r.value)
        outer_err += r.error
    value *= 2.0 * math.pi
    # inner errors enter the outer integral with a bounded weight; this is a
    # heuristic bound, tight enough to flag gross failures
    error = 2.0 * math.pi * outer_err + 1e-6 * err_total
    # judge against the pieces, not their sum: odd integrands cancel to zero
    if error > slack * _tolerance(2.0 * math.pi * magnitude, spec):
        raise QuadratureError("3D quadrature did not converge", value, error)
    return QuadratureResult(value, error)


# A primitive along the molecular axis: coefficient * (z - center)^power *
# exp(-exponent * |r - center|^2), with the center at (0, 0, center).
AxisPrimitive = tuple[float, float, float, int]


def _primitive_arrays(orbitals):
    """Broadcastable arrays over all primitive quadruples."""
    grids = np.meshgrid(*[np.arange(len(o)) for o in orbitals], indexing="ij")
    out = []
    for orb, idx in zip(orbitals, grids):
        arr = np.asarray(orb, dtype=float)
        out.append(tuple(arr[idx.ravel(), k] for k in range(4)))
    return out


_GH_X, _GH_W = np.polynomial.hermite.hermgauss(6)


def _pair_axis_factor(a, b, c, d, t2, za, zb, zc, zd, la, lb, lc, ld):
    """Two-electron Gaussian integral along one axis at fixed t^2.

    Evaluates the 2D integral of (z1-A)^la (z1-B)^lb (z2-C)^lc (z2-D)^ld
    exp(-a(z1-A)^2 - b(z1-B)^2 - c(z2-C)^2 - d(z2-D)^2 - t2 (z1-z2)^2)
    by diagonalizing the quadratic form and applying Gauss-Hermite nodes in
    the rotated coordinates (exact for the polynomial degrees used here).
    All arguments broadcast over primitive quadruples.
    """
    q11 = a + b + t2
    q22 = c + d + t2
    q12 = -t2
    h1 = a * za + b * zb
    h2 = c * zc + d * zd
    det = q11 * q22 - q12 * q12
    mu1 = (q22 * h1 - q12 * h2) / det
    mu2 = (q11 * h2 - q12 * h1) / det
    const = a * za**2 + b * zb**2 + c * zc**2 + d * zd**2 - (h1 * mu1 + h2 * mu2)
    # eigen-decomposition of [[q11, q12], [q12, q22]]
    tr = q11 + q22
    gap = np.sqrt((q11 - q22) ** 2 + 4 * q12**2)
    lam1 = 0.5 * (tr + gap)
    lam2 = 0.5 * (tr - gap)
    theta = 0.5 * np.arctan2(2 * q12, q11 - q22)
    cos, sin = np.cos(theta), np.sin(theta)
    # z = mu + V diag(lam^-1/2) y, V = [[cos, -sin], [sin, cos]]
    s1 = 1.0 / np.sqrt(lam1)
    s2 = 1.0 / np.sqrt(lam2)
    y1 = _GH_X[:, None, None]
    y2 = _GH_X[None, :, None]
    w = (_GH_W[:, None] * _GH_W[None, :])[:, :, None]
    z1 = mu1 + cos * s1 * y1 - sin * s2 * y2
    z2 = mu2 + sin * s1 * y1 + cos * s2 * y2
    poly = (z1 - za) ** la * (z1 - zb) ** lb * (z2 - zc) ** lc * (z2 - zd) ** ld
    return np.exp(-const) * s1 * s2 * np.sum(w * poly, axis=(0, 1))


def integrate_6d(
    orbitals: Sequence[Sequence[AxisPrimitive]],
    spec: QuadratureSpec = QuadratureSpec(relative_tolerance=1e-10, absolute_tolerance=1e-14),
) -> QuadratureResult:
    """Two-electron Coulomb integral (ij|kl) of axis-aligned Gaussians.

    Each orbital is a list of `(coefficient, exponent, center_z, power)`
    primitives. The kernel is written as
    1/r12 = 2/sqrt(pi) * integral_0^inf exp(-t^2 r12^2) dt,
    so for fixed t the 6D integral factorizes into three 2D Gaussian
    integrals, evaluated by Gauss-Hermite quadrature. The remaining t
    integral is done adaptively.
    """
    if len(orbitals) != 4:
        raise ValueError("integrate_6d needs four orbitals")
    (ca, a, za, la), (cb, b, zb, lb), (cc, c, zc, lc), (cd, d, zd, ld) = _primitive_arrays(
        orbitals
    )
    la, lb, lc, ld = (x.astype(int) for x in (la, lb, lc, ld))
    coef = ca * cb * cc * cd
    zeros = np.zeros_like(a)
    izero = np.zeros_like(la)

    def integrand(t: float) -> float:
        t2 = t * t
        fx = _pair_axis_factor(a, b, c, d, t2, zeros, zeros, zeros, zeros, izero, izero, izero, izero)
        fz = _pair_axis_factor(a, b, c, d, t2, za, zb, zc, zd, la, lb, lc, ld)
        return float(np.sum(coef * fx * fx * fz))

    # split near the scale where the t-integrand turns over
    scale = math.sqrt(float(np.min(a + b + c + d)))
    pieces = [(0.0, scale), (scale, 10 * scale), (10 * scale, np.inf)]
    value = 0.0
    error = 0.0
    for lo, hi in pieces:
        r = _checked_quad(integrand, lo, hi, spec)
        value += r.value
        error += r.error
    value *= 2.0 / math.sqrt(math.pi)
    error *= 2.0 / math.sqrt(math.pi)
    if error > 100 * _tolerance(value, spec):
        raise QuadratureError("6D quadrature did not converge", value, error)
    return QuadratureResult(value, error)


def integrate_6d_monte_carlo(
    orbitals: Sequence[Sequence[AxisPrimitive]],
    n_samples: int = 10_000_000,
    seed: int = 0,
    batch: int = 500_000,
) -> QuadratureResult:
    """Monte Carlo estimate of (ij|kl) for spot checks.

    Electron coordinates are drawn from Gaussian mixtures built from the
    primitive-pair envelopes; the importance weight is the full integrand
    over the sampling density. Returns the mean and its standard error.
    """
    rng = np.random.default_rng(seed)

    def mixture(orb_i, orb_j):
        comps = []
        for ci, ai, zi, li in orb_i:
            for cj, aj, zj, lj in orb_j:
                p = ai + aj
                pz = (ai * zi + aj * zj) / p
                weight = abs(ci * cj) * math.exp(-ai * aj / p * (zi - zj) ** 2) * (math.pi / p) ** 1.5
                comps.append((weight, p, pz))
        w = np.array([c[0] for c in comps])
        return w / w.sum(), np.array([c[1] for c in comps]), np.array([c[2] for c in comps])

    def orbital_value(orb, pts):
        val = np.zeros(len(pts))
        for c, a, zc, l in orb:
            dz = pts[:, 2] - zc
            r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2 + dz**2
            val += c * dz**l * np.exp(-a * r2)
        return val

    def density(mix, pts):
        w, p, pz = mix
        r2 = pts[:, 0, None] ** 2 + pts[:, 1, None] ** 2 + (pts[:, 2, None] - pz) ** 2
        return np.sum(w * (p / math.pi) ** 1.5 * np.exp(-p * r2), axis=1)

    def draw(mix, n):
        w, p, pz = mix
        k = rng.choice(len(w), size=n, p=w)
        pts = rng.standard_normal((n, 3)) / np.sqrt(2 * p[k])[:, None]
        pts[:, 2] += pz[k]
        return pts

    mix1 = mixture(orbitals[0], orbitals[1])
    mix2 = mixture(orbitals[2], orbitals[3])
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        n = min(batch, n_samples - done)
        r1 = draw(mix1, n)
        r2 = draw(mix2, n)
        r12 = np.linalg.norm(r1 - r2, axis=1)
        num = orbital_value(orbitals[0], r1) * orbital_value(orbitals[1], r1)
        num *= orbital_value(orbitals[2], r2) * orbital_value(orbitals[3], r2)
        sample = num / (density(mix1, r1) * density(mix2, r2) * r12)
        total += sample.sum()
        total_sq += (sample**2).sum()
        done += n
    mean = total / n_samples
    var = total_sq / n_samples - mean**2
    return QuadratureResult(mean, math.sqrt(max(var, 0.0) / n_samples))
