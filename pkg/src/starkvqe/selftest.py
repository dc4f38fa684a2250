"""Quick oracle checks run by `starkvqe selftest`.

Each check compares a production code path with an independent reference
(quadrature, the McMurchie-Davidson engine, or a dense Fock-space matrix)
and reports the largest deviation.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np
from scipy import integrate

from . import fermiop, hermite, integrals1e, integrals2e, jw, quantum, specfun
from .basis import build_sto3g, make_molecule


def check_boys() -> tuple[bool, str]:
    worst = 0.0
    for x in (1e-6, 1e-3, 0.5, 3.0, 20.0, 50.0):
        ref = integrate.quad(lambda t: math.exp(-x * t * t), 0.0, 1.0, epsabs=0, epsrel=1e-13)[0]
        worst = max(worst, abs(specfun.boys_f0(x) - ref) / ref)
    return worst < 1e-12, f"max relative error {worst:.2e}"


def check_one_electron() -> tuple[bool, str]:
    molecule = make_molecule("LiH", 3.0)
    h1s, _, _, li2p = build_sto3g(molecule)
    d = molecule.bond_length
    pairs = {
        "overlap": (integrals1e.overlap(h1s, li2p), lambda r, z: h1s.value(r, z) * li2p.value(r, z)),
        "attraction(Li)": (
            integrals1e.nuclear_attraction(h1s, li2p, (0.0, 0.0, 0.0)),
            lambda r, z: h1s.value(r, z) * li2p.value(r, z) / math.hypot(r, z),
        ),
    }
    worst = 0.0
    for analytic, integrand in pairs.values():
        ref = specfun.integrate_3d(integrand, axis_points=(0.0, d)).value
        worst = max(worst, abs(analytic - ref) / max(abs(ref), 1e-9))
    return worst < 1e-7, f"max relative error {worst:.2e} vs 3D quadrature"


def check_two_electron() -> tuple[bool, str]:
    basis = build_sto3g(make_molecule("LiH", 3.0))
    tensor = integrals2e.build_eri_tensor(basis)
    prims = [[(c, (a, z, l)) for c, a, z, l in orb.axis_primitives()] for orb in basis]
    worst = 0.0
    for i, j, k, l in ((0, 0, 0, 0), (0, 3, 1, 2), (3, 3, 0, 0), (0, 3, 0, 3), (2, 3, 3, 2)):
        ref = sum(
            ca * cb * cc * cd * hermite.eri(pa, pb, pc, pd)
            for (ca, pa), (cb, pb), (cc, pc), (cd, pd) in product(prims[i], prims[j], prims[k], prims[l])
        )
        worst = max(worst, abs(tensor[i, j, k, l] - ref) / max(abs(ref), 1e-12))
    return worst < 1e-10, f"max relative error {worst:.2e} vs McMurchie-Davidson"


def check_jordan_wigner() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    k = 2
    h = rng.normal(size=(k, k))
    h = h + h.T
    g = rng.normal(size=(k, k, k, k))
    g = g + g.transpose(1, 0, 2, 3)
    g = g + g.transpose(0, 1, 3, 2)
    g = g + g.transpose(2, 3, 0, 1)
    tensors = fermiop.build_spin_orbital_tensors(h, g)
    diff = np.abs(jw.map_hamiltonian(tensors).to_matrix() - fermiop.dense_fock_matrix(tensors)).max()
    return diff < 1e-10, f"max entry difference {diff:.2e} vs dense Fock matrix"


def check_anticommutation() -> tuple[bool, str]:
    n = 4
    bad = 0
    for a, b in product(range(n), repeat=2):
        lo, hi = jw.jw_lowering(a, n), jw.jw_raising(b, n)
        anti = (lo * hi + hi * lo).simplify()
        expected = jw.PauliSum.identity(n) if a == b else jw.PauliSum(n)
        bad += not anti.equals(expected)
    return bad == 0, f"{bad} failing (alpha, beta) pairs of {n * n}"


def check_ansatz_paths() -> tuple[bool, str]:
    ansatz = quantum.build_uccsd(4, 8)
    theta = np.random.default_rng(3).normal(scale=0.2, size=ansatz.parameter_count)
    ref = quantum.hf_reference(4, 8)
    slow = quantum.apply_ansatz(ansatz, theta, ref).amplitudes
    fast = quantum.apply_ansatz_fast(ansatz, theta, ref.amplitudes.real)
    diff = np.abs(slow - fast).max()
    return diff < 1e-12, f"max amplitude difference {diff:.2e} (Pauli rotations vs plane rotations)"


CHECKS = {
    "boys_f0 vs definition integral": check_boys,
    "one-electron integrals vs 3D quadrature": check_one_electron,
    "ERI tensor vs McMurchie-Davidson": check_two_electron,
    "JW Hamiltonian vs dense Fock matrix": check_jordan_wigner,
    "JW anticommutation": check_anticommutation,
    "UCCSD compiled vs Pauli path": check_ansatz_paths,
}


def run_all() -> list[tuple[str, bool, str]]:
    out = []
    for name, check in CHECKS.items():
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
