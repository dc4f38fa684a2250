"""Exact diagonalization and the VQE loop with derivative-free optimizers."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fermiop import MAX_DENSE_MODES, popcount_sector
from .jw import PauliSum
from .quantum import (
    Statevector,
    UCCAnsatz,
    apply_ansatz,
    apply_ansatz_fast,
    sampled_expectation,
)

log = logging.getLogger(__name__)

OPTIMIZERS = ("nelder_mead", "spsa")


@dataclass(frozen=True)
class VQEConfig:
    """Optimizer settings.

    Attributes:
        optimizer: "nelder_mead" or "spsa".
        max_iterations: iteration ceiling.
        energy_tolerance: stop once the objective spread (Nelder-Mead) or
            the best-value improvement over `spsa_window` iterations (SPSA)
            falls below this, in hartree.
        shots: None for exact statevector expectations, else shots per term.
        seed: RNG seed for SPSA directions and shot sampling.
        initial_step: Nelder-Mead initial simplex edge.
        restarts: extra Nelder-Mead runs from the best point, each with a
            fresh simplex, made while they still improve the energy.
    """

    optimizer: str = "nelder_mead"
    max_iterations: int = 15000
    energy_tolerance: float = 1e-8
    shots: int | None = None
    seed: int = 0
    initial_step: float = 0.05
    simplex_tolerance: float = 1e-9
    spsa_a: float = 0.2
    spsa_c: float = 0.1
    spsa_big_a: float = 100.0
    spsa_alpha: float = 0.602
    spsa_gamma: float = 0.101
    spsa_window: int = 500
    restarts: int = 1

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"unknown optimizer {self.optimizer!r}; choose from {OPTIMIZERS}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be at least 1")


@dataclass
class OptimizerResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    history: list = field(default_factory=list)


@dataclass
class VQEResult:
    """Electronic VQE energy; `energy` is the exact expectation at `parameters`."""

    energy: float
    parameters: np.ndarray
    evaluations: int
    iterations: int
    history: list
    converged: bool
    sampled_energy: float | None = None


# ------------------------------------------------------------------ exact


def sector_matrix(h: PauliSum, n_electrons: int) -> np.ndarray:
    """Dense block of h on basis states with popcount n_electrons."""
    if h.n_qubits > MAX_DENSE_MODES:
        raise ValueError(f"{h.n_qubits} qubits exceeds the dense limit of {MAX_DENSE_MODES}")
    idx = popcount_sector(h.n_qubits, n_electrons)
    return h.to_sparse()[idx][:, idx].toarray()


def exact_ground_energy(h: PauliSum, n_electrons: int | None = None) -> float:
    """Lowest eigenvalue, restricted to the N-electron sector when N is given."""
    if h.n_qubits > MAX_DENSE_MODES:
        raise ValueError(f"{h.n_qubits} qubits exceeds the dense limit of {MAX_DENSE_MODES}")
    m = h.to_matrix() if n_electrons is None else sector_matrix(h, n_electrons)
    return float(np.linalg.eigvalsh(m)[0])


# ------------------------------------------------------------ optimizers


def nelder_mead(f: Callable, x0, config: VQEConfig = VQEConfig()) -> OptimizerResult:
    """Nelder-Mead with restarts from the best point (see `_nelder_mead_run`)."""
    res = _nelder_mead_run(f, x0, config, config.max_iterations)
    for _ in range(config.restarts):
        budget = config.max_iterations - res.iterations
        if budget <= 0:
            break
        again = _nelder_mead_run(f, res.x, config, budget)
        gain = res.fun - again.fun
        res = OptimizerResult(
            again.x if gain > 0 else res.x,
            min(res.fun, again.fun),
            res.iterations + again.iterations,
            res.evaluations + again.evaluations,
            again.converged,
            res.history + [min(res.fun, v) for v in again.history],
        )
        if gain < config.energy_tolerance:
            break
    return res


def _nelder_mead_run(f: Callable, x0, config: VQEConfig, max_iterations: int) -> OptimizerResult:
    """Nelder-Mead simplex search with dimension-adapted coefficients.

    Reflection, expansion, contraction and shrink coefficients follow the
    Gao-Han scaling, which keeps the method effective for tens of
    parameters. Stops when the simplex diameter drops below
    `simplex_tolerance`, the spread of vertex values below
    `energy_tolerance`, or after `max_iterations`.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    rho, chi = 1.0, 1.0 + 2.0 / n
    psi, sigma = 0.75 - 1.0 / (2 * n), 1.0 - 1.0 / n

    simplex = np.vstack([x0] + [x0 + config.initial_step * e for e in np.eye(n)])
    values = np.array([f(v) for v in simplex])
    evaluations = n + 1
    history = []
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        history.append(float(values[0]))
        diameter = np.max(np.abs(simplex[1:] - simplex[0]))
        if diameter < config.simplex_tolerance or values[-1] - values[0] < config.energy_tolerance:
            converged = True
            break
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + rho * (centroid - worst)
        fr = f(xr)
        evaluations += 1
        if fr < values[0]:
            xe = centroid + chi * (xr - centroid)
            fe = f(xe)
            evaluations += 1
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-1]:
            xc = centroid + psi * (xr - centroid)  # outside contraction
            fc = f(xc)
            evaluations += 1
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid - psi * (centroid - worst)  # inside contraction
            fc = f(xc)
            evaluations += 1
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        simplex[1:] = simplex[0] + sigma * (simplex[1:] - simplex[0])
        values[1:] = [f(v) for v in simplex[1:]]
        evaluations += n
    best = int(np.argmin(values))
    if not history or values[best] < history[-1]:
        history.append(float(values[best]))
    return OptimizerResult(simplex[best].copy(), float(values[best]), it, evaluations, converged, history)


def spsa(f: Callable, x0, config: VQEConfig = VQEConfig(), rng: np.random.Generator | None = None) -> OptimizerResult:
    """Simultaneous-perturbation stochastic approximation.

    Gains a_k = a/(k+1+A)^alpha and c_k = c/(k+1)^gamma with Rademacher
    perturbations. Each new iterate is evaluated once more (three calls per
    iteration) and the best evaluated iterate is returned. The perturbed
    points are not candidates: they sit c_k away from the iterate, which
    would cap the attainable accuracy at the perturbation size.
    """
    rng = np.random.default_rng(config.seed) if rng is None else rng
    x = np.asarray(x0, dtype=float).copy()
    best_x, best_f = x.copy(), float(f(x))
    evaluations = 1
    history = []
    converged = False
    it = 0
    for k in range(config.max_iterations):
        it = k + 1
        ak = config.spsa_a / (k + 1 + config.spsa_big_a) ** config.spsa_alpha
        ck = config.spsa_c / (k + 1) ** config.spsa_gamma
        delta = rng.choice((-1.0, 1.0), size=x.size)
        fp, fm = float(f(x + ck * delta)), float(f(x - ck * delta))
        x = x - ak * (fp - fm) / (2.0 * ck) * delta
        fx = float(f(x))
        evaluations += 3
        if fx < best_f:
            best_x, best_f = x.copy(), fx
        history.append(best_f)
        w = config.spsa_window
        if k >= w and history[-w - 1] - best_f < config.energy_tolerance:
            converged = True
            break
    return OptimizerResult(best_x, best_f, it, evaluations, converged, history)


# ------------------------------------------------------------------- VQE


def make_objective(h: PauliSum, ansatz: UCCAnsatz, reference: Statevector, n_electrons: int):
    """Exact energy theta -> <psi(theta)|h|psi(theta)> on the N-electron block.

    Uses the compiled plane-rotation form of the ansatz, which reproduces
    `apply_ansatz` to rounding error (see tests), with the Hamiltonian
    block on the fixed-N determinants.
    """
    idx = popcount_sector(h.n_qubits, n_electrons)
    block = sector_matrix(h, n_electrons).real
    ref = reference.amplitudes
    if np.abs(ref.imag).max() > 0 or np.abs(np.delete(ref, idx)).max(initial=0.0) > 0:
        raise ValueError("reference must be a real N-electron state")
    ref = ref.real

    def energy(theta):
        psi = apply_ansatz_fast(ansatz, theta, ref)[idx]
        return float(psi @ block @ psi)

    return energy


def vqe_minimize(
    h: PauliSum,
    ansatz: UCCAnsatz,
    reference: Statevector,
    config: VQEConfig = VQEConfig(),
    n_electrons: int | None = None,
) -> VQEResult:
    """Minimize the ansatz energy from theta = 0 (the reference state).

    In shot mode the optimizer sees sampled energies; the reported `energy`
    is the exact expectation at the returned parameters and the last
    sampled value is kept in `sampled_energy`.
    """
    if h.n_qubits != ansatz.n_qubits or reference.n_qubits != h.n_qubits:
        raise ValueError("Hamiltonian, ansatz and reference disagree on the qubit count")
    n_electrons = ansatz.n_electrons if n_electrons is None else n_electrons
    exact = make_objective(h, ansatz, reference, n_electrons)
    rng = np.random.default_rng(config.seed)
    if config.shots is None:
        objective = exact
    else:

        def objective(theta):
            state = apply_ansatz(ansatz, theta, reference)
            return sampled_expectation(state, h, config.shots, rng)

    x0 = np.zeros(ansatz.parameter_count)
    if config.optimizer == "nelder_mead":
        res = nelder_mead(objective, x0, config)
    else:
        res = spsa(objective, x0, config, rng=rng)
    energy = exact(res.x)
    log.debug("VQE %s: %d evaluations, energy %.12f", config.optimizer, res.evaluations, energy)
    return VQEResult(
        energy=energy,
        parameters=res.x,
        evaluations=res.evaluations,
        iterations=res.iterations,
        history=res.history,
        converged=res.converged,
        sampled_energy=None if config.shots is None else res.fun,
    )
