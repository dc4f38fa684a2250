"""End-to-end energy evaluation at one geometry, grid sweeps and Stark shifts."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import struct
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from . import fermiop, integrals1e, integrals2e, jw, quantum, scf, solvers, stark
from .basis import ANGSTROM_TO_BOHR, build_sto3g, make_molecule

log = logging.getLogger(__name__)

SOLVERS = ("exact", "vqe", "both")
CSV_COLUMNS = ("molecule", "d_angstrom", "field_au", "e_hf", "e_exact", "e_vqe", "vqe_iterations", "converged")
DEFAULT_FIELDS = (0.0, 1e-4, 1e-3, 1e-2, 1e-1)
EQUILIBRIUM_ANGSTROM = {"H2": 0.7, "LiH": 1.6}


class ConfigError(ValueError):
    """Invalid run configuration (CLI exit code 2)."""


@dataclass
class PointRecord:
    """Total energies (hartree) at one (d, field) point; None when not computed."""

    molecule: str
    d_angstrom: float
    field_au: float
    e_hf: float | None = None
    e_exact: float | None = None
    e_vqe: float | None = None
    vqe_iterations: int | None = None
    converged: bool = False
    wall_time: float = 0.0
    error: str | None = None

    def csv_row(self) -> list[str]:
        def num(v):
            return "" if v is None else repr(float(v))

        return [
            self.molecule,
            repr(self.d_angstrom),
            repr(self.field_au),
            num(self.e_hf),
            num(self.e_exact),
            num(self.e_vqe),
            "" if self.vqe_iterations is None else str(self.vqe_iterations),
            "true" if self.converged else "false",
        ]


@dataclass
class ElectronicProblem:
    """Everything downstream of the integrals at one geometry and field."""

    molecule: object
    scf_result: scf.SCFResult
    tensors: fermiop.SpinOrbitalTensors
    hamiltonian: jw.PauliSum
    nuclear_energy: float

    @property
    def n_qubits(self) -> int:
        return self.tensors.n_spin_orbitals


def build_problem(
    molecule_name: str,
    d_angstrom: float,
    field_au: float = 0.0,
    convention: str = "dipole",
    zeta: dict | None = None,
) -> ElectronicProblem:
    """Basis, integrals, SCF, spin-orbital tensors and the JW Hamiltonian."""
    molecule = make_molecule(molecule_name, d_angstrom * ANGSTROM_TO_BOHR, zeta)
    basis = build_sto3g(molecule)
    field_cfg = stark.FieldConfig(field_au, convention)
    s = integrals1e.overlap_matrix(basis)
    h = integrals1e.core_hamiltonian(molecule, basis) + stark.field_matrix(molecule, basis, field_cfg)
    eri = integrals2e.build_eri_tensor(basis)
    result = scf.scf_solve(h, eri, s, molecule.n_electrons)
    e_nuc = stark.nuclear_energy(molecule, field_cfg)
    result.hf_total_energy = result.hf_electronic_energy + e_nuc
    h_mo, eri_mo = scf.ao_to_mo(h, eri, result.mo_coefficients)
    tensors = fermiop.build_spin_orbital_tensors(h_mo, eri_mo)
    return ElectronicProblem(molecule, result, tensors, jw.map_hamiltonian(tensors), e_nuc)


def point_seed(base_seed: int, d_angstrom: float, field_au: float) -> int:
    """Seed derived from (base seed, distance, field) only, so order-independent."""
    field_bits = int.from_bytes(struct.pack("<d", float(field_au)), "little")
    seq = np.random.SeedSequence([int(base_seed), int(round(d_angstrom * 1e6)), field_bits])
    return int(seq.generate_state(1)[0])


def run_point(
    molecule_name: str,
    d_angstrom: float,
    field_au: float = 0.0,
    solver: str = "both",
    vqe_config: solvers.VQEConfig = solvers.VQEConfig(),
    *,
    trotter_steps: int = 1,
    convention: str = "dipole",
    zeta: dict | None = None,
    base_seed: int = 0,
) -> PointRecord:
    """Evaluate one grid point; failures are stored in the record, not raised."""
    if solver not in SOLVERS:
        raise ConfigError(f"unknown solver {solver!r}; choose from {SOLVERS}")
    record = PointRecord(molecule_name, float(d_angstrom), float(field_au))
    start = time.perf_counter()
    try:
        problem = build_problem(molecule_name, d_angstrom, field_au, convention, zeta)
        record.e_hf = problem.scf_result.hf_total_energy
        n_el = problem.molecule.n_electrons
        converged = problem.scf_result.converged
        if solver in ("exact", "both"):
            record.e_exact = solvers.exact_ground_energy(problem.hamiltonian, n_el) + problem.nuclear_energy
        if solver in ("vqe", "both"):
            ansatz = quantum.build_uccsd(n_el, problem.n_qubits, trotter_steps)
            reference = quantum.hf_reference(n_el, problem.n_qubits)
            cfg = replace(vqe_config, seed=point_seed(base_seed, d_angstrom, field_au))
            vqe = solvers.vqe_minimize(problem.hamiltonian, ansatz, reference, cfg)
            record.e_vqe = vqe.energy + problem.nuclear_energy
            record.vqe_iterations = vqe.iterations
            converged = converged and vqe.converged
        record.converged = converged
    except Exception as exc:  # per-point failure must not abort a sweep
        log.warning("point %s d=%s F=%s failed: %s", molecule_name, d_angstrom, field_au, exc)
        record.error = f"{type(exc).__name__}: {exc}"
    record.wall_time = time.perf_counter() - start
    return record


@dataclass
class SweepConfig:
    molecule: str = "H2"
    d_min: float = 0.2
    d_max: float = 4.0
    d_step: float = 0.1
    fields: tuple = DEFAULT_FIELDS
    solver: str = "both"
    vqe: solvers.VQEConfig = field(default_factory=solvers.VQEConfig)
    output_path: str | None = None
    seed: int = 0
    trotter_steps: int = 1
    convention: str = "dipole"
    zeta: dict | None = None
    workers: int = 1

    def __post_init__(self):
        if self.molecule.lower() not in ("h2", "lih"):
            raise ConfigError(f"unsupported molecule {self.molecule!r}")
        self.molecule = "H2" if self.molecule.lower() == "h2" else "LiH"
        if not self.d_min > 0:
            raise ConfigError("d_min must be positive")
        if not self.d_step > 0:
            raise ConfigError("d_step must be positive")
        if self.d_max < self.d_min:
            raise ConfigError("d_max must not be below d_min")
        self.fields = tuple(float(f) for f in self.fields)
        if not all(math.isfinite(f) for f in self.fields):
            raise ConfigError("fields must be finite")
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver!r}; choose from {SOLVERS}")
        if self.convention not in stark.CONVENTIONS:
            raise ConfigError(f"unknown field convention {self.convention!r}")
        if self.trotter_steps < 1 or self.workers < 1:
            raise ConfigError("trotter_steps and workers must be at least 1")

    def distances(self) -> list[float]:
        """Grid in angstrom, rounded so that 0.1-step values print cleanly."""
        n = int(math.floor((self.d_max - self.d_min) / self.d_step + 1e-9)) + 1
        return [round(self.d_min + i * self.d_step, 10) for i in range(n)]

    def grid(self) -> list[tuple[float, float]]:
        return [(d, f) for d in self.distances() for f in self.fields]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["fields"] = list(self.fields)
        return out


def _run_grid_point(args):
    cfg, d, f = args
    return run_point(
        cfg.molecule,
        d,
        f,
        cfg.solver,
        cfg.vqe,
        trotter_steps=cfg.trotter_steps,
        convention=cfg.convention,
        zeta=cfg.zeta,
        base_seed=cfg.seed,
    )


def run_sweep(config: SweepConfig) -> list[PointRecord]:
    """Evaluate every (d, field) point; records come back in grid order.

    With workers > 1 the points run in a process pool; results do not
    depend on scheduling because each point's seed is derived from its
    coordinates.
    """
    tasks = [(config, d, f) for d, f in config.grid()]
    if config.workers == 1:
        records = [_run_grid_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_grid_point, tasks))
    if config.output_path is not None:
        write_sweep(records, config)
    return records


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def write_sweep(records, config: SweepConfig) -> tuple[Path, Path]:
    """Write the CSV and a JSON sidecar with config, version and failures."""
    path = Path(config.output_path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(records_to_csv(records))
        meta = {
            "software": "starkvqe",
            "version": __version__,
            "seed": config.seed,
            "config": config.to_dict(),
            "rows": len(records),
            "failures": [
                {"d_angstrom": r.d_angstrom, "field_au": r.field_au, "error": r.error}
                for r in records
                if r.error is not None
            ],
        }
        side = sidecar_path(path)
        side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write sweep output to {path}: {exc}") from exc
    return path, side


def read_sweep(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def stark_table(rows, d_eq: float | None = None, column: str = "e_exact") -> list[tuple[float, float]]:
    """Energy shifts E(F) - E(0) at the reference distance.

    Args:
        rows: sweep rows as dicts (from `read_sweep`) or PointRecords.
        d_eq: reference distance in angstrom; defaults to 0.7 (H2) or 1.6 (LiH).
        column: energy column to difference.

    Returns:
        (field, delta_e) pairs in the sweep's field order.

    Raises:
        KeyError: no zero-field row, or no rows at d_eq.
    """
    rows = [asdict(r) if isinstance(r, PointRecord) else r for r in rows]
    if not rows:
        raise KeyError("empty sweep")
    if d_eq is None:
        d_eq = EQUILIBRIUM_ANGSTROM[rows[0]["molecule"]]
    at_d = [r for r in rows if abs(float(r["d_angstrom"]) - d_eq) < 1e-9]
    if not at_d:
        raise KeyError(f"sweep has no rows at d = {d_eq} angstrom")
    energies = {}
    for r in at_d:
        value = r[column]
        if value in ("", None):
            raise KeyError(f"missing {column} at d = {d_eq}, field = {r['field_au']}")
        energies[float(r["field_au"])] = float(value)
    if 0.0 not in energies:
        raise KeyError(f"sweep has no zero-field row at d = {d_eq} angstrom")
    return [(f, e - energies[0.0]) for f, e in energies.items()]


def stark_table_csv(table, molecule: str, d_eq: float) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("molecule", "d_angstrom", "field_au", "delta_e"))
    for f, de in table:
        writer.writerow((molecule, repr(d_eq), repr(f), repr(de)))
    return buf.getvalue()
