"""Command-line driver: sweeps, single points, Stark tables, integral dumps."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__, pipeline, solvers
from .pipeline import ConfigError

EXIT_OK, EXIT_POINT_FAILURES, EXIT_CONFIG = 0, 1, 2

# keys accepted in --config files, mapped to SweepConfig / VQEConfig fields
_SWEEP_KEYS = ("molecule", "d_min", "d_max", "d_step", "fields", "solver", "seed",
               "trotter_steps", "convention", "zeta", "workers")
_VQE_KEYS = {"optimizer": "optimizer", "shots": "shots", "max_iterations": "max_iterations",
             "energy_tolerance": "energy_tolerance"}


def _fields(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad field list {text!r}") from exc


def _optimizer(text: str) -> str:
    key = text.lower().replace("-", "_")
    return {"nm": "nelder_mead", "neldermead": "nelder_mead"}.get(key, key)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON file of settings; flags override it")
    p.add_argument("--molecule", choices=("H2", "LiH", "h2", "lih"))
    p.add_argument("--solver", choices=pipeline.SOLVERS)
    p.add_argument("--shots", type=int, help="shots per Pauli term (default: exact statevector)")
    p.add_argument("--seed", type=int)
    p.add_argument("--trotter-steps", type=int, dest="trotter_steps")
    p.add_argument("--optimizer", type=_optimizer, help="nelder_mead or spsa")
    p.add_argument("--max-iterations", type=int, dest="max_iterations")
    p.add_argument("--convention", choices=("dipole", "compensated"), help="field bookkeeping")
    p.add_argument("--out", type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starkvqe", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="dissociation curves over a distance x field grid")
    _add_common(p)
    p.add_argument("--d-min", type=float, dest="d_min", help="angstrom")
    p.add_argument("--d-max", type=float, dest="d_max", help="angstrom")
    p.add_argument("--d-step", type=float, dest="d_step", help="angstrom")
    p.add_argument("--fields", type=_fields, help="comma-separated field strengths, a.u.")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("point", help="energies at one distance and field")
    _add_common(p)
    p.add_argument("--d", type=float, required=True, help="bond length, angstrom")
    p.add_argument("--field", type=float, default=0.0, help="a.u.")

    p = sub.add_parser("stark", help="E(F) - E(0) at the reference distance")
    _add_common(p)
    p.add_argument("--sweep", type=Path, help="sweep CSV to read; computed on the fly if omitted")
    p.add_argument("--d-eq", type=float, dest="d_eq", help="angstrom (default 0.7 for H2, 1.6 for LiH)")
    p.add_argument("--fields", type=_fields)
    p.add_argument("--column", default=None, choices=("e_hf", "e_exact", "e_vqe"))

    p = sub.add_parser("integrals", help="dump AO matrices and the ERI tensor as JSON")
    p.add_argument("--molecule", choices=("H2", "LiH", "h2", "lih"), default="H2")
    p.add_argument("--d", type=float, required=True, help="bond length, angstrom")
    p.add_argument("--field", type=float, default=0.0)
    p.add_argument("--convention", choices=("dipole", "compensated"), default="dipole")
    p.add_argument("--out", type=Path)

    sub.add_parser("selftest", help="run quick oracle checks")
    return parser


def _load_settings(args) -> dict:
    settings = {}
    if getattr(args, "config", None) is not None:
        try:
            settings = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(settings, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(settings) - set(_SWEEP_KEYS) - set(_VQE_KEYS) - {"out", "d", "field", "d_eq"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command", "verbose"):
            settings[key] = value
    return settings


def _vqe_config(settings) -> solvers.VQEConfig:
    kwargs = {dst: settings[src] for src, dst in _VQE_KEYS.items() if src in settings}
    try:
        return solvers.VQEConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _sweep_config(settings) -> pipeline.SweepConfig:
    kwargs = {k: settings[k] for k in _SWEEP_KEYS if k in settings}
    if "out" in settings:
        kwargs["output_path"] = str(settings["out"])
    try:
        return pipeline.SweepConfig(vqe=_vqe_config(settings), **kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc


def cmd_sweep(args) -> int:
    settings = _load_settings(args)
    cfg = _sweep_config(settings)
    if cfg.output_path is None:
        cfg.output_path = f"sweep_{cfg.molecule}.csv"
    records = pipeline.run_sweep(cfg)
    failures = [r for r in records if r.error is not None]
    print(f"wrote {len(records)} rows to {cfg.output_path} ({len(failures)} failed)")
    return EXIT_POINT_FAILURES if failures else EXIT_OK


def cmd_point(args) -> int:
    settings = _load_settings(args)
    cfg = _sweep_config({**settings, "fields": [args.field]})
    record = pipeline.run_point(
        cfg.molecule, args.d, args.field, cfg.solver, cfg.vqe,
        trotter_steps=cfg.trotter_steps, convention=cfg.convention, zeta=cfg.zeta, base_seed=cfg.seed,
    )
    _emit(json.dumps(asdict(record), indent=2) + "\n", settings.get("out"))
    return EXIT_POINT_FAILURES if record.error else EXIT_OK


def cmd_stark(args) -> int:
    settings = _load_settings(args)
    if args.sweep is not None:
        try:
            rows = pipeline.read_sweep(args.sweep)
        except OSError as exc:
            raise ConfigError(f"cannot read sweep {args.sweep}: {exc}") from exc
        if not rows:
            raise ConfigError(f"sweep {args.sweep} is empty")
        molecule = rows[0]["molecule"]
        column = settings.get("column") or "e_exact"
    else:
        cfg = _sweep_config(settings)
        molecule = cfg.molecule
        d_eq = settings.get("d_eq", pipeline.EQUILIBRIUM_ANGSTROM[molecule])
        rows = [
            pipeline.run_point(molecule, d_eq, f, cfg.solver, cfg.vqe, trotter_steps=cfg.trotter_steps,
                               convention=cfg.convention, zeta=cfg.zeta, base_seed=cfg.seed)
            for f in (cfg.fields if 0.0 in cfg.fields else (0.0,) + cfg.fields)
        ]
        column = settings.get("column") or ("e_exact" if cfg.solver != "vqe" else "e_vqe")
    d_eq = settings.get("d_eq", pipeline.EQUILIBRIUM_ANGSTROM[molecule])
    try:
        table = pipeline.stark_table(rows, d_eq, column)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc
    _emit(pipeline.stark_table_csv(table, molecule, d_eq), settings.get("out"))
    return EXIT_OK


def cmd_integrals(args) -> int:
    from . import integrals1e, integrals2e, stark
    from .basis import ANGSTROM_TO_BOHR, build_sto3g, make_molecule

    molecule = make_molecule(args.molecule, args.d * ANGSTROM_TO_BOHR)
    basis = build_sto3g(molecule)
    field = stark.FieldConfig(args.field, args.convention)
    data = {
        "molecule": molecule.name,
        "d_bohr": molecule.bond_length,
        "field_au": args.field,
        "convention": args.convention,
        "orbitals": [orb.label for orb in basis],
        "overlap": integrals1e.overlap_matrix(basis).tolist(),
        "kinetic": integrals1e.kinetic_matrix(basis).tolist(),
        "core_hamiltonian": integrals1e.core_hamiltonian(molecule, basis).tolist(),
        "field_matrix": stark.field_matrix(molecule, basis, field).tolist(),
        "eri": integrals2e.build_eri_tensor(basis).tolist(),
        "nuclear_energy": stark.nuclear_energy(molecule, field),
    }
    _emit(json.dumps(data, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from . import selftest

    results = selftest.run_all()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_POINT_FAILURES


COMMANDS = {
    "sweep": cmd_sweep,
    "point": cmd_point,
    "stark": cmd_stark,
    "integrals": cmd_integrals,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ValueError as exc:  # ConfigError included
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
