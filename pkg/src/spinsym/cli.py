"""Command-line front end: a thin client of the solver service.

Subcommands mirror the service endpoints (count, orbits, ground, classify,
sweep).  By default the request is handled in-process by the same functions
the HTTP endpoints call; --server URL sends it to a running service instead.
Output is TSV on stdout (energies to 6 decimals, amplitudes and correlations
to 12) plus an optional JSON document via --json.

Exit codes: 0 success, 2 invalid input, 3 resource cap exceeded, 4 solver
non-convergence.

Heavy imports are deferred until after argument parsing so that --threads
(or SPINSYM_THREADS) can bound BLAS parallelism before numpy loads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_SOLVER = 4

_CONFIG_KEYS = (
    "sector_cap",
    "dense_cap",
    "degeneracy_tol",
    "s0_tol",
    "lanczos_tol",
    "lanczos_max_iter",
    "seed",
    "threads",
)
_INT_KEYS = {"sector_cap", "dense_cap", "lanczos_max_iter", "seed", "threads"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinsym",
        description="Symmetry-reduced exact diagonalization of finite Heisenberg magnets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_model: bool) -> None:
        p.add_argument("--lattice", required=True, help="chain:N, square:LxL or cube:LxLxL")
        p.add_argument("--spin", required=True, help="site spin as a fraction, e.g. 1/2 or 1")
        if with_model:
            p.add_argument("-J", type=float, required=True, dest="J",
                           help="exchange; J>0 ferromagnetic, J<0 antiferromagnetic")
        p.add_argument("--json", metavar="FILE", help="also write the full result as JSON")
        p.add_argument("--config", metavar="FILE", help="key=value defaults, overridden by flags")
        p.add_argument("--server", metavar="URL", help="send the request to a running service")
        p.add_argument("--threads", type=int, help="bound BLAS worker threads (env SPINSYM_THREADS)")
        for key in ("sector_cap", "dense_cap", "lanczos_max_iter", "seed"):
            p.add_argument(f"--{key.replace('_', '-')}", type=int, dest=key)
        for key in ("degeneracy_tol", "s0_tol", "lanczos_tol"):
            p.add_argument(f"--{key.replace('_', '-')}", type=float, dest=key)

    mz_help = "total magnetization M, e.g. 0, 1/2, -1 (write --mz=-1/2 for negative halves)"
    p_count = sub.add_parser("count", help="dimension of a magnetization sector")
    add_common(p_count, with_model=False)
    p_count.add_argument("--mz", default="0", help=mz_help)

    p_orbits = sub.add_parser("orbits", help="space-group orbits of a sector")
    add_common(p_orbits, with_model=False)
    p_orbits.add_argument("--mz", default="0", help=mz_help)

    p_ground = sub.add_parser("ground", help="ground state of the Heisenberg model")
    add_common(p_ground, with_model=True)
    p_ground.add_argument("--h", type=float, default=0.0, help="Zeeman field along z")
    p_ground.add_argument(
        "--method",
        choices=["auto", "symmetric", "raw", "raw-dense", "raw-lanczos"],
        default="auto",
    )
    p_ground.add_argument("--amplitudes", action="store_true",
                          help="also print the configuration amplitudes as TSV")

    p_classify = sub.add_parser("classify", help="full level classification of a small chain")
    add_common(p_classify, with_model=True)

    p_sweep = sub.add_parser("sweep", help="ground quantum numbers along a field grid")
    add_common(p_sweep, with_model=True)
    p_sweep.add_argument("--h", required=True, metavar="START:STOP:STEP",
                         help="field grid, e.g. 0:3:0.1")

    return parser


def _read_config_file(path: str) -> dict:
    out: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = int(value.strip()) if key in _INT_KEYS else float(value.strip())
    return out


def _resolve_options(args) -> dict:
    """Flag > config file > default (None leaves the service default)."""
    from_file = _read_config_file(args.config) if args.config else {}
    options = {}
    for key in _CONFIG_KEYS:
        if key == "threads":
            continue
        value = getattr(args, key, None)
        if value is None:
            value = from_file.get(key)
        if value is not None:
            options[key] = value
    return options


def _resolve_threads(args) -> int | None:
    if getattr(args, "threads", None) is not None:
        return args.threads
    env = os.environ.get("SPINSYM_THREADS")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"SPINSYM_THREADS must be an integer, got {env!r}") from exc
    if args.config:
        return _read_config_file(args.config).get("threads")
    return None


def _apply_threads(threads: int | None) -> None:
    # Must happen before numpy is imported anywhere in this process.
    if threads is None:
        return
    if threads < 1:
        raise ValueError("--threads must be >= 1")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(threads)


def _fmt_energy(value: float) -> str:
    rounded = round(float(value), 6)
    if rounded == 0:
        rounded = 0.0
    return f"{rounded:.6f}"


def _fmt_amplitude(value: float) -> str:
    rounded = round(float(value), 12)
    if rounded == 0:
        rounded = 0.0
    return f"{rounded:.12f}"


def _render_count(doc: dict, args) -> None:
    print(doc["dimension"])
    if doc["dimension"] == 0:
        print(
            f"warning: no states with M={doc['mz']} for {doc['lattice']} at spin {doc['spin']} "
            "(magnetization out of range or parity-infeasible)",
            file=sys.stderr,
        )


def _render_orbits(doc: dict, args) -> None:
    for row in doc["orbits"]:
        print(f"{row['representative']}\t{row['size']}")


def _render_ground(doc: dict, args) -> None:
    rows = [
        ("lattice", doc["lattice"]["spec"]),
        ("spin", doc["spin"]),
        ("J", _fmt_energy(doc["params"]["J"])),
        ("h", _fmt_energy(doc["params"]["h"])),
        ("method", doc["method"]),
        ("sector_dim", doc["dims"]["sector_dim"]),
        ("orbit_count", doc["orbit_count"]),
        ("symmetric_dim", doc["dims"]["symmetric_dim"]),
        ("s0_dim", doc["dims"]["s0_dim"]),
        ("energy_total", _fmt_energy(doc["energy"]["total"])),
        ("energy_per_spin", _fmt_energy(doc["energy"]["per_spin"])),
        ("S", doc["S"]),
        ("M", doc["M"]),
    ]
    reference = doc["energy"].get("reference_infinite_chain_per_spin")
    if reference is not None:
        rows.append(("reference_infinite_chain_per_spin", _fmt_energy(reference)))
    obs = doc["observables"]
    if obs["staggered_m_sq"] is not None:
        rows.append(("staggered_m_sq", _fmt_amplitude(obs["staggered_m_sq"])))
    rows.append(("sum_rule_residual", f"{obs['sum_rule_residual']:.3e}"))
    for r in sorted(obs["bond_correlation"], key=int):
        rows.append((f"corr[{r}]", _fmt_amplitude(obs["bond_correlation"][r])))
    for r in sorted(obs["zz_correlation"], key=int):
        rows.append((f"zz_corr[{r}]", _fmt_amplitude(obs["zz_correlation"][r])))
    for key, value in rows:
        print(f"{key}\t{'' if value is None else value}")
    for note in doc.get("warnings", []):
        print(f"warning: {note}", file=sys.stderr)
    if getattr(args, "amplitudes", False):
        print("configuration\tamplitude")
        for config, amp in doc["amplitudes"].items():
            print(f"{config}\t{_fmt_amplitude(amp)}")


def _render_classify(doc: dict, args) -> None:
    print("Theta\tGamma\tXi\tS\tM\tE\tdeg_h0\tdeg_h")
    for row in doc["rows"]:
        print(
            f"{row['theta']}\t{row['gamma']}\t{row['xi']}\t{row['S']}\t{row['M']}\t"
            f"{row['energy']}\t{row['degeneracy_h0']}\t{row['degeneracy_h']}"
        )


def _render_sweep(doc: dict, args) -> None:
    print("h\tS\tM\tenergy_per_spin\tgap_per_spin\tdegeneracy")
    for row in doc["rows"]:
        print(
            f"{_fmt_energy(row['h'])}\t{row['S']}\t{row['M']}\t"
            f"{_fmt_energy(row['energy_per_spin'])}\t{_fmt_energy(row['gap_per_spin'])}\t"
            f"{row['degeneracy']}"
        )


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"field grid must be START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"bad field grid {text!r}") from exc
    return start, stop, step


def _build_request(args) -> tuple[str, dict]:
    options = _resolve_options(args)
    if args.command == "count":
        return "/count", {"lattice": args.lattice, "spin": args.spin, "mz": args.mz}
    if args.command == "orbits":
        return "/orbits", {
            "lattice": args.lattice,
            "spin": args.spin,
            "mz": args.mz,
            "options": options,
        }
    if args.command == "ground":
        return "/ground", {
            "lattice": args.lattice,
            "spin": args.spin,
            "J": args.J,
            "h": args.h,
            "method": args.method,
            "options": options,
        }
    if args.command == "classify":
        return "/classify", {
            "lattice": args.lattice,
            "spin": args.spin,
            "J": args.J,
            "options": options,
        }
    if args.command == "sweep":
        start, stop, step = _parse_grid(args.h)
        return "/sweep", {
            "lattice": args.lattice,
            "spin": args.spin,
            "J": args.J,
            "h_start": start,
            "h_stop": stop,
            "h_step": step,
            "options": options,
        }
    raise AssertionError(f"unhandled command {args.command}")


def _dispatch_local(path: str, payload: dict) -> dict:
    from .service import app as service_app
    from .service import schemas

    handlers = {
        "/count": (schemas.CountRequest, service_app.run_count),
        "/orbits": (schemas.OrbitsRequest, service_app.run_orbits),
        "/ground": (schemas.GroundRequest, service_app.run_ground),
        "/classify": (schemas.ClassifyRequest, service_app.run_classify),
        "/sweep": (schemas.SweepRequest, service_app.run_sweep),
    }
    request_model, handler = handlers[path]
    response = handler(request_model.model_validate(payload))
    return response.model_dump(mode="json")


class RemoteError(RuntimeError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _dispatch_remote(server: str, path: str, payload: dict) -> dict:
    import httpx

    with httpx.Client(base_url=server, timeout=600.0) as client:
        response = client.post(path, json=payload)
    if response.status_code == 200:
        return response.json()
    try:
        body = response.json()
    except ValueError:
        body = {}
    error = body.get("error", {})
    code = error.get("code", "invalid" if response.status_code in (400, 422) else "internal")
    message = error.get("message") or body.get("detail") or response.text
    raise RemoteError(code, f"{message}")


_RENDERERS = {
    "/count": _render_count,
    "/orbits": _render_orbits,
    "/ground": _render_ground,
    "/classify": _render_classify,
    "/sweep": _render_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_threads(_resolve_threads(args))
        path, payload = _build_request(args)
        if args.server:
            doc = _dispatch_remote(args.server, path, payload)
        else:
            doc = _dispatch_local(path, payload)
    except RemoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return {"invalid": EXIT_INVALID, "resource": EXIT_RESOURCE, "solver": EXIT_SOLVER}.get(
            exc.code, EXIT_SOLVER
        )
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # core errors are classified below
        from .errors import ConvergenceError, ResourceCapError

        if isinstance(exc, ResourceCapError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RESOURCE
        if isinstance(exc, ConvergenceError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SOLVER
        raise

    _RENDERERS[path](doc, args)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
