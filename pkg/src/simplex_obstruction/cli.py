"""Command-line front end.

    simplex-obstruction build --n 4 --out artifacts/
    simplex-obstruction solve --n 4 --field gf2
    simplex-obstruction verify-paths --faces 50 --samples 1024 --seed 0 --tol 1e-6
    simplex-obstruction counterexample --grid-depth 8

The JSON report goes to stdout, diagnostics to stderr.  Exit status: 0 when
every check passes, 1 when a mathematical check fails, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .errors import ObstructionError
from .linalg import FIELDS, check_witness, solve_system
from .obstruction import build_matrix, export_system, load_system

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class _Timer:
    def __init__(self) -> None:
        self.ms: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.ms[name] = round((time.perf_counter() - t0) * 1000.0, 3)


def _report(command: str, n: int, params: dict, results: dict, timer: _Timer) -> dict:
    return {"command": command, "n": n, "parameters": params, "results": results,
            "timings_ms": timer.ms, "version": __version__}


def _system_summary(system) -> dict:
    return {"skeleton": {"columns_C": system.shape[1], "rows_R": system.shape[0]},
            "obstruction": {"nnz": system.nnz, "D_integral": True,
                            "delta_halves": int(system.delta_num.sum())}}


def cmd_build(args) -> tuple[dict, int]:
    timer = _Timer()
    with timer.phase("build"):
        system = build_matrix(args.n)
    out = Path(args.out)
    with timer.phase("export"):
        paths = export_system(system, out)
    results = _system_summary(system)
    results["obstruction"]["files"] = sorted(p.name for p in paths.values()) + ["report.json"]
    report = _report("build", args.n, {"out": str(out)}, results, timer)
    (out / "report.json").write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    return report, EXIT_OK


def cmd_solve(args) -> tuple[dict, int]:
    timer = _Timer()
    if (args.p is not None) != (args.field == "gfp"):
        raise ObstructionError("--p is required with --field gfp and only then")
    with timer.phase("build"):
        system = load_system(args.system) if args.system else build_matrix(args.n)
    with timer.phase("solve"):
        rep = solve_system(system, args.field, args.p)
    verified = None
    if rep.witness is not None:
        with timer.phase("verify"):
            modulus = {"gf2": 2, "gfp": args.p}.get(args.field)
            verified = check_witness(system.dense(), system.D.tolist(), list(rep.witness), modulus)
    results = _system_summary(system)
    results["exact-linalg"] = {**rep.to_json(), "witness_verified": verified}
    params = {"field": args.field, "p": args.p, "system": args.system}
    code = EXIT_FAILED if verified is False else EXIT_OK
    return _report("solve", system.n, params, results, timer), code


def cmd_verify_paths(args) -> tuple[dict, int]:
    from .paths import verify_face_loops

    timer = _Timer()
    with timer.phase("build"):
        system = build_matrix(args.n)
    with timer.phase("verify"):
        res = verify_face_loops(system, faces=args.faces, samples=args.samples, seed=args.seed,
                                tol=args.tol, trials=args.trials, targets=args.targets)
    params = {"faces": args.faces, "samples": args.samples, "seed": args.seed, "tol": args.tol,
              "trials": args.trials, "targets": args.targets}
    report = _report("verify-paths", args.n, params, {"unitary-paths": res}, timer)
    return report, EXIT_OK if res["passed"] else EXIT_FAILED


def cmd_counterexample(args) -> tuple[dict, int]:
    from .counterexample import check_piecewise_equivalence

    timer = _Timer()
    with timer.phase("sweep"):
        res = check_piecewise_equivalence(args.grid_depth)
    report = _report("counterexample", 4, {"grid_depth": args.grid_depth},
                     {"counterexample": res}, timer)
    return report, EXIT_OK if res["passed"] else EXIT_FAILED


def _text(report: dict) -> str:
    lines = [f"{report['command']} (n={report['n']}, version {report['version']})"]

    def walk(prefix, obj):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, dict):
                walk(f"{prefix}{k}.", v)
            elif k == "witness":
                lines.append(f"  {prefix}{k}: [{len(v)} entries]")
            else:
                lines.append(f"  {prefix}{k}: {v}")

    walk("", report["results"])
    lines.append("  timings_ms: " + ", ".join(f"{k}={v}" for k, v in report["timings_ms"].items()))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplex-obstruction", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_n=True):
        if with_n:
            p.add_argument("--n", type=int, default=4)
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("build", help="assemble M, δ, D and write them to --out")
    common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="decide M x = D over a field or over Z")
    common(p)
    p.add_argument("--field", choices=FIELDS, default="gf2")
    p.add_argument("--p", type=int)
    p.add_argument("--system", help="load a system written by `build` instead of rebuilding")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-paths", help="compare face-loop windings with M ŵ - D")
    common(p)
    p.add_argument("--faces", type=int, default=50)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--trials", type=int, default=1, help="number of random ŵ vectors")
    p.add_argument("--targets", choices=("random", "base"), default="random")
    p.set_defaults(func=cmd_verify_paths)

    p = sub.add_parser("counterexample", help="sweep the piecewise-equivalence checks")
    common(p, with_n=False)
    p.add_argument("--grid-depth", type=int, default=4)
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except (ObstructionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        print(json.dumps(report, indent=1, sort_keys=True))
    else:
        print(_text(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
