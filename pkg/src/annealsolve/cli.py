"""Command-line front end: reproducible runs emitting CSV/JSON for plotting.

Every output starts with the resolved run configuration (comment lines in
CSV, a "config" member in JSON), so a result file always identifies the run
that produced it.  Exit codes: 0 success, 1 domain or verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .encoding import BitRange, SupportKind
from .exceptions import DegenerateProblemError, SupportTooLargeError
from .experiments import limit_check, mc_convergence
from .qubo import build_qubo, exhaustive_deviation, export_qubo
from .rate import rate_curve, rate_points_to_csv
from .sampler import PRESETS, BoltzmannModel, CorrectionModel, NormalModel, TruncNormalModel
from .solver import normalize, solve

OUTDIR_ENV = "ANNEALSOLVE_OUTDIR"

_KINDS = {
    "signed": SupportKind.SIGNED_SYMMETRIC,
    "positive": SupportKind.POSITIVE,
}


class ModelSpecError(ValueError):
    """Model mini-grammar parse failure; messages carry the byte offset."""


def parse_model_spec(spec: str) -> CorrectionModel:
    """Parse ``name[:key=value]*`` into a correction model.

    Names: ``normal``, ``a1``..``a4``, ``truncnormal`` (keys d1, d2) and
    ``boltzmann`` (kind as a bare ``signed``/``positive`` token or
    ``kind=``, plus keys r, p).
    """
    tokens = spec.split(":")
    name = tokens[0].lower()
    offsets = []
    pos = 0
    for tok in tokens:
        offsets.append(pos)
        pos += len(tok) + 1

    def fail(index: int, message: str):
        raise ModelSpecError(f"{message} at position {offsets[index]} in {spec!r}")

    allowed = {"truncnormal": {"d1", "d2"}, "boltzmann": {"kind", "r", "p"}}
    params: dict[str, str] = {}
    for i, tok in enumerate(tokens[1:], start=1):
        if "=" in tok:
            key, _, value = tok.partition("=")
            key = key.lower()
            if not key or not value:
                fail(i, f"malformed key=value token {tok!r}")
            if key not in allowed.get(name, set()):
                fail(i, f"unknown key {key!r} for model {name!r}")
            params[key] = value
        elif tok.lower() in _KINDS and name == "boltzmann":
            params["kind"] = tok.lower()
        else:
            fail(i, f"unexpected token {tok!r}")

    def take(key: str, index_hint: int = 0):
        if key not in params:
            fail(index_hint, f"model {name!r} requires {key}")
        return params.pop(key)

    try:
        if name == "normal":
            model = NormalModel()
        elif name in PRESETS:
            model = PRESETS[name]
        elif name == "truncnormal":
            model = TruncNormalModel(float(take("d1")), float(take("d2")))
        elif name == "boltzmann":
            kind = _KINDS[take("kind")]
            model = BoltzmannModel(kind, BitRange(int(take("r")), int(take("p"))))
        else:
            fail(0, f"unknown model name {name!r}")
    except ModelSpecError:
        raise
    except ValueError as exc:
        raise ModelSpecError(f"bad parameters for {name!r} in {spec!r}: {exc}") from exc
    if params:
        fail(0, f"unused keys {sorted(params)} for model {name!r}")
    return model


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def _emit(text: str, path: str | None) -> None:
    path = _resolve_out(path)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def _config(args: argparse.Namespace) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _csv_header(args: argparse.Namespace) -> str:
    return (
        f"# annealsolve {__version__}\n"
        f"# config {json.dumps(_config(args), sort_keys=True)}\n"
    )


def _json_doc(args: argparse.Namespace, payload: dict) -> str:
    doc = {"annealsolve": __version__, "config": _config(args)}
    doc.update(payload)
    return json.dumps(doc, indent=2) + "\n"


def _jsonable(value):
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    return value


def cmd_solve(args) -> int:
    model = _model_from_flags(args)
    inst = normalize(args.a, args.b)
    trace = solve(
        inst, model, beta=args.beta, seed=args.seed, max_iter=args.max_iter,
        tol=args.tol, l0_zero=args.paper_l0,
    )
    header = _csv_header(args) + (
        f"# normalized a={inst.a!r} b={inst.b!r} shift={inst.shift} "
        f"exact={int(trace.exact)}\n"
    )
    _emit(header + trace.to_csv(), args.out)
    return 0


def _model_from_flags(args) -> CorrectionModel:
    name = args.model.lower()
    if name == "normal":
        return NormalModel()
    if name in PRESETS:
        return PRESETS[name]
    if name == "boltzmann":
        if args.kind is None or args.r is None or args.p is None:
            raise ModelSpecError("--model boltzmann requires --kind, --r and --p")
        return BoltzmannModel(_KINDS[args.kind], BitRange(args.r, args.p))
    raise ModelSpecError(f"unknown model {args.model!r}")


def cmd_qubo(args) -> int:
    problem = build_qubo(args.a, args.b, BitRange(args.r, args.p))
    if args.verify:
        if problem.n_bits > 12:
            raise ModelSpecError("--verify is limited to p - r + 1 <= 12 bits")
        deviation = exhaustive_deviation(problem)
        print(f"max deviation over {2 ** problem.n_bits} assignments: {deviation:.3e}")
        if deviation > 1e-12:
            print("verification FAILED (deviation > 1e-12)", file=sys.stderr)
            return 1
    if args.format == "coo":
        _emit(_csv_header(args) + export_qubo(problem, "coo"), args.out)
    else:
        doc = json.loads(export_qubo(problem, "json"))
        _emit(_json_doc(args, doc), args.out)
    return 0


def cmd_rate_curve(args) -> int:
    specs = [tok for tok in args.models.split(",") if tok.strip()]
    if not specs:
        raise ModelSpecError("--models must name at least one model")
    models = [parse_model_spec(tok.strip()) for tok in specs]
    betas = np.linspace(args.beta_min, args.beta_max, args.beta_steps)
    points = rate_curve(
        models, betas,
        a_steps=args.a_steps, c_steps=args.c_steps, gl_nodes=args.gl_nodes,
        threads=args.threads,
    )
    if args.format == "csv":
        _emit(_csv_header(args) + rate_points_to_csv(points), args.out)
    else:
        rows = [
            {"model_id": pt.model_id, "beta": pt.beta, "a": pt.a,
             "kind": pt.kind, "value": _jsonable(pt.value), "clamped": pt.clamped}
            for pt in points
        ]
        _emit(_json_doc(args, {"points": rows}), args.out)
    return 0


def cmd_mc(args) -> int:
    model = parse_model_spec(args.model)
    summary = mc_convergence(
        model, a=args.a, b=args.b, beta=args.beta, s=args.s,
        n_traj=args.n_traj, n_iter=args.n_iter, seed=args.seed,
    )
    if args.dump_traces is not None:
        # re-run a handful of trajectories individually; stream t of the
        # ensemble and solve(stream=t) draw identical variates
        inst = normalize(args.a, args.b)
        directory = _resolve_out(args.dump_traces)
        os.makedirs(directory, exist_ok=True)
        for t in range(min(args.n_traj, args.dump_count)):
            trace = solve(
                inst, model, beta=args.beta, seed=args.seed,
                max_iter=args.n_iter, stream=t,
                l0_zero=isinstance(model, NormalModel),
            )
            with open(os.path.join(directory, f"traj{t:04d}.csv"), "w") as handle:
                handle.write(_csv_header(args) + trace.to_csv())
    if args.format == "json":
        payload = {
            "n_traj": summary.n_traj,
            "n_iter": summary.n_iter,
            "s": summary.s,
            "slope": _jsonable(summary.slope),
            "diverged_fraction": summary.diverged_fraction,
            "outcome": summary.s_scaled_outcome.value,
            "median_log_error": [_jsonable(float(v)) for v in summary.median_log_error],
        }
        _emit(_json_doc(args, payload), args.out)
    else:
        lines = [
            _csv_header(args),
            f"# slope={summary.slope!r} diverged_fraction={summary.diverged_fraction!r} "
            f"outcome={summary.s_scaled_outcome.value}\n",
            "step,median_log_error\n",
        ]
        for n, v in enumerate(summary.median_log_error):
            lines.append(f"{n},{float(v)!r}\n")
        _emit("".join(lines), args.out)
    return 0


def _parse_ranges(text: str) -> list[BitRange]:
    ranges = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        r_txt, _, p_txt = tok.partition(":")
        if not _:
            raise ModelSpecError(f"range {tok!r} must look like r:p")
        ranges.append(BitRange(int(r_txt), int(p_txt)))
    if not ranges:
        raise ModelSpecError("--ranges must name at least one r:p pair")
    return ranges


def cmd_limit_check(args) -> int:
    ranges = _parse_ranges(args.ranges)
    interval = None
    if args.mode == "interval":
        if args.d1 is None or args.d2 is None:
            raise ModelSpecError("--mode interval requires --d1 and --d2")
        interval = (args.d1, args.d2)
    rows = limit_check(args.a, args.b, args.beta, ranges, interval=interval)
    if args.format == "json":
        payload = {
            "rows": [
                {"r": row.range.r, "p": row.range.p, "n_points": row.n_points, "ks": row.ks}
                for row in rows
            ]
        }
        _emit(_json_doc(args, payload), args.out)
    else:
        lines = [_csv_header(args), "r,p,n_points,ks\n"]
        for row in rows:
            lines.append(f"{row.range.r},{row.range.p},{row.n_points},{row.ks!r}\n")
        _emit("".join(lines), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annealsolve",
        description="Simulate annealer-style iterative solvers of a*x = b "
        "and reproduce their convergence-rate analysis.",
    )
    parser.add_argument("--version", action="version", version=f"annealsolve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one refinement trajectory, emit a CSV trace")
    p_solve.add_argument("--a", type=float, required=True)
    p_solve.add_argument("--b", type=float, required=True)
    p_solve.add_argument("--beta", type=float, required=True)
    p_solve.add_argument(
        "--model", required=True,
        help="normal | a1 | a2 | a3 | a4 | boltzmann (with --kind --r --p)",
    )
    p_solve.add_argument("--kind", choices=sorted(_KINDS))
    p_solve.add_argument("--r", type=int)
    p_solve.add_argument("--p", type=int)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--max-iter", type=int, default=50)
    p_solve.add_argument("--tol", type=float, default=0.0)
    p_solve.add_argument(
        "--paper-l0", action="store_true",
        help="pin the first step's exponent to zero (normal-model threshold convention)",
    )
    p_solve.add_argument("--out")
    p_solve.set_defaults(func=cmd_solve)

    p_qubo = sub.add_parser("qubo", help="build and export the QUBO of (a*x - b)^2")
    p_qubo.add_argument("--a", type=float, required=True)
    p_qubo.add_argument("--b", type=float, required=True)
    p_qubo.add_argument("--r", type=int, required=True)
    p_qubo.add_argument("--p", type=int, required=True)
    p_qubo.add_argument("--format", choices=("coo", "json"), default="coo")
    p_qubo.add_argument("--verify", action="store_true",
                        help="exhaustively check the coefficient identity (<= 12 bits)")
    p_qubo.add_argument("--out")
    p_qubo.set_defaults(func=cmd_qubo)

    p_rate = sub.add_parser("rate-curve", help="E_max per (model, beta) as a long-format table")
    p_rate.add_argument("--models", required=True,
                        help="comma-separated specs, e.g. a1,a2,boltzmann:positive:r=0:p=1")
    p_rate.add_argument("--beta-min", type=float, required=True)
    p_rate.add_argument("--beta-max", type=float, required=True)
    p_rate.add_argument("--beta-steps", type=int, required=True)
    p_rate.add_argument("--a-steps", type=int, default=65)
    p_rate.add_argument("--c-steps", type=int, default=257)
    p_rate.add_argument("--gl-nodes", type=int, default=256)
    p_rate.add_argument("--threads", type=int, default=1)
    p_rate.add_argument("--format", choices=("csv", "json"), default="csv")
    p_rate.add_argument("--out")
    p_rate.set_defaults(func=cmd_rate_curve)

    p_mc = sub.add_parser("mc", help="Monte Carlo convergence study over seeded trajectories")
    p_mc.add_argument("--model", required=True, help="model spec, e.g. normal or a2")
    p_mc.add_argument("--a", type=float, default=0.5)
    p_mc.add_argument("--b", type=float, default=0.7)
    p_mc.add_argument("--beta", type=float, required=True)
    p_mc.add_argument("--s", type=float, default=1.0)
    p_mc.add_argument("--n-traj", type=int, default=1000)
    p_mc.add_argument("--n-iter", type=int, default=40)
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--format", choices=("csv", "json"), default="json")
    p_mc.add_argument("--dump-traces", metavar="DIR",
                      help="also write individual trajectory traces for debugging")
    p_mc.add_argument("--dump-count", type=int, default=10)
    p_mc.add_argument("--out")
    p_mc.set_defaults(func=cmd_mc)

    p_limit = sub.add_parser(
        "limit-check", help="KS distance of exact Boltzmann laws to their normal limits"
    )
    p_limit.add_argument("--a", type=float, required=True)
    p_limit.add_argument("--b", type=float, required=True)
    p_limit.add_argument("--beta", type=float, required=True)
    p_limit.add_argument("--ranges", required=True, help="comma-separated r:p pairs")
    p_limit.add_argument("--mode", choices=("full-line", "interval"), default="full-line")
    p_limit.add_argument("--d1", type=float)
    p_limit.add_argument("--d2", type=float)
    p_limit.add_argument("--format", choices=("csv", "json"), default="csv")
    p_limit.add_argument("--out")
    p_limit.set_defaults(func=cmd_limit_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelSpecError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    except (DegenerateProblemError, SupportTooLargeError, ValueError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
