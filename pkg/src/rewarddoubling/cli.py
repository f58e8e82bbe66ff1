"""Command-line harness: ``rewarddoubling {simulate,verify,table1,lower-bound,sweep-lemmas}``.

Exit codes: 0 all assertions passed, 1 a bound was violated, 2 usage
error, 3 no lower-bound witness found.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import adversaries as adv
from . import csvio
from . import experiments as ex
from .bounds import InapplicableBound, lower_bound_value
from .core import GradientError, ShapeError
from .onedim import GridError, verify_smooth_lemmas

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NOT_FOUND = 0, 1, 2, 3
LOWER_BOUND_ALGS = ("zero", "guess", "rd1d", "smooth", "gd", "pgd", "eg", "ftrl")


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--out", default=".", help="output directory (default .)")
    p.add_argument("--tolerance", type=float, default=ex.DEFAULT_TOLERANCE,
                   help="assertion tolerance (default 1e-9)")
    p.add_argument("--dump-spec", action="store_true", help="print the resolved spec and exit")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="rewarddoubling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="run one learner on one sequence")
    s.add_argument("--alg", required=True, choices=ex.ALGORITHMS)
    s.add_argument("--seq", required=True, choices=adv.KINDS)
    s.add_argument("--T", type=int, default=None, help="horizon (ignored for --seq custom)")
    s.add_argument("--file", help="gradient file for --seq custom")
    s.add_argument("--eta1", type=float)
    s.add_argument("--hbar", type=float)
    s.add_argument("--eta", type=float)
    s.add_argument("--eps", type=float)
    s.add_argument("--radius", type=float)
    s.add_argument("--dim", type=int, help="vector dimension (scalar sequences are replicated)")
    s.add_argument("--schedule", choices=("uniform", "inverse-square"))
    s.add_argument("--convention", choices=("loss", "reward"))
    s.add_argument("--comparators", type=_floats, default=[0.0],
                   help="comma-separated comparator values, broadcast over coordinates")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=ex.SUITES)

    t = sub.add_parser("table1", parents=[common], help="regret comparison across comparator regimes")
    t.add_argument("--radius", type=float, default=1.0)
    t.add_argument("--T", type=int, default=10_000)
    t.add_argument("--n", type=int, default=1)
    t.add_argument("--eps", type=float, default=1.0)

    lb = sub.add_parser("lower-bound", parents=[common], help="randomized witness search")
    lb.add_argument("--alg", default="zero", choices=LOWER_BOUND_ALGS)
    lb.add_argument("--radius", type=float, default=1.0)
    lb.add_argument("--eps", type=float, default=0.01)
    lb.add_argument("--T", type=int, default=None, help="horizon (default: 6k consistent with k_of_T)")
    lb.add_argument("--budget", type=int, default=100_000)
    lb.add_argument("--eta", type=float)

    sw = sub.add_parser("sweep-lemmas", parents=[common], help="grid sweep of the smooth-learner lemmas")
    sw.add_argument("--tau-max", type=int, default=1000)
    sw.add_argument("--G-max", type=float, default=10.0)
    sw.add_argument("--step", type=float, default=0.01)
    return parser


def _out_dir(args) -> Path:
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _simulate_spec(args) -> tuple[ex.ExperimentSpec, list | None]:
    params = {k: getattr(args, k) for k in
              ("eta1", "hbar", "eta", "eps", "radius", "dim", "schedule", "convention")
              if getattr(args, k) is not None}
    if args.alg == "rd" and "dim" not in params:
        params["dim"] = 1
    values = None
    if args.seq == "custom":
        if not args.file:
            raise UsageError("--seq custom needs --file")
        values = csvio.read_gradients(args.file)
        T = len(values)
    else:
        if args.T is None or args.T < 0:
            raise UsageError("--T must be a nonnegative integer")
        T = args.T
    dim = params.get("dim")
    if dim is not None and dim < 1:
        raise UsageError("--dim must be positive")
    seq = adv.SequenceSpec(args.seq, T, args.seed, dim if args.seq != "custom" else None,
                           tuple(values) if values is not None else None)
    spec = ex.ExperimentSpec(args.alg, seq, params, list(args.comparators), args.tolerance,
                             args.seed, args.out)
    return spec, values


def cmd_simulate(args) -> int:
    spec, _ = _simulate_spec(args)
    if args.dump_spec:
        sys.stdout.write(spec.dump())
        return EXIT_OK
    gradients = spec.sequence.generate()
    if spec.dim and gradients.ndim == 1:
        gradients = np.repeat(gradients[:, None], spec.dim, axis=1)
    trace, reports = ex.simulate(spec, gradients)
    out = _out_dir(args)
    stem = f"{spec.alg}_{spec.sequence.kind}_T{trace.T}_seed{spec.seed}"
    csvio.write_trace(trace, out / f"trace_{stem}.csv", spec.seed)
    csvio.write_bounds(reports, out / f"bounds_{stem}.csv", spec.seed)
    failed = [r for r in reports if not r.holds(spec.tolerance)]
    print(f"reward={csvio.fmt(trace.cumulative_reward)} rounds={trace.T} "
          f"bounds={len(reports)} violated={len(failed)}")
    for r in failed:
        print(f"VIOLATION {r.name} comparator={r.comparator} measured={csvio.fmt(r.measured)} "
              f"bound={csvio.fmt(r.bound)}")
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_verify(args) -> int:
    if args.dump_spec:
        print(f"suite={args.suite}\nseed={args.seed}\ntolerance={args.tolerance!r}")
        return EXIT_OK
    checks = ex.verify(args.suite)
    text = "".join(c.line() + "\n" for c in checks)
    sys.stdout.write(text)
    (_out_dir(args) / f"verify_{args.suite}.txt").write_text(text, encoding="utf-8", newline="\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VIOLATION


def cmd_table1(args) -> int:
    if args.dump_spec:
        print(f"radius={args.radius!r}\nT={args.T}\nn={args.n}\neps={args.eps!r}\nseed={args.seed}\n"
              f"rng={adv.RNG_NAME}")
        return EXIT_OK
    if args.T < 2 or args.n < 1 or not args.radius > 0 or not args.eps > 0:
        raise UsageError("need T >= 2, n >= 1, radius > 0, eps > 0")
    rows, checks = ex.table1(args.radius, args.T, args.n, args.eps, args.seed)
    cols = ["regime", "algorithm", "sequence", "T", "comparator_norm", "measured",
            "bound_name", "bound"]
    data = [(r.regime, r.algorithm, r.sequence, r.T, r.comparator_norm, r.measured,
             r.bound_name, r.bound) for r in rows]
    csvio._write(_out_dir(args) / "table1.csv", args.seed, cols, data)
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VIOLATION


def cmd_lower_bound(args) -> int:
    if args.T is None:
        T, k = adv.witness_horizon(args.radius, args.eps)
    else:
        T = args.T
        k = adv.k_of_T(args.radius, args.eps, T)
    if args.dump_spec:
        print(f"alg={args.alg}\nR={args.radius!r}\neps={args.eps!r}\nT={T}\nk={k}\n"
              f"budget={args.budget}\nseed={args.seed}\nrng={adv.RNG_NAME}")
        return EXIT_OK
    if args.budget < 0:
        raise UsageError("--budget must be nonnegative")
    params = {"eps": args.eps} if args.alg == "guess" else {}
    if args.eta is not None:
        params["eta"] = args.eta
    result = adv.lower_bound_search(lambda: ex.build_learner(args.alg, params, T),
                                    args.radius, args.eps, T, args.budget, args.seed,
                                    count_all=False)
    print(f"T={T} k={k} sampled={result.sampled} candidates={result.candidates}")
    if not result.found:
        print("witness: NOT FOUND")
        return EXIT_NOT_FOUND
    w = result.witness
    out = _out_dir(args)
    csvio.write_witness(w, out / "witness.csv", out / "witness_summary.txt", args.seed)
    floor = lower_bound_value(args.radius, args.eps, T)
    ok = w.regret_achieved >= floor - args.tolerance
    print(f"witness: FOUND at sample {w.index}; G={csvio.fmt(w.G)} Q={csvio.fmt(w.Q)} "
          f"regret={csvio.fmt(w.regret_achieved)} lower_bound={csvio.fmt(floor)} "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_sweep_lemmas(args) -> int:
    if args.dump_spec:
        print(f"tau_max={args.tau_max}\nG_max={args.G_max!r}\nstep={args.step!r}")
        return EXIT_OK
    rep = verify_smooth_lemmas(tau_max=args.tau_max, G_max=args.G_max, step=args.step)
    out = _out_dir(args)
    csvio.write_sweep(rep.worst + rep.violations, out / "sweep_lemmas.csv")
    for lemma in ("rinv", "od"):
        bad = sum(v.lemma == lemma for v in rep.violations)
        print(f"{lemma}: {rep.points[lemma]} points, {bad} violations, "
              f"worst margin {rep.worst_margin(lemma):.6g}: {'PASS' if not bad else 'FAIL'}")
    return EXIT_OK if rep.ok else EXIT_VIOLATION


COMMANDS = {"simulate": cmd_simulate, "verify": cmd_verify, "table1": cmd_table1,
            "lower-bound": cmd_lower_bound, "sweep-lemmas": cmd_sweep_lemmas}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GradientError, ShapeError, GridError, InapplicableBound,
            adv.WitnessSearchError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
