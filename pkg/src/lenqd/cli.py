"""Command-line entry point: ``lenqd <subcommand> [flags]``.

Exit status is 0 on success, 1 on a numerical or domain error and 2 on a
usage error. Every random quantity derives from ``--seed``.
"""
import argparse
import json
import sys

from . import blocks, dependence, inequalities, montecarlo, wavelet
from ._io import fmt, write_csv
from .exceptions import LenqdError

F_CHOICES = ("linear", "sine", "exp")


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _add_error_flags(parser):
    parser.add_argument("--b", type=float, default=0.9, help="MA(1) coefficient (default 0.9)")
    parser.add_argument("--sigma-w", type=float, default=0.7, help="innovation sd (default 0.7)")
    parser.add_argument("--mu-w", type=float, default=0.0, help="innovation mean (default 0)")
    parser.add_argument("--innovations", choices=("gaussian", "uniform"), default="gaussian",
                        help="innovation law (default gaussian)")


def _add_run_flags(parser, n_default="100,300,500", single_n=False):
    if single_n:
        parser.add_argument("--n", type=int, default=int(n_default),
                            help=f"sample size (default {n_default})")
    else:
        parser.add_argument("--n", type=_int_list, default=_int_list(n_default),
                            help=f"comma-separated sample sizes (default {n_default})")
    parser.add_argument("--reps", type=int, default=1000, help="replicates M (default 1000)")
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--parallel", type=int, default=1, help="worker threads (default 1)")
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    _add_error_flags(parser)


def _params(args):
    return dependence.MA1Params(b=args.b, sigma_w=args.sigma_w, mu_w=args.mu_w)


def _emit_json(payload, dest):
    text = json.dumps(payload, indent=2, default=float)
    if dest is None or dest == "-":
        print(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text + "\n")


def _config_kwargs(args):
    return dict(
        reps=args.reps,
        error=_params(args),
        master_seed=args.seed,
        innovations=args.innovations,
        parallel=args.parallel,
    )


def cmd_table1(args):
    f_ids = F_CHOICES if args.f == "all" else (args.f,)
    reports = montecarlo.run_table1(
        ns=args.n, f_ids=f_ids, x_eval=args.x, x_mode=args.x_mode,
        seed=args.seed, reps=args.reps, error=_params(args),
        innovations=args.innovations, parallel=args.parallel,
    )
    if args.json:
        _emit_json([r.to_dict() for r in reports], args.out)
    else:
        montecarlo.reports_to_csv(reports, args.out)


def cmd_clt(args):
    reports = [montecarlo.run_clt_experiment(montecarlo.SimulationConfig(n=n, **_config_kwargs(args)))
               for n in args.n]
    if args.json:
        _emit_json([r.to_dict() for r in reports], args.out)
    else:
        montecarlo.reports_to_csv(reports, args.out)
    if len(reports) >= 3:
        slope, _ = montecarlo.rate_fit((r.n, r.delta) for r in reports)
        print(f"rate_fit slope {slope:.4f}", file=sys.stderr)


def cmd_qq(args):
    cfg = montecarlo.SimulationConfig(n=args.n, f_id=args.f, x_eval=args.x, **_config_kwargs(args))
    runner = montecarlo.run_clt_experiment if args.experiment == "clt" else montecarlo.run_wavelet_experiment
    report = runner(cfg)
    if args.json:
        _emit_json(report.to_dict(), args.out)
    else:
        montecarlo.qq_to_csv(report, args.out)


def cmd_blocks(args):
    table = blocks.decay_diagnostics(_params(args), args.n, args.reps, args.seed,
                                     innovations=args.innovations, parallel=args.parallel)
    if args.json:
        _emit_json({"rows": [dict(zip(table.HEADER, row)) for row in table.rows()],
                    "slopes": table.slopes}, args.out)
    else:
        table.to_csv(args.out)
        print("slopes " + " ".join(f"{k}={fmt(v)}" for k, v in table.slopes.items()), file=sys.stderr)


def cmd_lemmas(args):
    reports = inequalities.default_grid()
    inequalities.reports_to_csv(reports, args.out)
    failed = [r for r in reports if not r.holds]
    print(f"{len(reports) - len(failed)}/{len(reports)} inequalities hold", file=sys.stderr)
    return 1 if failed else 0


def cmd_bias(args):
    curve = wavelet.bias_curve(args.f, args.gamma, args.nu, args.n)
    if args.json:
        _emit_json({"rows": curve.rows(), "slope": curve.slope, "ks": curve.ks}, args.out)
    else:
        curve.to_csv(args.out)
        print(f"bias slope {curve.slope:.4f}", file=sys.stderr)


def cmd_weights(args):
    p = wavelet.build_partition(args.n)
    weights = wavelet.haar_weights(p, args.k, args.x)
    if args.out:
        weights.to_csv(args.out)
    else:
        print(",".join(fmt(float(v)) for v in weights.w))


def cmd_check_lenqd(args):
    joint = dependence.DiscreteJoint.from_csv(args.joint, normalize=args.normalize)
    if joint.dim == 2 and args.grid is None:
        result = dependence.enqd_min_constant(joint)
    else:
        result = dependence.lenqd_min_constant(joint, args.grid or 3)
    if args.json:
        _emit_json({"M": result.value, "witness": result.witness, "side": result.side,
                    "infinite": result.infinite,
                    "case": {k: list(v) if isinstance(v, tuple) else v for k, v in result.case.items()}},
                   args.out)
    else:
        write_csv(["M", "witness_1", "witness_2", "side"],
                  [(result.value, result.witness[0], result.witness[1], result.side)], args.out)


def build_parser():
    parser = argparse.ArgumentParser(prog="lenqd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("table1", help="wavelet Berry-Esseen error table")
    _add_run_flags(p)
    p.add_argument("--f", choices=F_CHOICES + ("all",), default="all", help="regression function (default all)")
    p.add_argument("--x", type=float, default=0.5, help="evaluation point (default 0.5)")
    p.add_argument("--x-mode", choices=("single", "max"), default="single",
                   help="single point or max over a 21-point grid (default single)")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("clt", help="distance of S_n/V_n to the normal law")
    _add_run_flags(p)
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("qq", help="QQ points of a simulated statistic")
    _add_run_flags(p, n_default="100", single_n=True)
    p.add_argument("--experiment", choices=("clt", "wavelet"), default="clt",
                   help="which statistic (default clt)")
    p.add_argument("--f", choices=F_CHOICES, default="sine", help="regression function (default sine)")
    p.add_argument("--x", type=float, default=0.5, help="evaluation point (default 0.5)")
    p.set_defaults(func=cmd_qq)

    p = sub.add_parser("blocks", help="Bernstein block decay diagnostics")
    _add_run_flags(p, n_default="1000,10000,100000")
    p.set_defaults(reps=500, func=cmd_blocks)

    p = sub.add_parser("lemmas", help="run the inequality grid; exit 1 if any fails")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("bias", help="sup-bias of the estimator against n")
    p.add_argument("--f", choices=F_CHOICES, default="linear", help="regression function (default linear)")
    p.add_argument("--nu", type=float, default=2.0, help="Sobolev order (default 2)")
    p.add_argument("--gamma", type=float, default=1.0, help="Lipschitz order (default 1)")
    p.add_argument("--n", type=_int_list, default=_int_list("64,128,256,512,1024,2048,4096"),
                   help="comma-separated sample sizes (default 64,...,4096)")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("weights", help="Haar kernel weights at one point")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--k", type=int, required=True, help="resolution level")
    p.add_argument("--x", type=float, required=True, help="evaluation point in [0, 1]")
    p.add_argument("--out", default=None, help="write an i,w CSV here instead of one line to stdout")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("check-lenqd", help="minimal dominating constant of a discrete joint law")
    p.add_argument("--joint", required=True, help="CSV with rows x1,...,xd,mass")
    p.add_argument("--grid", type=int, default=None,
                   help="coefficient grid size; bivariate input skips the combination search unless given")
    p.add_argument("--normalize", action="store_true", help="rescale masses to sum to one")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.set_defaults(func=cmd_check_lenqd)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args)
    except (LenqdError, ValueError, OSError) as exc:
        print(f"lenqd {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return int(status or 0)


if __name__ == "__main__":
    sys.exit(main())
