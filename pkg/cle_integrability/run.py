#!/usr/bin/env python3
# cle_integrability/run.py
"""
Main runner for the CLE integrability engine.

Usage:
    python -m cle_integrability eval thickness-mgf --kappa 3 --lambda 0.2
    python -m cle_integrability verify identities
    python -m cle_integrability verify levy --seed 7 --replicas 10000 --out levy.csv
    python -m cle_integrability looptree --nu 1.5 --steps 1000 --format dot
    python -m cle_integrability levy-sim --beta 1.5 --a 1 --replicas 1000
    python -m cle_integrability cr-law --kappa 6 --out cr6.csv

Exit codes: 0 ok, 1 failed checks, 2 usage error, 3 domain or numeric error.
"""

import argparse
import logging
import math
import sys
import os
import time

# Add parent directory to path so we can run from anywhere
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pandas as pd
from pydantic import ValidationError

from cle_integrability import __version__
from cle_integrability.config import (
    DEFAULT_SEED, DEFAULT_REPLICAS, LEVY_JUMP_CUTOFF, LEVY_BETAS, LEVY_REFINE_FACTOR, SUITES,
    JUMP_MOMENT_STEPS, LOG_LEVEL, LOG_FORMAT,
)
from cle_integrability.core import formulas as F
from cle_integrability.core.anchors import anchor_for
from cle_integrability.core.checks import cutoff_refinement, run_suite
from cle_integrability.core.crrenewal import build_cr_gap_law, law_to_frame
from cle_integrability.core.errors import CLEError, UsageError
from cle_integrability.core.levy import LevySimConfig, replica_streams, simulate_to_hitting
from cle_integrability.core.looptree import build_looptree, sample_excursion
from cle_integrability.core.params import (
    LQGParams, alpha_for_lambda, alpha_params, from_kappa, stable_index,
)
from cle_integrability.data.export import (
    EvalRecord, RunManifest, write_eval, write_looptree, write_rows, write_table,
)

log = logging.getLogger(__name__)


# =============================================================================
# PARAMETER RESOLUTION
# =============================================================================

PARAM_FLAGS = ["kappa", "gamma", "gamma2", "lambda", "alpha", "a", "b", "ell", "mu",
               "x", "theta", "beta", "eps", "delta"]


def _need(params, key):
    if key not in params:
        raise UsageError(f"missing parameter --{key}")
    return params[key]


def _lqg(params):
    """LQGParams from --kappa (loop parameter), --gamma, or --gamma2."""
    if "kappa" in params:
        return from_kappa(params["kappa"])
    if "gamma" in params:
        return LQGParams.from_gamma(params["gamma"])
    if "gamma2" in params:
        return LQGParams.from_gamma(math.sqrt(params["gamma2"]))
    raise UsageError("missing parameter: one of --kappa, --gamma, --gamma2")


def _insertion(params):
    p = _lqg(params)
    if "alpha" in params:
        return alpha_params(p, params["alpha"])
    if "lambda" in params:
        return alpha_for_lambda(p, params["lambda"])
    raise UsageError("missing parameter: --alpha or --lambda")


def _beta(params):
    if "beta" in params:
        return params["beta"]
    return stable_index(_lqg(params)).beta


def _tail_at(coef_exponent, x):
    coef, exponent = coef_exponent
    return coef * x ** exponent


FORMULAS = {
    "thickness-mgf": lambda q: F.thickness_mgf(_lqg(q), _need(q, "lambda")),
    "kw-mgf": lambda q: F.kw_conjectured_mgf(_lqg(q), _need(q, "lambda")),
    "loop-mass-ratio": lambda q: F.loop_mass_ratio(_insertion(q)),
    "normalized-loop-mass": lambda q: F.normalized_loop_mass_ratio(_insertion(q)),
    "reflection": lambda q: F.reflection_coefficient(_insertion(q)),
    "sphere-area-density": lambda q: F.sphere_area_density(_insertion(q), _need(q, "a")),
    "sphere-area-tail": lambda q: F.sphere_area_tail(_insertion(q)),
    "disk-length-constant": lambda q: F.disk_length_constant(_lqg(q)),
    "u-bar": lambda q: F.u_bar(_insertion(q)),
    "disk-length": lambda q: F.disk_length_magnitude(_insertion(q), _need(q, "ell")),
    "fzz-density": lambda q: F.fzz_area_density(_insertion(q), _need(q, "x")),
    "fzz-laplace": lambda q: F.fzz_laplace(_insertion(q), _need(q, "ell"), _need(q, "mu")),
    "fzz-survival": lambda q: F.fzz_area_survival(_insertion(q), _need(q, "ell")),
    "welding-mass": lambda q: F.welding_mass_integral(_insertion(q), _need(q, "eps"), _need(q, "delta")),
    "m-prime": lambda q: F.m_prime(_lqg(q), _need(q, "mu")),
    "gqd-laplace": lambda q: F.gqd_laplace(_lqg(q), _need(q, "ell"), _need(q, "mu")),
    "gqd-weighted-laplace": lambda q: F.gqd_area_weighted_laplace(_lqg(q), _need(q, "ell"), _need(q, "mu")),
    "gqd-mean-area": lambda q: F.gqd_mean_area(_lqg(q), _need(q, "ell")),
    "gqd1-laplace": lambda q: F.gqd1_laplace(_lqg(q), _need(q, "ell"), _need(q, "mu")),
    "gqd1-tail": lambda q: F.gqd1_tail_probability(_lqg(q), _need(q, "x")),
    "gqd-length-density": lambda q: F.gqd_length_density(_lqg(q), _need(q, "ell")),
    "gqd1-length-density": lambda q: F.gqd1_length_density(_lqg(q), _need(q, "ell")),
    "gqd-tail": lambda q: _tail_at(F.gqd_tail_coefficient(_lqg(q)), _need(q, "x")),
    "fd-tail": lambda q: _tail_at(F.fd_alpha_tail_coefficient(_insertion(q)), _need(q, "x")),
    "annulus-mass": lambda q: F.annulus_mass(_need(q, "a"), _need(q, "b"), _lqg(q)),
    "levy-jump-density": lambda q: F.levy_jump_density(_beta(q), _need(q, "a"), _need(q, "b")),
    "jump-second-moment": lambda q: F.jump_second_moment(_beta(q), _need(q, "a")),
    "hitting-inverse-mean": lambda q: F.hitting_inverse_mean(_beta(q)),
    "tau-ratio": lambda q: F.tau_ratio_mean(_need(q, "a"), _need(q, "b")),
    "dilation": lambda q: F.dilation_constant(_lqg(q)),
    "cr-moment": lambda q: F.ssw_cr_moment(_lqg(q), _need(q, "lambda")),
    "cr-moment-pole": lambda q: F.cr_moment_pole(_lqg(q)),
    "cr-gap-mean": lambda q: F.cr_gap_mean(_lqg(q)),
    "nu-theta": lambda q: F.nu_theta_density(_need(q, "theta"), _need(q, "x")),
    "psi-theta": lambda q: F.psi_theta(_need(q, "theta"), _need(q, "lambda")),
}


def _constant(cid):
    return lambda q: F.eval_constant(cid, _lqg(q), alpha=q.get("alpha"), mu=q.get("mu"))


for _cid in F.ConstantId:
    FORMULAS[_cid.value] = _constant(_cid)


def _parse_params(args):
    params = {}
    for key in PARAM_FLAGS:
        value = getattr(args, f"p_{key}", None)
        if value is not None:
            params[key] = value
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value (got '{item}')")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--param {key}: '{value}' is not a number") from None
    return params


def _manifest(args, params, started):
    return RunManifest(
        command_line=args.command_line,
        seed=args.seed,
        replicas=args.replicas,
        params=params,
        code_version=__version__,
        wall_time=time.perf_counter() - started,
    )


def _banner_stream(args):
    # banners never share stdout with machine output
    return sys.stdout if args.out else sys.stderr


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_eval(args):
    """Evaluate one closed-form law or named constant."""
    started = time.perf_counter()
    if args.formula not in FORMULAS:
        raise UsageError(f"unknown formula '{args.formula}' (see 'eval --list')")
    params = _parse_params(args)
    value = FORMULAS[args.formula](params)
    record = EvalRecord(
        formula=args.formula,
        params=params,
        value=value,
        anchor=anchor_for(args.formula),
        manifest=_manifest(args, params, started),
    )
    write_eval(record, args.out)
    return 0


def cmd_list(args):
    for name in sorted(FORMULAS):
        print(f"  {name:<28} {anchor_for(name)}")
    return 0


def cmd_verify(args):
    """Run a check suite and write one row per check; exit 1 if any row fails."""
    started = time.perf_counter()
    out = _banner_stream(args)
    print("=" * 60, file=out)
    print(f"VERIFY: {args.suite.upper()}", file=out)
    print("=" * 60, file=out)

    options = {"seed": args.seed, "replicas": args.replicas, "eps": args.eps}
    if args.kappa:
        options["kappas"] = args.kappa
    if args.beta:
        options["betas"] = args.beta
    if args.steps:
        options["steps"] = args.steps

    rows = run_suite(args.suite, **options)
    for row in rows:
        print(row.summary(), file=out)

    if args.refine and args.suite in ("levy", "all"):
        print("\n  Cutoff refinement (inverse mean):", file=out)
        for beta in args.beta or LEVY_BETAS:
            for r in cutoff_refinement(beta, [args.eps, args.eps / LEVY_REFINE_FACTOR], args.seed, args.replicas):
                print(f"    beta={beta:.6g}  eps={r['eps']:g}  estimate={r['estimate']:.6g}"
                      f"  ±{r['stderr']:.2g}  rel_error={r['rel_error']:.3%}", file=out)

    params = {k: v for k, v in options.items() if k not in ("seed", "replicas")}
    params["suite"] = args.suite
    write_rows(rows, _manifest(args, params, started), args.out, args.format or "csv")

    failed = [r for r in rows if not r.passed]
    print(file=out)
    if failed:
        print(f"{len(failed)} OF {len(rows)} CHECKS FAILED ✗", file=out)
        return 1
    print(f"ALL {len(rows)} CHECKS PASSED ✓", file=out)
    return 0


def cmd_looptree(args):
    """Sample one excursion and write its looptree."""
    started = time.perf_counter()
    if args.nu is None:
        raise UsageError("looptree needs --nu")
    rng = replica_streams(args.seed, 1)[0]
    tree = build_looptree(sample_excursion(args.nu, args.steps, rng))
    params = {"nu": args.nu, "steps": args.steps}
    target = write_looptree(tree, _manifest(args, params, started), args.out, args.format or "json")
    s = tree.summary()
    print(f"  {s['loops']} loops, depth {s['depth']}, total loop length {s['total_loop_length']:.6g} -> {target}",
          file=_banner_stream(args))
    return 0


def cmd_levy_sim(args):
    """First-passage paths to -a: one CSV row per replica."""
    started = time.perf_counter()
    params = _parse_params(args)
    beta = _beta(params)
    a = params.get("a", 1.0)
    cfg = LevySimConfig(beta=beta, jump_cutoff_eps=args.eps, rng_seed=args.seed)
    records = []
    for i, rng in enumerate(replica_streams(args.seed, args.replicas)):
        s = simulate_to_hitting(a, cfg, rng).summary()
        records.append({"replica": i, "tau_a": s["tau_a"], "n_jumps": s["n_jumps"],
                        "largest_jump": s["largest_jump"]})
    frame = pd.DataFrame(records, columns=["replica", "tau_a", "n_jumps", "largest_jump"])
    params.update({"beta": beta, "a": a})
    target = write_table(frame, _manifest(args, params, started), args.out, args.format or "csv")
    print(f"  {len(frame)} paths, beta={beta:.6g}, a={a:g}, median tau={frame['tau_a'].median():.6g} -> {target}",
          file=_banner_stream(args))
    return 0


def cmd_cr_law(args):
    """Tabulate the conformal-radius gap CDF for one kappa."""
    started = time.perf_counter()
    params = _parse_params(args)
    law = build_cr_gap_law(_lqg(params))
    target = write_table(law_to_frame(law), _manifest(args, params, started), args.out, args.format or "csv")
    s = law.summary()
    print(f"  kappa={s['kappa']:g}: {s['nodes']} nodes up to b={s['b_max']:.6g} (F={s['F_at_b_max']:.6f}) -> {target}",
          file=_banner_stream(args))
    return 0


# =============================================================================
# ARGUMENT PARSING
# =============================================================================

def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--replicas", type=int, default=DEFAULT_REPLICAS)
    common.add_argument("--eps", type=float, default=LEVY_JUMP_CUTOFF)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["csv", "json", "dot"], default=None)
    return common


def _param_flags(parser):
    for key in PARAM_FLAGS:
        if key == "eps":
            continue    # --eps is a common flag; pass the welding cutoff as --param eps=...
        parser.add_argument(f"--{key}", dest=f"p_{key}", type=float, default=None)
    parser.add_argument("--param", action="append", metavar="KEY=VALUE")


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="cle_integrability", description="CLE integrability engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a closed-form law")
    p.add_argument("formula", nargs="?")
    p.add_argument("--list", action="store_true", help="list formula names and anchors")
    _param_flags(p)
    p.set_defaults(func=lambda a: cmd_list(a) if a.list else cmd_eval(a))

    p = sub.add_parser("verify", parents=[common], help="run a check suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--kappa", type=float, action="append")
    p.add_argument("--beta", type=float, action="append")
    p.add_argument("--steps", type=int, default=None, help="looptree steps per excursion")
    p.add_argument("--refine", action="store_true", help="also print the eps -> eps/10 inverse-mean study")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("looptree", parents=[common], help="sample one stable looptree")
    p.add_argument("--nu", type=float)
    p.add_argument("--steps", type=int, default=JUMP_MOMENT_STEPS)
    p.set_defaults(func=cmd_looptree)

    p = sub.add_parser("levy-sim", parents=[common], help="simulate first-passage paths")
    _param_flags(p)
    p.set_defaults(func=cmd_levy_sim)

    p = sub.add_parser("cr-law", parents=[common], help="tabulate the conformal-radius gap law")
    _param_flags(p)
    p.set_defaults(func=cmd_cr_law)
    return parser


def main(argv=None):
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
    args = build_parser().parse_args(argv)
    args.command_line = " ".join(["cle_integrability"] + list(sys.argv[1:] if argv is None else argv))
    if args.command == "eval" and not args.list and not args.formula:
        print("  ERROR eval needs a formula name (or --list)", file=sys.stderr)
        return UsageError.exit_code
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"  ERROR invalid configuration: {e}", file=sys.stderr)
        return UsageError.exit_code
    except CLEError as e:
        print(f"  ERROR {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
