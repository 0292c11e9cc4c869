"""Command-line front end: enumerate series to b-files, analyze them to
trace CSVs, extend them with differential approximants, and run the
cross-check suite.

Every error path carries a distinct message prefix; exit code 0 means
success, 2 a usage error, 1 any runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import mpmath

from . import analysis as an
from . import approximants as ap
from . import dp
from . import io as aio
from . import sequences as sq
from . import verify as ver
from .errors import (AllFitsFailedError, CapExceededError,
                     InsufficientTermsError, RankDeficientError,
                     VanishingMultiplierError)
from .series import DEFAULT_DPS

PATTERNS = ("none", "000", "100", "110", "120")
ALGOS = ("brute", "dp", "dp-exp", "dp-poly")
MODELS = ("power", "stretched", "factorial", "factorial-egf")


def _fail(prefix, message, code=1):
    print(f"error: {prefix}: {message}", file=sys.stderr)
    return code


def cmd_enumerate(args):
    if args.pattern not in PATTERNS:
        return _fail("usage", f"pattern must be one of {PATTERNS}", 2)
    if args.algo not in ALGOS:
        return _fail("usage", f"algo must be one of {ALGOS}", 2)
    try:
        if args.pattern == "none":
            if args.algo == "brute":
                series = dp.enumerate_ascent(args.terms)  # closed recursion is exact
            elif args.algo == "dp":
                series = dp.enumerate_ascent(args.terms)
            else:
                return _fail("usage", f"algo {args.algo} needs a pattern", 2)
        elif args.algo == "brute":
            series = sq.brute_force_avoiders(args.pattern, args.terms,
                                             allow_over_cap=args.override_caps)
        else:
            series = dp.enumerate_avoiders(args.pattern, args.terms,
                                           algorithm=args.algo,
                                           allow_over_cap=args.override_caps)
    except CapExceededError as exc:
        return _fail("cap-exceeded", str(exc))
    except ValueError as exc:
        return _fail("usage", str(exc), 2)
    aio.write_bfile(args.output, series)
    return 0


def _analyze_power(real, dps, summaries):
    r = an.ratios(real, dps=dps)
    l, l2, l3 = an.intercept_pipeline(r)
    summaries.append(an.extrapolate_intercept(l2, power=1, depth=3, name="l2"))
    summaries.append(an.extrapolate_intercept(l3, power=1, depth=3, name="l3"))
    return {"r": r, "l": l, "l2": l2, "l3": l3}


def _analyze_stretched(real, dps, sigma, mu, g, summaries):
    r = an.ratios(real, dps=dps)
    l = an.linear_intercepts(r)
    cols = {"r": r, "l": l}
    t1 = an.sigma_estimator_ratio(r)
    t2 = an.sigma_estimator_root(real, dps=dps)
    cols["sigma_ratio_grad"] = list(zip(t1.gradient_ns, t1.gradients))
    cols["sigma_root_grad"] = list(zip(t2.gradient_ns, t2.gradients))
    if t1.gradients:
        summaries.append(an.extrapolate_intercept(
            list(zip(t1.gradient_ns, t1.gradients)), power=sigma, depth=3,
            name="sigma_ratio_gradient"))
    if t2.gradients:
        summaries.append(an.extrapolate_intercept(
            list(zip(t2.gradient_ns, t2.gradients)), power=sigma, depth=3,
            name="sigma_root_gradient"))
    if mu is not None:
        sg = an.sigma_local_gradient_known_mu(r, mu)
        m1 = an.mu1_estimator(r, mu, sigma)
        cols["sigma_known_mu"] = sg
        cols["mu1_estimate"] = m1
        summaries.append(an.extrapolate_intercept(sg, power=sigma, depth=3,
                                                  name="sigma_known_mu"))
        summaries.append(an.extrapolate_intercept(m1, power=0.5, depth=3,
                                                  name="mu1_estimate"))
        fits = an.fit_ratio4_sweep(r, sigma)
        for idx in range(4):
            cols[f"ratfit_c{idx + 1}"] = [(w.k, w.coefficients[idx]) for w in fits]
        summaries.append(an.extrapolate_intercept(
            [(w.k, w.coefficients[0]) for w in fits], power=1, depth=3,
            name="ratfit_c1"))
        if g is not None:
            mr = an.mu1_refined(real, mu, sigma, g, dps=dps)
            cols["mu1_refined"] = mr
            summaries.append(an.extrapolate_intercept(mr, power=1, depth=3,
                                                      name="mu1_refined"))
    return cols


def _analyze_factorial(real, dps, summaries):
    tr = an.factorial_ratio_transforms(real, dps=dps)
    cols = {"r": tr.r, "s": tr.s, "t": tr.t, "alpha_estimate": tr.alpha_estimates}
    summaries.append(an.extrapolate_intercept(tr.alpha_estimates, power=1,
                                              depth=3, name="alpha_estimate"))
    fits = an.fit_stirling_log_sweep(real, dps=dps)
    for idx in range(4):
        cols[f"stirling_e{idx + 1}"] = [(w.k, w.coefficients[idx]) for w in fits]
    summaries.append(an.extrapolate_intercept(
        [(w.k, w.coefficients[0]) for w in fits], power=1, depth=3, name="stirling_e1"))
    summaries.append(an.extrapolate_intercept(
        [(w.k, w.coefficients[1]) for w in fits], power=1, depth=3, name="stirling_e2"))
    er = an.egf_ratios(real, dps=dps)
    el, el2, el3 = an.intercept_pipeline(er)
    cols.update({"egf_r": er, "egf_l": el, "egf_l2": el2, "egf_l3": el3})
    summaries.append(an.extrapolate_intercept(el2, power=1, depth=3, name="egf_l2"))
    summaries.append(an.extrapolate_intercept(el3, power=1, depth=3, name="egf_l3"))
    return cols


def cmd_analyze(args):
    if args.model not in MODELS:
        return _fail("usage", f"model must be one of {MODELS}", 2)
    dps = args.precision
    try:
        loaded = aio.read_bfile(args.input, dps=dps)
    except (OSError, ValueError) as exc:
        return _fail("parse", str(exc))
    real = loaded.exact if not loaded.approx else loaded.combined_real(dps)
    assumptions = {"model": args.model, "precision": dps,
                   "input_terms_exact": loaded.n_exact,
                   "input_terms_predicted": len(loaded.approx)}
    summaries = []
    try:
        if args.model == "power":
            cols = _analyze_power(real, dps, summaries)
        elif args.model == "stretched":
            sigma = args.sigma if args.sigma is not None else 0.375
            assumptions["sigma"] = sigma
            if args.mu is not None:
                assumptions["mu"] = args.mu
            if args.g is not None:
                assumptions["g"] = args.g
            cols = _analyze_stretched(real, dps, sigma, args.mu, args.g, summaries)
        else:
            cols = _analyze_factorial(real, dps, summaries)
    except ValueError as exc:
        return _fail("insufficient-terms", str(exc))
    aio.write_trace_csv(args.output, cols, assumptions=assumptions, dps=dps)
    aio.write_intercept_summary(args.output + ".summary.txt", summaries,
                                assumptions=assumptions, dps=dps)
    return 0


def cmd_extend(args):
    dps = args.precision
    try:
        loaded = aio.read_bfile(args.input, dps=dps)
    except (OSError, ValueError) as exc:
        return _fail("parse", str(exc))
    exact = loaded.exact
    if args.order is not None or args.degrees is not None:
        if args.order is None or args.degrees is None:
            return _fail("usage", "--order and --degrees go together", 2)
        degrees = tuple(int(v) for v in args.degrees.split(","))
        try:
            cfgs = [ap.DAConfig(order=args.order, degrees=degrees,
                                inhomog_degree=0)]
        except ValueError as exc:
            return _fail("usage", str(exc), 2)
        cfgs = cfgs * 3  # ensemble aggregation needs >= 3 fits
    else:
        budget = min(loaded.n_exact, 44)
        cfgs = ap.default_ensemble(budget)
    try:
        pred = ap.predict_ensemble(exact, cfgs, args.predict, dps=dps)
    except AllFitsFailedError as exc:
        return _fail("fit-failed", str(exc))
    except InsufficientTermsError as exc:
        return _fail("insufficient-terms", str(exc))
    except VanishingMultiplierError as exc:
        aio.write_bfile(args.output, exact)
        return _fail("recurrence-stalled", str(exc))
    aio.write_extended_bfile(args.output, exact, pred)
    diag = {
        "input_terms": loaded.n_exact,
        "predicted": args.predict,
        "precision": dps,
        "configs": [{"order": c.order, "degrees": list(c.degrees),
                     "inhomog_degree": c.inhomog_degree,
                     "matched_terms": c.matched_terms}
                    for c in pred.configs_used],
        "failures": [f"{c.order}/{c.degrees}/{c.inhomog_degree}: {msg}"
                     for c, msg in pred.failures],
        "agreed_digits": [int(d) for d in pred.agreed_digits],
        "spreads": [aio.format_real_sci(s, 3) for s in pred.spreads],
        "excluded": [[n, str(cfg.degrees), aio.format_real_sci(v, 8)]
                     for n, cfg, v in pred.excluded],
    }
    with open(args.output + ".diag.json", "w") as fh:
        json.dump(diag, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_verify(args):
    if args.input is not None:
        if args.pattern is None:
            return _fail("usage", "--input needs --pattern to verify against", 2)
        try:
            loaded = aio.read_bfile(args.input)
        except (OSError, ValueError) as exc:
            return _fail("parse", str(exc))
        bad = ver.compare_series_file(loaded, args.pattern)
        if bad is not None:
            print(f"FAIL series-file-comparison first mismatch at n={bad}")
            return 1
        print(f"PASS series-file-comparison {loaded.n_exact} exact terms match")
        return 0
    results = ver.run_checks(max_n=args.max_n)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        tag = "PASS" if r.ok else "FAIL"
        detail = f"  {r.detail}" if r.detail else ""
        print(f"{tag} {r.name:<{width}}{detail}")
        failed += 0 if r.ok else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def build_parser():
    p = argparse.ArgumentParser(prog="ascentlab",
                                description="Pattern-avoiding ascent sequence workbench")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("enumerate", help="write a series b-file")
    pe.add_argument("--pattern", required=True, choices=PATTERNS)
    pe.add_argument("--algo", default="dp", choices=ALGOS)
    pe.add_argument("--terms", type=int, required=True)
    pe.add_argument("--output", required=True)
    pe.add_argument("--override-caps", action="store_true")
    pe.set_defaults(func=cmd_enumerate)

    pa = sub.add_parser("analyze", help="write estimator-trace CSV from a b-file")
    pa.add_argument("--input", required=True)
    pa.add_argument("--output", required=True)
    pa.add_argument("--model", required=True)
    pa.add_argument("--sigma", type=float)
    pa.add_argument("--mu", type=float)
    pa.add_argument("--g", type=float)
    pa.add_argument("--precision", type=int, default=DEFAULT_DPS)
    pa.set_defaults(func=cmd_analyze)

    px = sub.add_parser("extend", help="extend a series by ensemble prediction")
    px.add_argument("--input", required=True)
    px.add_argument("--output", required=True)
    px.add_argument("--predict", type=int, required=True)
    px.add_argument("--order", type=int)
    px.add_argument("--degrees")
    px.add_argument("--precision", type=int, default=DEFAULT_DPS)
    px.set_defaults(func=cmd_extend)

    pv = sub.add_parser("verify", help="run the cross-check suite")
    pv.add_argument("--max-n", type=int, default=10)
    pv.add_argument("--input")
    pv.add_argument("--pattern")
    pv.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "precision", None) is not None and args.command in ("analyze", "extend"):
        if args.precision < 30:
            print("error: usage: precision must be at least 30", file=sys.stderr)
            return 2
    if getattr(args, "terms", None) is not None and args.terms < 1:
        print("error: usage: terms must be at least 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
