"""krh: experiments on the zeros of random harmonic polynomials.

Every file written starts with a header recording the tool version, the
subcommand and all parameters (seed included). Exit codes: 0 success,
2 tolerance or validation failure, 3 bad arguments.
"""
import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import __version__
from .density import (char_function, cdf_Y, conditional_covariance, expected_abs_Y,
                      intensity_from_density, pdf_Y, sample_conditioned)
from .ensembles import (GAUSSIAN_KINDS, EnsembleSpec, empirical_expected_zeros,
                        variance_profile)
from .errors import DomainError, NotGaussian, ToleranceNotMet, TooManyFailures
from .extremal import (kac_real_zero_trend, search_best, verify_witness, witness_from_json,
                       witness_polynomial, witness_to_json)
from .harmonic_solver import find_zeros
from .kac_rice import (expected_zeros_annulus, fit_expansion, integrand_general,
                       intensity_profile, limit_constant_exterior, limit_constant_interior,
                       partition_report)
from .output import header_line, write_csv, write_json, write_svg
from .quadrature import integrate
from .rng import ordered_map, trial_rng

EXIT_OK, EXIT_FAIL, EXIT_ARGS = 0, 2, 3
DENSITY_STREAM = 0x44454E53

# command-line names for ensemble kinds
KIND_ALIASES = {
    "kac": "kac_iid",
    "kostlan": "kostlan",
    "weyl": "weyl",
    "truncated": "truncated",
    "rademacher": "iid_rademacher",
    "uniform-modulus": "iid_uniform_modulus",
    "unimodular": "unimodular_construction",
    "littlewood": "littlewood",
}
GAUSSIAN_NAMES = [k for k, v in KIND_ALIASES.items() if v in GAUSSIAN_KINDS]


class BadArguments(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def seed_type(text):
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def real(text):
    v = float(text)
    if math.isnan(v):
        raise argparse.ArgumentTypeError("nan is not allowed")
    return v


def int_list(text):
    try:
        vals = [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("need positive integers")
    return vals


def read_config(path):
    """Parse ``key = value`` lines; '#' starts a comment, quotes are stripped."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line or line.startswith("["):
                continue
            if "=" not in line:
                raise BadArguments(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v.strip("'\"")
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=seed_type, default=None,
                        help="64-bit seed (default: $KRH_SEED, else 0)")
    common.add_argument("--threads", type=positive_int, default=1)
    common.add_argument("--out-dir", default=".")
    common.add_argument("--rel-tol", type=real, default=1e-8)
    common.add_argument("--config", default=None, help="key = value file; flags override it")

    p = Parser(prog="krh", description="Zeros of random harmonic polynomials p + conj(q).")
    p.add_argument("--version", action="version", version=f"krh {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    s = sub.add_parser("expect", parents=[common], help="expected zero count by quadrature")
    s.add_argument("--kind", choices=GAUSSIAN_NAMES, default="kac")
    s.add_argument("--n", type=positive_int, required=True)
    s.add_argument("--m", type=nonneg_int, default=None, help="degree of q (default n)")
    s.add_argument("--a", type=real, default=0.0, help="inner bound on |z|^2")
    s.add_argument("--b", type=real, default=math.inf, help="outer bound on |z|^2")
    s.set_defaults(func=cmd_expect)

    s = sub.add_parser("sweep", parents=[common], help="totals and partition over n")
    s.add_argument("--n-list", type=int_list, default=[100, 1000, 10000, 100000, 1000000])
    s.add_argument("--kind", choices=GAUSSIAN_NAMES, default="kac")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("intensity", parents=[common], help="radial intensity curves")
    s.add_argument("--n", type=positive_int, required=True)
    s.add_argument("--m", type=nonneg_int, default=None)
    s.add_argument("--r-min", type=real, default=0.5)
    s.add_argument("--r-max", type=real, default=1.5)
    s.add_argument("--steps", type=positive_int, default=200)
    s.set_defaults(func=cmd_intensity)

    s = sub.add_parser("mc", parents=[common], help="Monte Carlo zero counts")
    s.add_argument("--kind", choices=list(KIND_ALIASES), default="kac")
    s.add_argument("--n", type=positive_int, required=True)
    s.add_argument("--m", type=nonneg_int, default=None)
    s.add_argument("--trials", type=positive_int, default=1000)
    s.add_argument("--a", type=real, default=0.0)
    s.add_argument("--b", type=real, default=math.inf)
    s.add_argument("--allow-failures", action="store_true",
                   help="report instead of failing when over 2%% of trials do not validate")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("extremal", parents=[common], help="unimodular witness search")
    s.add_argument("--n", type=positive_int, default=16)
    s.add_argument("--seeds", type=positive_int, default=2000)
    s.add_argument("--cross-check", action="store_true",
                   help="also count the witness zeros with the general solver")
    s.add_argument("--trend", type=int_list, default=None,
                   help="instead: mean real-root counts for these degrees")
    s.add_argument("--trials", type=positive_int, default=400)
    s.set_defaults(func=cmd_extremal)

    s = sub.add_parser("verify-witness", parents=[common], help="recount a witness file")
    s.add_argument("path")
    s.add_argument("--cross-check", action="store_true")
    s.set_defaults(func=cmd_verify_witness)

    s = sub.add_parser("density-check", parents=[common], help="density oracles vs sampling")
    s.add_argument("--n", type=positive_int, default=1)
    s.add_argument("--m", type=nonneg_int, default=None)
    s.add_argument("--w", type=real, default=1.0)
    s.add_argument("--samples", type=positive_int, default=100000)
    s.set_defaults(func=cmd_density_check)

    s = sub.add_parser("limits", parents=[common], help="limit constants for an annulus or disk")
    s.add_argument("--r-inner", type=real, default=0.0)
    s.add_argument("--r-outer", type=real, required=True)
    s.add_argument("--n", type=positive_int, default=None,
                   help="also compare with the quadrature value at this degree")
    s.set_defaults(func=cmd_limits)
    return p, sub


def _config_path(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def parse(argv):
    p, sub = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    path = _config_path(argv)
    command = next((t for t in argv if t in sub.choices), None)
    if path and command:
        try:
            cfg = read_config(path)
        except OSError as exc:
            p.error(f"cannot read config: {exc}")
        except BadArguments as exc:
            p.error(str(exc))
        cfg.pop("config", None)
        sp = sub.choices[command]
        actions = {a.dest: a for a in sp._actions}
        bad = sorted(set(cfg) - set(actions) - {"help"})
        if bad:
            p.error(f"unknown config keys: {', '.join(bad)}")
        for k, v in cfg.items():
            a = actions[k]
            if isinstance(a, argparse._StoreTrueAction):
                cfg[k] = v.lower() in ("1", "true", "yes", "on")
            # a value from the file satisfies a required flag
            a.required = False
        sp.set_defaults(**cfg)
    args = p.parse_args(argv)
    if args.seed is None:
        env = os.environ.get("KRH_SEED")
        try:
            args.seed = seed_type(env) if env else 0
        except (ValueError, argparse.ArgumentTypeError):
            p.error(f"bad KRH_SEED value {env!r}")
    return args


def params(args, *names):
    d = {k: getattr(args, k) for k in names}
    d["rel_tol"] = args.rel_tol
    d["seed"] = args.seed
    d["threads"] = args.threads
    return d


def out_path(args, name):
    return os.path.join(args.out_dir, name)


def _profile(kind, n, m):
    return variance_profile(EnsembleSpec(KIND_ALIASES[kind], n, n if m is None else m))


def cmd_expect(args):
    m = args.n if args.m is None else args.m
    if m > args.n:
        raise BadArguments("need m <= n")
    res = expected_zeros_annulus(_profile(args.kind, args.n, m), args.a, args.b, args.rel_tol)
    args.m = m
    write_csv(out_path(args, "expect.csv"), "expect", params(args, "kind", "n", "m", "a", "b"),
              ["kind", "n", "m", "a", "b", "value", "abs_error_estimate",
               "subintervals_used", "tail_bound", "converged"],
              [[args.kind, args.n, m, args.a, args.b, res.value, res.abs_error_estimate,
                res.subintervals_used, res.tail_bound, res.converged]])
    print(f"value={res.value!r} abs_error_estimate={res.abs_error_estimate:.3e} "
          f"subintervals_used={res.subintervals_used} tail_bound={res.tail_bound:.6g} "
          f"converged={res.converged}")
    return EXIT_OK if res.converged else EXIT_FAIL


def _sweep_row(kind, n, rel_tol):
    prof = _profile(kind, n, n)
    inner, mid, outer = partition_report(n, rel_tol, prof)
    total = inner.value + mid.value + outer.value
    ok = inner.converged and mid.converged and outer.converged
    return [n, total, inner.value, mid.value, outer.value,
            total / (0.5 * n * math.log(n))], ok


def cmd_sweep(args):
    if min(args.n_list) < 2:
        raise BadArguments("sweep needs n >= 2")
    out = ordered_map(lambda n: _sweep_row(args.kind, n, args.rel_tol), args.n_list, args.threads)
    rows = [r for r, _ in out]
    write_csv(out_path(args, "sweep.csv"), "sweep", params(args, "kind", "n_list"),
              ["n", "total", "inner", "middle", "outer", "ratio_to_half_nlogn"], rows)
    for r in rows:
        print(f"n={r[0]} total={r[1]:.10g} middle_share={r[3] / r[1]:.4f} ratio={r[5]:.6f}")
    if len(rows) >= 3:
        a, b, c = fit_expansion([r[0] for r in rows], [r[1] for r in rows])
        print(f"fit: total ~ {a:.5f} n ln n + {b:.5f} n ln ln n + {c:.5f} n")
    return EXIT_OK if all(ok for _, ok in out) else EXIT_FAIL


def cmd_intensity(args):
    m = args.n if args.m is None else args.m
    if m > args.n:
        raise BadArguments("need m <= n")
    if not 0 < args.r_min <= args.r_max:
        raise BadArguments("need 0 < r-min <= r-max")
    args.m = m
    radii = np.linspace(args.r_min, args.r_max, args.steps)
    prof = intensity_profile(args.n, m, radii)
    keys = ["radius", "harmonic_intensity", "analytic_intensity", "difference"]
    par = params(args, "n", "m", "r_min", "r_max", "steps")
    write_csv(out_path(args, "intensity.csv"), "intensity", par, keys,
              [[d[k] for k in keys] for d in prof])
    write_svg(out_path(args, "intensity.svg"),
              f"n={args.n} m={m}: zeros per unit area", list(radii),
              [(k, [d[k] for d in prof]) for k in keys[1:]], xlabel="|z|",
              ylabel="intensity")
    print(f"wrote {args.steps} rows to {out_path(args, 'intensity.csv')}")
    return EXIT_OK


def cmd_mc(args):
    kind = KIND_ALIASES[args.kind]
    m = args.m
    if kind == "unimodular_construction":
        m = args.n - 1 if m is None else m
    spec = EnsembleSpec(kind, args.n, m)
    args.m = spec.m
    try:
        est = empirical_expected_zeros(spec, (args.a, args.b), args.trials, args.seed,
                                       args.threads, strict=not args.allow_failures)
        status = EXIT_OK
    except TooManyFailures as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    data = {"kind": kind, "n": spec.n, "m": spec.m, "a": args.a, "b": args.b,
            "mean": est.mean, "std_error": est.std_error, "trials": est.trials,
            "seed": est.seed, "failures": est.failures}
    if kind in GAUSSIAN_KINDS:
        q = expected_zeros_annulus(variance_profile(spec), args.a, args.b, args.rel_tol)
        z = (est.mean - q.value) / est.std_error if est.std_error > 0 else 0.0
        data["quadrature"] = q.value
        data["z_score"] = z
    # inf is not valid JSON
    data = {k: (str(v) if isinstance(v, float) and not math.isfinite(v) else v)
            for k, v in data.items()}
    write_json(out_path(args, "mc.json"), "mc",
               params(args, "kind", "n", "m", "trials", "a", "b", "allow_failures"), data)
    print(f"EmpiricalEstimate(mean={est.mean!r}, std_error={est.std_error!r}, "
          f"trials={est.trials}, seed={est.seed}, failures={est.failures})")
    if "quadrature" in data:
        print(f"quadrature={data['quadrature']!r} z={data['z_score']:.3f}")
    return status


def _cross_check(w):
    zs = find_zeros(witness_polynomial(w), quiet=True)
    ok = zs.validated and zs.total == w.total_zeros
    print(f"find_zeros: total={zs.total} validated={zs.validated} "
          f"{'agrees' if ok else 'DISAGREES'} with line count {w.total_zeros}")
    return ok


def cmd_extremal(args):
    if args.trend:
        return _trend(args)
    if args.n < 2:
        raise BadArguments("extremal needs n >= 2")
    best, rejected = search_best(args.n, args.seeds, args.seed, args.threads)
    if best is None:
        print("error: every candidate was ambiguous", file=sys.stderr)
        return EXIT_FAIL
    doc = json.loads(witness_to_json(best))
    head = {"header": header_line("extremal", params(args, "n", "seeds"))[2:]}
    path = out_path(args, f"witness_n{args.n}.json")
    os.makedirs(args.out_dir, exist_ok=True)
    with open(path, "w") as fh:
        json.dump({**head, **doc}, fh, indent=1)
        fh.write("\n")
    print(f"n={args.n} seeds={args.seeds} best_seed={best.seed} total_zeros={best.total_zeros} "
          f"per_line={list(best.per_line_counts)} rejected={rejected} -> {path}")
    if args.cross_check and not _cross_check(best):
        return EXIT_FAIL
    return EXIT_OK


def _trend(args):
    means, slope, intercept, rejected = kac_real_zero_trend(args.trend, args.trials,
                                                            args.seed, args.threads)
    write_csv(out_path(args, "trend.csv"), "extremal", params(args, "trend", "trials"),
              ["n", "ln_n", "mean_real_roots"],
              [[n, math.log(n), v] for n, v in means.items()])
    print(f"slope={slope:.5f} intercept={intercept:.5f} rejected={rejected} "
          f"(reference 2/pi = {2 / math.pi:.5f})")
    return EXIT_OK


def cmd_verify_witness(args):
    try:
        with open(args.path) as fh:
            text = fh.read()
    except OSError as exc:
        raise BadArguments(f"cannot read {args.path}: {exc}")
    ok, msgs, recount = verify_witness(text)
    for msg in msgs:
        print(f"FAIL: {msg}")
    if not ok:
        return EXIT_FAIL
    print(f"OK: recounted {recount} zeros")
    if args.cross_check:
        w, _ = witness_from_json(text)
        if not _cross_check(w):
            return EXIT_FAIL
    return EXIT_OK


def _ks_distance(sample, cdf):
    x = np.sort(sample)
    k = x.shape[0]
    F = cdf(x)
    i = np.arange(1, k + 1)
    return float(max(np.max(i / k - F), np.max(F - (i - 1) / k)))


def density_checks(n, m, w, samples, seed):
    """Run the density oracles; returns rows ``(check, value, target, tolerance, passed)``."""
    prof = _profile("kac", n, m)
    G = conditional_covariance(prof, w)
    rows = []

    def add(name, value, target, tol):
        rows.append((name, float(value), float(target), float(tol),
                     bool(abs(value - target) <= tol)))

    lhs = math.pi * intensity_from_density(prof, w)
    rhs = float(integrand_general(prof, w))
    add("cross_module_point", lhs, rhs, 1e-9 * abs(rhs))
    grid = np.linspace(0.1, 5.0, 100)
    worst = max(abs(math.pi * intensity_from_density(prof, x) - float(integrand_general(prof, x)))
                / abs(float(integrand_general(prof, x))) for x in grid)
    add("cross_module_grid_max_rel", worst, 0.0, 1e-9)

    def neg(y):
        return pdf_Y(G, -np.asarray(y))

    mass = (integrate(lambda y: pdf_Y(G, y), 0.0, math.inf, rel_tol=1e-12).value
            + integrate(neg, 0.0, math.inf, rel_tol=1e-12).value)
    add("pdf_normalization", mass, 1.0, 1e-6)
    if (n, m, w) == (1, 1, 1.0):
        add("expected_abs_Y_hand", expected_abs_Y(G), 1 / math.sqrt(2), 1e-12)

    xi1, xi2 = sample_conditioned(prof, w, samples, trial_rng(seed, 0, DENSITY_STREAM))
    Y = np.abs(xi1) ** 2 - np.abs(xi2) ** 2
    add("ks_distance", _ks_distance(Y, lambda y: cdf_Y(G, y)), 0.0, 0.01)
    absY = np.abs(Y)
    add("expected_abs_Y_mc", absY.mean(), expected_abs_Y(G),
        4 * absY.std(ddof=1) / math.sqrt(samples))
    for t in (0.3, 1.0, 3.0):
        e = np.exp(1j * t * Y)
        phi = complex(char_function(G, t))
        # standard error of a complex mean, both components pooled
        se = math.sqrt((e.real.var(ddof=1) + e.imag.var(ddof=1)) / samples)
        add(f"char_function_t{t:g}", abs(e.mean() - phi), 0.0, 4 * se)
    return rows


def cmd_density_check(args):
    m = args.n if args.m is None else args.m
    if m > args.n:
        raise BadArguments("need m <= n")
    if args.w <= 0:
        raise BadArguments("need w > 0")
    args.m = m
    rows = density_checks(args.n, m, args.w, args.samples, args.seed)
    write_csv(out_path(args, "density_check.csv"), "density-check",
              params(args, "n", "m", "w", "samples"),
              ["check", "value", "target", "tolerance", "passed"], rows)
    for name, v, t, tol, ok in rows:
        print(f"{'PASS' if ok else 'FAIL'} {name}: value={v:.6g} target={t:.6g} tol={tol:.2g}")
    return EXIT_OK if all(r[4] for r in rows) else EXIT_FAIL


def cmd_limits(args):
    ri, ro = args.r_inner, args.r_outer
    if 0 <= ri <= ro < 1:
        name, const = "C_V", limit_constant_interior(ri, ro)
    elif 1 < ri <= ro:
        name, const = "C_U", limit_constant_exterior(ri, ro)
    else:
        raise BadArguments("radii must lie both inside or both outside the unit circle")
    row = [name, ri, ro, const]
    cols = ["constant", "r_inner", "r_outer", "value"]
    msg = f"{name}({ri:g}, {ro:g}) = {const!r}"
    status = EXIT_OK
    if args.n:
        res = expected_zeros_annulus(_profile("kac", args.n, args.n), ri * ri, ro * ro,
                                     args.rel_tol)
        est = res.value / args.n if name == "C_U" else res.value
        cols += ["n", "quadrature", "rel_diff"]
        row += [args.n, est, (est - const) / const]
        msg += f"; n={args.n}: {est!r} (relative difference {(est - const) / const:.3e})"
        if not res.converged:
            status = EXIT_FAIL
    write_csv(out_path(args, "limits.csv"), "limits", params(args, "r_inner", "r_outer", "n"),
              cols, [row])
    print(msg)
    return status


def main(argv=None) -> int:
    args = parse(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ToleranceNotMet)
            return args.func(args)
    except (BadArguments, DomainError, NotGaussian, ValueError) as exc:
        print(f"krh {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
