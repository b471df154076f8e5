"""Command-line front end.

Subcommands
-----------
gen       materialize a set to the text set format
count     per-dyadic-block count profile as CSV
estimate  finite-scale dimension estimate as CSV + summary line
solve     closed-form dimensions (prefix codes, digit sets, rules, ranks)
fractal   substitution-rule stages: sizes, dimension, point export
gale      build the explicit betting function and dump its table
algebra   pointwise/product/affine/component operations
verify    run a named verification suite, printing PASS/FAIL lines

Set spec strings (for --set):
  all                                    every positive integer
  primes                                 the primes
  squares | cubes | perfect:m=<m>        perfect powers
  powers:b=<b>                           powers of b
  finite:<v1>|<v2>|...                   explicit finite set
  digits:k=<k>,allow=<digits>            digit-restricted set
  code:k=<k>,delta=<digits>,B=<w1>|<w2>  prefix-code set
  pascal:depth=<n>                       odd binomial coefficients (lattice)
  subst:c=<c>,d=<d>,rule=<acts>,depth=<k>  substitution stage (lattice);
                                         acts: one char per cell, row-major
                                         over {1..c}^d: n=drop, 0..3=rotation
  tower:a=<α>,b=<β>,g=<γ>,part=A|B       sum-construction factor

Exit codes: 0 success, 1 domain/computation error, 2 usage error.
A failing verify suite exits 1.
"""

from __future__ import annotations

import argparse
import os
import sys
from contextlib import contextmanager
from typing import Optional

from . import algebra, closed_form, estimators, gales, generators, plotting, \
    sets, verify
from .errors import ParseError, UsageError, ZdimError


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("ZDIM_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"ZDIM_BUDGET must be an integer, got {env!r}")
    return sets.DEFAULT_BUDGET


@contextmanager
def _out_stream(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _load_set(args):
    spec = args.set
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            return sets.parse_set_stream(fh)
    return generators.from_spec(spec)


def _norm_kind(S, args) -> str:
    if getattr(args, "norm", None):
        return args.norm
    return "value" if isinstance(S, sets.IntegerSet) else "euclidean"


def _plot_paths(out: Optional[str]):
    if not out or out == "-":
        return None, None
    base, _ = os.path.splitext(out)
    return base + ".png", base + ".dat"


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    S = _load_set(args)
    budget = _budget(args)
    with _out_stream(args.out) as fh:
        if isinstance(S, sets.IntegerSet):
            if args.nmax is None:
                raise UsageError("gen needs --nmax for integer sets")
            n = sets.write_integer_set(S, fh, bound=2 ** args.nmax, budget=budget)
        else:
            n = sets.write_lattice_set(S, fh, budget=budget)
    print(f"wrote {n} elements", file=sys.stderr)
    return 0


def cmd_count(args) -> int:
    S = _load_set(args)
    norm = _norm_kind(S, args)
    profile = sets.block_profile(S, norm, args.nmax, budget=_budget(args))
    with _out_stream(args.out) as fh:
        profile.write_csv(fh)
    if args.plot:
        png, dat = _plot_paths(args.out)
        if png is None:
            raise UsageError("--plot needs --out to name the figure files")
        plotting.render_profile(profile, png, title=profile.name)
        with open(dat, "w") as fh:
            plotting.write_plot_data(profile, fh)
    return 0


def cmd_estimate(args) -> int:
    S = _load_set(args)
    norm = _norm_kind(S, args)
    profile = sets.block_profile(S, norm, args.nmax, budget=_budget(args))
    est = estimators.upper_dim_estimate(profile, window=args.window)
    with _out_stream(args.out) as fh:
        est.write_csv(fh)
    print(f"upper={est.upper:.6f} lower={est.lower:.6f} "
          f"window=[{est.window[0]},{est.window[1]}] slope={est.slope:.6f}")
    if args.plot:
        png, dat = _plot_paths(args.out)
        if png is None:
            raise UsageError("--plot needs --out to name the figure files")
        plotting.render_estimate(est, png, title=profile.name)
        with open(dat, "w") as fh:
            plotting.write_plot_data(est, fh)
    return 0


def _parse_code(text: str) -> generators.InstantaneousCodeSpec:
    kv = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"malformed --code parameter {part!r}")
        k, v = part.split("=", 1)
        kv[k.strip()] = v.strip()
    try:
        words = [tuple(int(ch) for ch in w) for w in kv["B"].split("|")]
        return generators.InstantaneousCodeSpec.make(
            int(kv["k"]), [int(ch) for ch in kv["delta"]], words)
    except KeyError as exc:
        raise UsageError(f"--code is missing parameter {exc}") from None


def cmd_solve(args) -> int:
    given = [x for x in (args.code, args.digits, args.rule, args.vectors)
             if x is not None]
    if len(given) != 1:
        raise UsageError(
            "solve needs exactly one of --code, --digits, --rule, --vectors")
    if args.code:
        res = closed_form.code_dimension(_parse_code(args.code))
        print(f"s_star={res.s_star:.6f}")
        print(f"residual={abs(res.beta_at_s_star - 1.0):.3e} "
              f"iterations={res.iterations}")
    elif args.digits:
        kv = dict(p.split("=", 1) for p in args.digits.split(","))
        dim = closed_form.digit_dimension(int(kv["k"]),
                                          [int(ch) for ch in kv["allow"]])
        print(f"s_star={dim:.6f}")
    elif args.rule:
        rule = _parse_rule(args.rule)
        dim = closed_form.substitution_dimension(rule)
        print(f"s_star={dim:.6f}")
        print(f"survivors={rule.survivor_count} base={rule.c}")
    else:
        vectors = [[int(x) for x in row.split()]
                   for row in args.vectors.split("|")]
        print(f"rank={closed_form.lattice_subspace_dimension(vectors)}")
    return 0


def _parse_rule(text: str) -> generators.SubstitutionRule:
    import itertools
    kv = dict(p.split("=", 1) for p in text.split(","))
    try:
        c, d, acts = int(kv["c"]), int(kv["d"]), kv["rule"]
    except KeyError as exc:
        raise UsageError(f"--rule is missing parameter {exc}") from None
    idxs = list(itertools.product(range(1, c + 1), repeat=d))
    if len(acts) != len(idxs):
        raise UsageError(f"--rule needs {len(idxs)} cell actions, got {len(acts)}")
    mapping = {idx: ("no" if ch == "n" else f"R{ch}")
               for idx, ch in zip(idxs, acts)}
    return generators.SubstitutionRule.make(c, d, mapping)


def cmd_fractal(args) -> int:
    rule = _parse_rule(args.rule)
    depth = args.depth
    dim = closed_form.substitution_dimension(rule)
    with _out_stream(args.out) as fh:
        fh.write("k,stage_size\n")
        for k in range(depth + 1):
            size = int(generators.substitution_grid(rule, k).sum())
            fh.write(f"{k},{size}\n")
    print(f"dimension={dim:.6f} survivors={rule.survivor_count}")
    if args.plot:
        png, _ = _plot_paths(args.out)
        if png is None:
            raise UsageError("--plot needs --out to name the figure file")
        if rule.d != 2:
            raise UsageError("--plot renders planar rules only")
        grid = generators.substitution_grid(rule, depth)
        plotting.render_grid(grid, png, title=f"stage {depth}")
    return 0


def cmd_gale(args) -> int:
    S = _load_set(args)
    if not isinstance(S, sets.IntegerSet):
        raise UsageError("gale construction works on integer sets")
    g = gales.build_supergale(S, args.s, args.depth, budget=_budget(args))
    dump_level = args.nmax if args.nmax is not None else min(args.depth, 10)
    with _out_stream(args.out) as fh:
        gales.dump_csv(g, fh, max_level=dump_level)
    dfc = gales.gale_deficiency(g, mode="gale",
                                max_level=min(args.depth, 14))
    count, bound, ok = gales.kraft_check(g, min(args.depth, 16))
    print(f"s={args.s} depth={args.depth} deficiency={dfc:.3e} "
          f"kraft={'ok' if ok else 'VIOLATED'} ({count} <= {bound:.3f})")
    return 0


def cmd_algebra(args) -> int:
    budget = _budget(args)
    A = _load_set(args)
    if args.op in ("sum", "product"):
        if args.set2 is None or args.nmax is None:
            raise UsageError(f"--op {args.op} needs --set2 and --nmax")
        B = generators.from_spec(args.set2)
        C = algebra.pointwise(A, B, args.op, 2 ** args.nmax, budget=budget)
        with _out_stream(args.out) as fh:
            sets.write_integer_set(C, fh, bound=2 ** args.nmax, budget=budget)
    elif args.op == "cartesian":
        if args.set2 is None or args.r is None:
            raise UsageError("--op cartesian needs --set2 and --r")
        B = generators.from_spec(args.set2)
        P = algebra.cartesian(A, B, args.r, budget=budget)
        with _out_stream(args.out) as fh:
            sets.write_lattice_set(P, fh, budget=budget)
    elif args.op in ("translate", "dilate"):
        if args.k is None or args.nmax is None:
            raise UsageError(f"--op {args.op} needs --k and --nmax")
        C = algebra.affine(A, args.k, args.op)
        with _out_stream(args.out) as fh:
            sets.write_integer_set(C, fh, bound=2 ** args.nmax, budget=budget)
    elif args.op == "components":
        if args.r is None:
            raise UsageError("--op components needs --r")
        if isinstance(A, sets.IntegerSet):
            if args.nmax is None:
                raise UsageError("--op components needs --nmax for integer sets")
            A = sets.finite_integer_set(
                A.elements(bound=2 ** args.nmax, budget=budget), name=A.name)
        comps = algebra.bounded_components(A, args.r, budget=budget)
        with _out_stream(args.out) as fh:
            algebra.components_csv(comps, fh)
        print(f"components={len(comps)}")
    else:
        raise UsageError(f"unknown algebra op {args.op!r}")
    return 0


def cmd_verify(args) -> int:
    suite = verify.SUITES.get(args.theorem)
    if suite is None:
        raise UsageError(
            f"unknown theorem id {args.theorem!r}; "
            f"known: {', '.join(sorted(verify.SUITES))}")
    kwargs = {}
    if args.theorem == "thm5.6":
        kwargs = dict(alpha=args.alpha, beta=args.beta, gamma=args.gamma)
    elif args.theorem == "thm5.5" and args.depth is not None:
        kwargs = dict(depth=args.depth)
    results = suite(**kwargs)
    for r in results:
        print(r.line())
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2, matching the usage-error contract
        self.exit(2, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zdim", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, *, set_arg=True):
        if set_arg:
            sp.add_argument("--set", required=True,
                            help="set spec string, or @path to a set file")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--budget", type=int, default=None,
                        help="enumeration budget (default 10^8 or ZDIM_BUDGET)")

    sp = sub.add_parser("gen", help="materialize a set to the text format")
    common(sp)
    sp.add_argument("--nmax", type=int, default=None,
                    help="bound exponent: write elements <= 2^nmax")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("count", help="per-dyadic-block count profile")
    common(sp)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--norm", choices=sets.NORM_KINDS, default=None)
    sp.add_argument("--plot", action="store_true",
                    help="also render a figure and plot-data file next to --out")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("estimate", help="finite-scale dimension estimate")
    common(sp)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--window", type=int, default=estimators.DEFAULT_WINDOW)
    sp.add_argument("--norm", choices=sets.NORM_KINDS, default=None)
    sp.add_argument("--plot", action="store_true",
                    help="also render a figure and plot-data file next to --out")
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("solve", help="closed-form dimensions")
    sp.add_argument("--code", default=None,
                    help="k=<k>,delta=<digits>,B=<w1>|<w2>|...")
    sp.add_argument("--digits", default=None, help="k=<k>,allow=<digits>")
    sp.add_argument("--rule", default=None, help="c=<c>,d=<d>,rule=<acts>")
    sp.add_argument("--vectors", default=None,
                    help="integer vectors, e.g. '1 0|0 1'")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("fractal", help="substitution-rule stages")
    sp.add_argument("--rule", required=True, help="c=<c>,d=<d>,rule=<acts>")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--plot", action="store_true")
    sp.set_defaults(func=cmd_fractal)

    sp = sub.add_parser("gale", help="build the explicit betting function")
    common(sp)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--nmax", type=int, default=None,
                    help="deepest level to include in the CSV dump")
    sp.set_defaults(func=cmd_gale)

    sp = sub.add_parser("algebra", help="set operations")
    common(sp)
    sp.add_argument("--op", required=True,
                    choices=("sum", "product", "cartesian", "translate",
                             "dilate", "components"))
    sp.add_argument("--set2", default=None, help="second operand spec")
    sp.add_argument("--nmax", type=int, default=None)
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.set_defaults(func=cmd_algebra)

    docs = "\n".join(f"  {tid}: {doc}" for tid, doc in
                     sorted(verify.SUITE_DOCS.items()))
    sp = sub.add_parser("verify", help="run a named verification suite",
                        description="Suites:\n" + docs,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("theorem", help="suite id, e.g. thm5.1")
    sp.add_argument("--alpha", type=float, default=0.3)
    sp.add_argument("--beta", type=float, default=0.5)
    sp.add_argument("--gamma", type=float, default=0.7)
    sp.add_argument("--depth", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"zdim: usage error: {exc}", file=sys.stderr)
        return 2
    except ZdimError as exc:
        print(f"zdim: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"zdim: i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
