"""Command-line front end.

Exit codes: 0 success, 1 an identity failed, 2 bad arguments, 3 pole,
4 non-probabilistic weights met by the sampler.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from collections import Counter
from fractions import Fraction
from itertools import product as cartesian

from .colors import all_colors, all_signed_permutations, identity, parse_one_line
from .identities import (
    HypothesisError,
    NegativeRadicandError,
    check_cap_stochastic,
    check_eq312,
    check_hecke,
    check_reflection,
    check_thm31,
    check_thm32,
    check_thm33,
    check_vertex_stochastic,
    check_ybe,
    random_real_point,
    thm31_applies,
    thm32_applies,
    thm33_applies,
    ybe_top_vector,
)
from .lattice import (
    EnumerationLimitError,
    ModelSpec,
    NonStochasticError,
    all_mu,
    enumerate_states,
    partition_function,
    sample_state,
    state_weight,
    validate_regime,
)
from .scalar import ParamPoint, PoleError, float_embed, parse_rational, random_param_point, rational_to_json
from .weights import R_FAMILIES

SUITES = ("stochastic", "ybe", "reflection", "thm31", "thm32", "thm33", "eq312", "hecke")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_POLE, EXIT_NONSTOCHASTIC = 0, 1, 2, 3, 4


class UsageError(ValueError):
    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(message)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _error(kind: str, message: str, code: int, **extra) -> int:
    body = {"error": kind, "message": message}
    body.update(extra)
    print(dumps(body), file=sys.stderr)
    return code


def _parse_int_list(flag: str, text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise UsageError(flag, f"{flag}: expected comma-separated integers, got {text!r}") from None


def _rational(flag: str, text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(flag, f"{flag}: {exc}") from None


def explicit_params(args, n: int) -> ParamPoint | None:
    """Build the point from --r/--s/--nu/--t/--x, or None if none were given."""
    given = {k: getattr(args, k) for k in ("r", "s", "nu", "t", "x")}
    if all(v is None for v in given.values()):
        return None
    missing = [k for k, v in given.items() if v is None]
    if missing:
        raise UsageError("--" + missing[0], f"--{missing[0]} is required when any parameter is given")
    xs = tuple(_rational("--x", v) for v in args.x.split(",") if v.strip())
    if len(xs) != n:
        raise UsageError("--x", f"--x: expected {n} values, got {len(xs)}")
    try:
        return ParamPoint(_rational("--r", args.r), _rational("--s", args.s), _rational("--nu", args.nu),
                          _rational("--t", args.t), xs)
    except ValueError as exc:
        raise UsageError("--r" if "r " in str(exc) else "--s", str(exc)) from None


def _spec(args, params: ParamPoint, need_mu: bool = True) -> ModelSpec:
    sigma = identity(args.n)
    if args.sigma:
        try:
            sigma = parse_one_line(args.sigma)
        except ValueError as exc:
            raise UsageError("--sigma", str(exc)) from None
    mu = None
    if args.mu:
        mu = _parse_int_list("--mu", args.mu)
    elif need_mu:
        raise UsageError("--mu", "--mu is required")
    try:
        return ModelSpec(args.n, args.L, sigma, mu, params)
    except ValueError as exc:
        msg = str(exc)
        flag = "--mu" if "mu" in msg else "--sigma" if "sigma" in msg else "--x" if "spectral" in msg else "--n"
        raise UsageError(flag, msg) from None


def _check_n(args):
    if args.n is None or args.n < 1:
        raise UsageError("--n", "--n must be a positive integer")
    if args.L is None or args.L < 1:
        raise UsageError("--L", "--L must be a positive integer")


# -- pf ----------------------------------------------------------------------

def cmd_pf(args) -> int:
    _check_n(args)
    params = explicit_params(args, args.n) or random_param_point(random.Random(args.seed), args.n)
    spec = _spec(args, params)
    f = Fraction(0)
    count = 0
    for st in enumerate_states(spec):
        f += state_weight(st, spec)
        count += 1
    doc = {"f": rational_to_json(f), "stateCount": count, "spec": spec.to_json(), "seed": args.seed}
    if args.mode == "float":
        doc["fFloat"] = float_embed(f)
    _emit(args, dumps(doc))
    return EXIT_OK


# -- verify ------------------------------------------------------------------

def _suite_stochastic(n, p, seed):
    x = p.x[0]
    for kind in "GD":
        for I in cartesian(range(3), repeat=2 * n):
            for j in all_colors(n):
                yield check_vertex_stochastic(kind, I, j, x, p, seed)
    for b in all_colors(n):
        yield check_cap_stochastic(b, x, p, seed)


def _rx_point(p: ParamPoint, rng) -> ParamPoint:
    """Point with two spectral values for crossings (reuses x_1, x_2 when present)."""
    if p.n >= 2:
        return p
    return random_param_point(rng, 2)


def _suite_ybe(n, p, seed, rng, vector_cap=1):
    pr = _rx_point(p, rng)
    x, y = pr.x[0], pr.x[1]
    cols = all_colors(n)
    for family in R_FAMILIES:
        for a, b, d, e in cartesian(cols, repeat=4):
            for f in cartesian(range(vector_cap + 1), repeat=2 * n):
                c = ybe_top_vector(family, a, b, d, e, f, n)
                if c is None or max(c) > vector_cap:
                    continue
                yield check_ybe(family, x, y, (a, b, c, d, e, f), pr, n=n, seed=seed)


def _suite_reflection(n, p, seed, rng):
    pr = _rx_point(p, rng)
    for eps in cartesian(all_colors(n), repeat=4):
        yield check_reflection(pr.x[0], pr.x[1], eps, pr, n=n, seed=seed)


def _suite_thm31(n, L, p, seed):
    for mu in all_mu(n, L):
        spec = ModelSpec(n, L, identity(n), mu, p)
        if thm31_applies(spec):
            yield check_thm31(spec, seed=seed)


def _suite_thm32(n, L, p, seed):
    for sigma in all_signed_permutations(n):
        for i in range(1, n):
            if thm32_applies(sigma, i):
                for mu in all_mu(n, L):
                    yield check_thm32(ModelSpec(n, L, sigma, mu, p), i, seed=seed)


def _suite_thm33(n, L, p, seed):
    for sigma in all_signed_permutations(n):
        if thm33_applies(sigma):
            for mu in all_mu(n, L):
                yield check_thm33(ModelSpec(n, L, sigma, mu, p), seed=seed)


def _suite_eq312(n, p, seed):
    for R in range(1, n + 1):
        for e1, e2 in cartesian(all_colors(n), repeat=2):
            yield check_eq312(e1, e2, p, p.x[-1], R, seed=seed)


def _suite_hecke(n, L, p, seed):
    for sigma in all_signed_permutations(n):
        for i in range(1, n + 1):
            ok = thm32_applies(sigma, i) if i < n else thm33_applies(sigma)
            if ok:
                for mu in all_mu(n, L):
                    yield check_hecke(ModelSpec(n, L, sigma, mu, p), i, seed=seed)


def run_suite(name: str, n: int, L: int, p: ParamPoint, seed: int, rng: random.Random):
    if name == "stochastic":
        return _suite_stochastic(n, p, seed)
    if name == "ybe":
        return _suite_ybe(n, p, seed, rng)
    if name == "reflection":
        return _suite_reflection(n, p, seed, rng)
    if name == "thm31":
        return _suite_thm31(n, L, p, seed)
    if name == "thm32":
        return _suite_thm32(n, L, p, seed)
    if name == "thm33":
        return _suite_thm33(n, L, p, seed)
    if name == "eq312":
        return _suite_eq312(n, p, seed)
    if name == "hecke":
        return _suite_hecke(n, L, p, seed)
    raise UsageError("--suite", f"unknown suite {name!r}")


def _hoist_params(report: dict, points: dict):
    """Move the parameter point out of a report into the shared table, keyed by seed."""
    inst = report["instance"]
    holder = inst["spec"] if "spec" in inst else inst
    params = holder.pop("params", None)
    if params is not None:
        key = str(report["seed"])
        points.setdefault(key, params)
        holder["point"] = key


def cmd_verify(args) -> int:
    _check_n(args)
    suites = SUITES if args.suite == "all" else (args.suite,)
    fixed = explicit_params(args, args.n)
    trials = 1 if fixed is not None else args.trials
    reports = []
    points = {}
    poles = 0
    for name in suites:
        rng = random.Random(f"{args.seed}:{name}")
        for trial in range(trials):
            point_seed = rng.getrandbits(64)
            prng = random.Random(point_seed)
            if fixed is not None:
                p = fixed
            elif name == "hecke":
                p = random_real_point(prng, args.n)
            else:
                p = random_param_point(prng, args.n)
            try:
                for rep in run_suite(name, args.n, args.L, p, point_seed, prng):
                    d = rep.to_json()
                    d["suite"] = name
                    _hoist_params(d, points)
                    reports.append(d)
            except (PoleError, NegativeRadicandError, HypothesisError) as exc:
                poles += isinstance(exc, PoleError)
                reports.append({"suite": name, "verdict": "POLE" if isinstance(exc, PoleError) else "ERROR",
                                "error": str(exc), "factor": getattr(exc, "factor", None), "seed": point_seed,
                                "params": p.to_json()})
    counts = Counter(r["verdict"] for r in reports)
    summary = {"total": len(reports), "verdicts": dict(sorted(counts.items()))}
    _emit(args, dumps({"points": points, "reports": reports, "summary": summary}))
    print(f"summary: {len(reports)} reports, " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())),
          file=sys.stderr)
    if poles:
        return EXIT_POLE
    if any(r["verdict"] not in ("exact-equal", "within-tolerance") for r in reports):
        return EXIT_FAIL
    return EXIT_OK


# -- sample ------------------------------------------------------------------

def cmd_sample(args) -> int:
    if not args.assert_stochastic:
        return _error("usage", "sampling requires --assert-stochastic (weights must be probabilities)", EXIT_PARSE,
                      flag="--assert-stochastic")
    _check_n(args)
    params = explicit_params(args, args.n)
    if params is None:
        raise UsageError("--x", "sampling needs an explicit parameter point (--r --s --nu --t --x)")
    spec = _spec(args, params, need_mu=False)
    try:
        validate_regime(spec.n, spec.L, spec.sigma, params)
    except NonStochasticError as exc:
        return _error("non-stochastic", str(exc), EXIT_NONSTOCHASTIC, location=list(exc.location))
    N = args.samples
    master = random.Random(args.seed)
    hits: Counter = Counter()
    rejected = 0
    for _ in range(N):
        res = sample_state(spec.n, spec.L, spec.sigma, params, master.getrandbits(64))
        if res.rejected:
            rejected += 1
        else:
            hits[res.mu] += 1
    table = []
    if N > 0:
        for mu in all_mu(spec.n, spec.L):
            f = partition_function(spec.replace(mu=mu), "memo")
            freq = hits[mu] / N
            fv = float_embed(f)
            var = fv * (1 - fv) / N
            if var > 0:
                z = (freq - fv) / math.sqrt(var)
            else:
                z = 0.0 if freq == fv else math.inf
            table.append({"mu": list(mu), "count": hits[mu], "frequency": freq, "f": rational_to_json(f),
                          "fFloat": fv, "z": z})
    doc = {"samples": N, "seed": args.seed, "rejections": rejected,
           "rejectionRate": rejected / N if N else 0.0, "frequencies": table, "spec": spec.to_json()}
    _emit(args, dumps(doc))
    return EXIT_OK


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uturn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--L", type=int, default=None)
        sp.add_argument("--sigma", help="one-line signed permutation, e.g. 2,-1")
        sp.add_argument("--mu", help="comma list, e.g. --mu=-2,-1")
        for name in ("r", "s", "nu", "t"):
            sp.add_argument(f"--{name}", help="rational literal p/q")
        sp.add_argument("--x", help="comma list of rationals")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--mode", choices=("exact", "float"), default="exact")
        sp.add_argument("--out")

    pf = sub.add_parser("pf", help="partition function by enumeration")
    common(pf)
    pf.set_defaults(func=cmd_pf)

    ver = sub.add_parser("verify", help="run identity checks")
    common(ver)
    ver.add_argument("--suite", choices=SUITES + ("all",), default="all")
    ver.add_argument("--trials", type=int, default=1)
    ver.set_defaults(func=cmd_verify)

    sam = sub.add_parser("sample", help="forward Monte Carlo sampler")
    common(sam)
    sam.add_argument("--samples", "-N", type=int, default=1000)
    sam.add_argument("--assert-stochastic", action="store_true")
    sam.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PARSE
    try:
        return args.func(args)
    except UsageError as exc:
        return _error("usage", str(exc), EXIT_PARSE, flag=exc.flag)
    except PoleError as exc:
        return _error("pole", str(exc), EXIT_POLE, factor=exc.factor)
    except HypothesisError as exc:
        return _error("hypothesis", str(exc), EXIT_PARSE)
    except EnumerationLimitError as exc:
        return _error("limit", str(exc), EXIT_PARSE)
    except NonStochasticError as exc:
        return _error("non-stochastic", str(exc), EXIT_NONSTOCHASTIC, location=list(exc.location))


if __name__ == "__main__":
    sys.exit(main())
