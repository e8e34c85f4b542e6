"""Command-line front end: ``theta-forge <verb> --algebra ... [options]``.

Exit codes: 0 when the computation passes, 1 on a verification failure,
2 on a usage error (bad flags, unparsable weight, violated precondition).
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import cartan, errors, jantzen, shapovalov
from .pbw import UAlgebra, algebra
from .rootdata import Weight
from .verma import partitions, singular_vectors

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- argument parsing helpers ------------------------------------------------------

def parse_weight(alg: UAlgebra, text: str) -> tuple:
    """Cartan values from one of the accepted weight syntaxes.

    ``e1=1/2,d1=-1``   coordinates in the epsilon|delta basis (missing ones are 0)
    ``h_a=1,h_b=0``    values on the simple coroots h_a, h_b, ...
    ``pairings:1,2``   (lambda + rho, alpha_i^vee) per simple root; the plain
                       pairing (lambda + rho, alpha_i) for isotropic alpha_i
    ``rho``, ``-rho``, ``0``
    """
    rs = alg.rs
    text = text.strip().replace(" ", "")
    rho = cartan.rho_values(rs)
    if text in ("0", "zero"):
        return (Fraction(0),) * rs.rank
    if text in ("rho", "-rho"):
        return tuple(-r for r in rho) if text.startswith("-") else rho
    try:
        if text.startswith("pairings:"):
            nums = [Fraction(x) for x in text[len("pairings:"):].split(",") if x]
            if len(nums) != rs.rank:
                raise UsageError(f"pairings: expected {rs.rank} values, got {len(nums)}")
            out = []
            for k, s in enumerate(rs.simple):
                nn = cartan.root_norm(rs, s.simple)
                shifted = nums[k] if nn == 0 else nums[k] * nn / 2
                out.append(shifted - rho[k])
            return tuple(out)
        pairs = [p.split("=", 1) for p in text.split(",") if p]
        if any(len(p) != 2 for p in pairs):
            raise UsageError(f"cannot parse weight {text!r}")
        keys = [k for k, _ in pairs]
        if all(k in rs.cartan_names for k in keys):
            vals = [Fraction(0)] * rs.rank
            for k, v in pairs:
                vals[rs.cartan_names.index(k)] = Fraction(v)
            return tuple(vals)
        if all(k in rs.coord_names for k in keys):
            coords = [Fraction(0)] * rs.dim
            for k, v in pairs:
                coords[rs.coord_names.index(k)] = Fraction(v)
            return rs.cartan_values(Weight(tuple(coords)))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse weight {text!r}: {exc}")
    raise UsageError(f"unknown coordinates in weight {text!r}; use {', '.join(rs.cartan_names)} "
                     f"or {', '.join(rs.coord_names)}")


def parse_eta(alg: UAlgebra, text: str) -> tuple:
    try:
        return tuple(int(x) for x in alg.rs.parse_root_coords(text))
    except errors.ThetaForgeError as exc:
        raise UsageError(str(exc))


def _algebra(text: str) -> UAlgebra:
    try:
        return algebra(text)
    except errors.UnsupportedFamily as exc:
        raise UsageError(str(exc))


def _vals_text(alg: UAlgebra, vals) -> str:
    return ", ".join(f"{n}={v}" for n, v in zip(alg.rs.cartan_names, vals))


def _vec_text(alg: UAlgebra, vec: dict) -> str:
    names = [r.name for r in alg.rs.positive]
    parts = []
    for mono, c in sorted(vec.items(), reverse=True):
        word = "".join(f"e_-({names[i]})" for i in alg.letters(mono)) or "1"
        parts.append(f"({c})*{word}")
    return " + ".join(parts) or "0"


# -- verbs ------------------------------------------------------------------------
# Each returns (passed, json_object, text_lines).

def cmd_roots(alg: UAlgebra, args):
    rs = alg.rs
    rows = [{"name": r.name, "coords": [str(c) for c in r.coords], "parity": r.parity,
             "isotropic": r.isotropic, "height": r.height} for r in rs.positive]
    obj = {"algebra": rs.spec.name, "rank": rs.rank, "simple": [s.name for s in rs.simple],
           "positive": rows, "isotropic_count": len(rs.isotropic_positive),
           "rho": [str(c) for c in rs.rho.coords]}
    lines = [f"algebra {rs.spec.name}: rank {rs.rank}, {len(rows)} positive roots, "
             f"{len(rs.isotropic_positive)} isotropic",
             "simple: " + " ".join(s.name for s in rs.simple)]
    for r in rows:
        tag = "odd isotropic" if r["isotropic"] else r["parity"]
        lines.append(f"  {r['name']:<10} ({', '.join(r['coords'])})  {tag}")
    lines.append("rho: (" + ", ".join(obj["rho"]) + ")")
    return True, obj, lines


def _theta(alg, args):
    return shapovalov.compute_shapovalov(alg, args.gamma, args.m, method=args.method, seed=args.seed)


def cmd_shapovalov(alg: UAlgebra, args):
    theta = _theta(alg, args)
    obj = theta.to_json()
    return True, obj, [f"theta[{theta.gamma.name}, m={theta.m}] on {theta.hyperplane.linear_poly(alg.ring)} = 0",
                       f"  = {theta}"]


def cmd_verify(alg: UAlgebra, args):
    theta = _theta(alg, args)
    prop = shapovalov.verify_defining_property(theta)
    deg = shapovalov.degree_report(theta)
    obj = {"gamma": theta.gamma.name, "m": theta.m, "property": prop.to_json(), "degree": deg.to_json()}
    lines = [f"defining property: {'pass' if prop.passed else 'FAIL'} ({prop.hyperplane})",
             f"degree bound: {'pass' if deg.passed else 'FAIL'}, d = {deg.d}"]
    if deg.leading_exponents:
        lines.append("leading exponents: " + ", ".join(f"{a}^{e}" for a, e in deg.leading_exponents)
                     + f", scalar {deg.leading_scalar}")
    return prop.passed and deg.passed, obj, lines


def cmd_square(alg: UAlgebra, args):
    rep = shapovalov.square_check(alg, args.gamma)
    obj = {"gamma": rep.gamma, "vanishes": rep.vanishes,
           "terms_before_reduction": rep.terms_before_reduction}
    return rep.vanishes, obj, [f"theta_{rep.gamma}(lambda-{rep.gamma}) theta_{rep.gamma}(lambda) = 0 "
                               f"on the hyperplane: {'pass' if rep.vanishes else 'FAIL'}"]


def cmd_chain(alg: UAlgebra, args):
    chain = None if args.chain is None else [int(x) for x in args.chain.split(",") if x != ""]
    rep = shapovalov.borel_chain_compare(alg, args.gamma, chain=chain, nsamples=args.samples,
                                         seed=args.seed)
    lines = [f"chain {rep.chain} through {', '.join(rep.steps) or '(none)'}",
             f"c = {rep.c}, F = {rep.F}, samples = {rep.samples}, symbolic = {rep.symbolic}",
             f"verified: {rep.verified}"]
    return rep.verified, rep.to_json(), lines


def cmd_man(alg: UAlgebra, args):
    lam = None if args.lam is None else parse_weight(alg, args.lam)
    rep = shapovalov.man_identity(alg, args.gamma, args.alpha, args.p, args.side, lam=lam,
                                  seed=args.seed)
    lines = [f"{rep.side} p={rep.p} at {_vals_text(alg, rep.values)}: {'equal' if rep.equal else 'DIFFER'}",
             f"  lhs = {_vec_text(alg, rep.lhs)}", f"  rhs = {_vec_text(alg, rep.rhs)}"]
    return rep.equal, rep.to_json(alg), lines


def _need_lambda(alg, args) -> tuple:
    if args.lam is None:
        raise UsageError("--lambda is required")
    return parse_weight(alg, args.lam)


def _xi(alg, args, X=(), purpose="filtration"):
    xi = None if args.xi is None else parse_weight(alg, args.xi)
    return jantzen.deformation_config(alg, X, xi=xi, purpose=purpose, seed=args.seed)


def cmd_jantzen_sum(alg: UAlgebra, args):
    vals = _need_lambda(alg, args)
    rep = jantzen.sum_formula_report(alg, vals, args.depth, _xi(alg, args))
    lines = [f"lambda: {_vals_text(alg, vals)}; A = {rep.A}, B = {rep.B}; xi = {_vals_text(alg, rep.cfg.xi)}",
             f"{'eta':<14}{'lhs':>5}{'rhs':>5}"]
    for r in rep.rows:
        if r.lhs or r.rhs:
            lines.append(f"{str(r.eta):<14}{r.lhs:>5}{r.rhs:>5}")
    if rep.flag:
        lines.append(f"flag: {rep.flag}")
    lines.append("sum formula: " + ("pass" if rep.passed else "FAIL"))
    return rep.passed, rep.to_json(), lines


def _roots_list(text: str | None) -> list:
    return [] if not text else [x.strip() for x in re.split(r"[;,]", text) if x.strip()]


def cmd_mx_dims(alg: UAlgebra, args):
    vals = _need_lambda(alg, args)
    X = _roots_list(args.X)
    rep = jantzen.mx_weight_dims(alg, vals, X, args.depth, _xi(alg, args, X, "mx"))
    lines = [f"X = {rep.X}; lambda: {_vals_text(alg, vals)}", f"{'eta':<14}{'dim':>5}{'p_X':>5}"]
    lines += [f"{str(e):<14}{d:>5}{p:>5}" for e, d, p in rep.rows]
    if rep.series:
        lines += [f"{k}: {v}" for k, v in rep.series.items()]
    lines.append("character: " + ("pass" if rep.passed else "FAIL"))
    return rep.passed, rep.to_json(), lines


def cmd_pig(alg: UAlgebra, args):
    X = _roots_list(args.X)
    if len(X) != 2:
        raise UsageError("pig needs --X with two roots")
    rs = alg.rs
    if args.lam is None:
        vals = shapovalov.generic_on(rs, [rs.root(x) for x in X], args.seed)
    else:
        vals = parse_weight(alg, args.lam)
    rep = jantzen.pig_check(alg, vals, X[0], X[1], args.depth, _xi(alg, args))
    lines = [f"lambda: {_vals_text(alg, vals)}", f"max valuation: {rep.max_valuation}",
             f"layers at {X[0]}+{X[1]}: {rep.profile_at_sum}, "
             f"exact valuation counts: {rep.valuation_counts_at_sum}"]
    lines += [f"  eta {row['eta']}: layers {row['layers']} sum {row['sum']} rhs {row['rhs']}"
              for row in rep.rows if not row["ok"]]
    lines.append("pig: " + ("pass" if rep.passed else "FAIL"))
    return rep.passed, rep.to_json(), lines


def cmd_oracle(alg: UAlgebra, args):
    vals = _need_lambda(alg, args)
    if args.eta is None:
        raise UsageError("--eta is required")
    eta = parse_eta(alg, args.eta)
    vecs = singular_vectors(alg, vals, eta)
    obj = {"lambda": [str(v) for v in vals], "eta": list(eta), "basis_size": len(partitions(alg, eta)),
           "singular": [[[[[i, k] for i, k in enumerate(m) if k], str(c)]
                         for m, c in sorted(v.items(), reverse=True)] for v in vecs]}
    lines = [f"{len(vecs)} singular vector(s) of weight lambda-{args.eta}"]
    lines += ["  " + _vec_text(alg, v) for v in vecs]
    return True, obj, lines


VERBS = {
    "roots": cmd_roots, "shapovalov": cmd_shapovalov, "verify": cmd_verify, "square": cmd_square,
    "chain-compare": cmd_chain, "man": cmd_man, "jantzen-sum": cmd_jantzen_sum,
    "mx-dims": cmd_mx_dims, "pig": cmd_pig, "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="theta-forge",
                                description="Shapovalov elements and Jantzen data for basic Lie superalgebras.")
    p.add_argument("verb", choices=sorted(VERBS))
    p.add_argument("--algebra", required=True, help='e.g. "sl(3)", "gl(2|2)", "osp(2|4)@anti"')
    p.add_argument("--gamma", help='positive root, e.g. "a+b" or "e1-d2"')
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--method", choices=shapovalov.METHODS, default="solve_interpolate")
    p.add_argument("--lambda", dest="lam", help='highest weight, e.g. "h_a=1", "e1=1,d1=-1", "-rho"')
    p.add_argument("--xi", help="deformation direction (same syntax as --lambda)")
    p.add_argument("--X", help='isotropic roots separated by "," or ";"')
    p.add_argument("--eta", help="weight offset in simple roots, e.g. 2a+b")
    p.add_argument("--alpha", help="even root for the man verb")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--side", choices=("pin", "pun"), default="pin")
    p.add_argument("--chain", help="comma-separated odd reflection positions")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _glue_negative_values(argv: list) -> list:
    """Let weights such as ``--lambda -rho`` through argparse."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--lambda", "--xi") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


_NEEDS_GAMMA ={"shapovalov", "verify", "square", "chain-compare", "man"}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        if args.verb in _NEEDS_GAMMA and not args.gamma:
            raise UsageError(f"{args.verb} needs --gamma")
        if args.verb == "man" and not args.alpha:
            raise UsageError("man needs --alpha")
        if args.depth < 0:
            raise UsageError("--depth must be nonnegative")
        alg = _algebra(args.algebra)
        passed, obj, lines = VERBS[args.verb](alg, args)
    except UsageError as exc:
        print(f"theta-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except errors.VerificationFailure as exc:
        _emit(args, out, {"verb": args.verb, "passed": False, "error": type(exc).__name__,
                          "message": str(exc)}, [f"FAIL: {type(exc).__name__}: {exc}"])
        return EXIT_FAIL
    except errors.ThetaForgeError as exc:
        print(f"theta-forge: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    obj = {"schema": 1, "verb": args.verb, "algebra": alg.rs.spec.name, "passed": passed, **obj}
    _emit(args, out, obj, lines)
    return EXIT_PASS if passed else EXIT_FAIL


def _emit(args, out, obj, lines):
    if args.format == "json":
        obj.setdefault("schema", 1)
        out.write(json.dumps(obj, sort_keys=True, default=str) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
