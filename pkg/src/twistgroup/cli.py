"""Command-line entry point: ``twistgroup <subcommand> [flags]``.

Every subcommand prints a JSON report ``{"command", "seed", "status",
"checks": [{check, params, status, witness?}, ...]}`` (plus ``result`` for
commands that compute something) and exits 0 when all checks pass, 1 when a
check fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import isogeny, mixed, ree, suites, suzuki
from .errors import LimitExceeded, TwistGroupError
from .linalg import Mat
from .report import Check
from .rings import ring_from_tag


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", default="0", help="seed for every random draw (default 0)")
    p.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    p.add_argument("--threads", type=int, default=1, help="worker threads for BFS closures")
    p.add_argument("--samples", type=int, default=None, help="random samples per identity")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="twistgroup", description="Suzuki-Ree groups and mixed groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suzuki", parents=[common], help="C2 relation suite, membership and mu-law")
    p.add_argument("--q", type=int, choices=[2, 8, 32], help="field size (overrides --ring)")
    p.add_argument("--ring", default="gf8")
    p.add_argument("--relations", type=int, metavar="N", help="only the relation suite, N samples")
    p.add_argument("--order", action="store_true", help="enumerate the group by BFS")
    p.add_argument("--bruhat-all", action="store_true", help="decompose every element")
    p.add_argument("--allow-large", action="store_true", help="permit the Sz(32) enumeration")
    p.add_argument("--check-element", metavar="JSON", help="membership test for one 4x4 matrix")

    p = sub.add_parser("ree", parents=[common], help="G2 relation suite, membership and mu-law")
    p.add_argument("--q", type=int, choices=[3, 27], help="field size (overrides --ring)")
    p.add_argument("--ring", default="gf27")
    p.add_argument("--relations", type=int, metavar="N", help="only the relation suite, N samples")
    p.add_argument("--order", action="store_true", help="enumerate the group by BFS (q = 3)")
    p.add_argument("--derived-order", action="store_true", help="order of the commutator subgroup (q = 3)")
    p.add_argument("--bruhat-all", action="store_true", help="decompose every element (q = 3)")
    p.add_argument("--check-element", metavar="JSON", help="membership test for one 7x7 matrix")

    p = sub.add_parser("isogeny", parents=[common], help="B_n / C_n isogenies in characteristic 2")
    p.add_argument("--n", type=int, choices=[2, 3, 4], default=2)
    p.add_argument("--ring", default="gf4")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--theta", action="store_true", help="apply theta to --element")
    mode.add_argument("--rho", action="store_true", help="apply rho to --element")
    mode.add_argument("--spin-to-vector", action="store_true", help="apply spin_to_vector to --element")
    mode.add_argument("--check-frobenius", type=int, metavar="N", help="both composites on N elements")
    mode.add_argument("--check-norm", type=int, metavar="N", help="Clifford norm and span on N elements")
    p.add_argument("--element", metavar="JSON", help="input matrix (JSON text or file)")

    p = sub.add_parser("mixed", parents=[common], help="mixed-group generators and membership")
    p.add_argument("--type", dest="kind", choices=["bc", "g2"], default="bc")
    p.add_argument("--pair", choices=["f2t2-f2t", "gf3-gf27"], default=None)
    p.add_argument("--check-element", metavar="JSON")

    p = sub.add_parser("lab", parents=[common], help="brute-force group enumeration")
    p.add_argument("--group", choices=["sz2", "sz8", "sz32", "ree3"], required=True)
    p.add_argument("--order", action="store_true")
    p.add_argument("--derived", action="store_true")
    p.add_argument("--simple-check", type=int, metavar="N", default=0)
    p.add_argument("--bruhat-census", action="store_true")
    p.add_argument("--allow-large", action="store_true", help="permit the Sz(32) enumeration")
    p.add_argument("--cache", metavar="PATH", help="write the enumerated table to PATH")

    sub.add_parser("verify-all", parents=[common], help="every battery of checks")
    return parser


def _load_matrix(text: str) -> Mat:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    return Mat.from_json(text)


def _membership(G, m: Mat) -> Check:
    try:
        G.certify(m)
    except TwistGroupError as exc:
        witness = {"error": f"{type(exc).__name__}: {exc}"}
        if getattr(exc, "entry", None) is not None:
            witness["entry"] = list(exc.entry)
        return Check("membership", {"ring": G.ring.tag}, "fail", witness)
    return Check("membership", {"ring": G.ring.tag}, "pass")


def _run_twisted(args, kind):
    tag = f"gf{args.q}" if args.q else args.ring
    R = ring_from_tag(tag)
    G = suzuki.SuzukiGroup(R) if kind == "suzuki" else ree.ReeGroup(R)
    if args.check_element:
        return [_membership(G, _load_matrix(args.check_element))], None
    derived = getattr(args, "derived_order", False)
    if args.order or args.bruhat_all or derived:
        name = ("sz" if kind == "suzuki" else "ree") + str(R.q)
        if name == "sz32" and not args.allow_large:
            raise UsageError("Sz(32) enumeration is opt-in: pass --allow-large")
        if name not in ("sz2", "sz8", "sz32", "ree3"):
            raise UsageError(f"enumeration of {name} is not supported")
        return suites.lab_report(name, order=args.order, derived=derived, census=args.bruhat_all,
                                 threads=args.threads, seed=args.seed,
                                 allow_large=getattr(args, "allow_large", False))
    suite = suzuki.suzuki_relation_suite if kind == "suzuki" else ree.ree_relation_suite
    if args.relations:
        return suite(R, samples=args.relations, seed=args.seed), None
    samples = args.samples or 100
    checks = suite(R, samples=samples, seed=args.seed)
    checks += suites.membership_check(kind, tag, samples, args.seed)
    checks += suites.mu_law_checks(kind, tag, seed=args.seed)
    return checks, None


def _run_isogeny(args):
    R = ring_from_tag(args.ring)
    maps = {"theta": isogeny.theta, "rho": isogeny.rho, "spin_to_vector": isogeny.spin_to_vector}
    for name, fn in maps.items():
        if getattr(args, name):
            if not args.element:
                raise UsageError(f"--{name.replace('_', '-')} needs --element")
            m = _load_matrix(args.element)
            params = {"ring": m.ring.tag, "shape": list(m.shape)}
            try:
                image = fn(m)
            except TwistGroupError as exc:
                return [Check(name, params, "fail", {"error": f"{type(exc).__name__}: {exc}"})], None
            return [Check(name, params, "pass")], {"image": image.to_json()}
    if args.element:
        raise UsageError("--element needs --theta, --rho or --spin-to-vector")
    if args.check_frobenius:
        return isogeny.frobenius_factorization_check(args.n, R, args.check_frobenius, args.seed), None
    if args.check_norm:
        return [isogeny.norm_and_scliff_check(args.n, R, args.check_norm, args.seed)], None
    return isogeny.isogeny_suite(args.n, R, args.samples or 100, args.seed), None


def _run_mixed(args):
    pair_name = args.pair or ("f2t2-f2t" if args.kind == "bc" else "gf3-gf27")
    pair = mixed.ring_pair(pair_name)
    if args.check_element:
        verdict = mixed.mixed_member(args.kind, _load_matrix(args.check_element), pair)
        check = Check("mixed_membership", {"type": args.kind, "pair": pair.name},
                      "pass" if verdict.member else "fail", verdict.witness())
        return [check], {"member": verdict.member}
    checks = [c for c in suites.mixed_checks(args.seed)
              if ("G2" in c.check) == (args.kind == "g2")]
    return checks, None


def _run_lab(args):
    if args.group == "sz32" and not args.allow_large:
        raise UsageError("sz32 is opt-in: pass --allow-large")
    want_any = args.order or args.derived or args.simple_check or args.bruhat_census
    return suites.lab_report(
        args.group, order=args.order or not want_any, derived=args.derived, simple=args.simple_check,
        census=args.bruhat_census, threads=args.threads, seed=args.seed,
        allow_large=args.allow_large, cache=args.cache,
    )


class UsageError(Exception):
    pass


def run(argv=None) -> tuple[int, dict, str | None]:
    """Parse ``argv`` and run it; returns (exit code, report, --json path)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("suzuki", "ree"):
            checks, result = _run_twisted(args, args.command)
        elif args.command == "isogeny":
            checks, result = _run_isogeny(args)
        elif args.command == "mixed":
            checks, result = _run_mixed(args)
        elif args.command == "lab":
            checks, result = _run_lab(args)
        else:
            checks = suites.verify_all(args.seed, args.samples or 500, args.threads)
            result = None
    except (UsageError, ValueError, KeyError, json.JSONDecodeError) as exc:
        parser.error(str(exc))
    except LimitExceeded as exc:
        report = {"command": args.command, "seed": args.seed, "status": "fail", "error": str(exc), "checks": []}
        return 1, report, args.json
    ok = all(c.ok for c in checks)
    report = {"command": args.command, "seed": args.seed, "status": "pass" if ok else "fail"}
    if result is not None:
        report["result"] = result
    report["checks"] = [c.to_json() for c in checks]
    return (0 if ok else 1), report, args.json


def main(argv=None) -> int:
    code, report, path = run(argv)
    text = json.dumps(report, indent=2, default=str)
    print(text)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
