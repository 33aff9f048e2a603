"""Command-line front end.

Subcommands: check, stick-verify, build, tail, simulate, demo-rosenthal.
Exit codes are a stable contract: 0 for a true verdict or plain success,
1 for a false verdict, 2 for usage or input errors. Machine-readable
output (--json) renders every exact quantity as a rational string, never
as a float.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import fileio
from .core import delta, evolve
from .errors import CouplingLabError, EnumerationLimitExceeded, ParseError
from .kernels import (
    CheckReport,
    check_faithful,
    check_markovian_for,
    check_proposition_condition,
    check_strong_markovian,
    evolve_joint,
    greedy_maximal_coupling,
    independent_coupling,
    joint_delta,
    make_sticky_kernel,
    marginal_x,
    rosenthal_fixture,
)
from .simulate import Seed, estimate_stuck_event, estimate_tail
from .sticking import (
    coupling_time_tail,
    enumerate_stuck_paths,
    markov_path_distribution,
    stuck_path_distribution,
    verify_sticking,
)


def _violation_jsonable(v) -> dict:
    return {
        "row": list(v.row) if v.row is not None else None,
        "side": v.side,
        "target": v.target,
        "step": v.step,
        "expected": str(v.expected),
        "actual": str(v.actual),
    }


def _print_report(name: str, report: CheckReport, as_json: bool) -> int:
    if as_json:
        payload = {
            "check": name,
            "verdict": report.verdict,
            "violations": [_violation_jsonable(v) for v in report.violations],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"{name}: {'PASS' if report.verdict else 'FAIL'}")
        for v in report.violations:
            print(f"  {v.describe()}")
    return 0 if report.verdict else 1


def cmd_check(args) -> int:
    chain = fileio.load_chain(args.chain)
    kernel = fileio.load_kernel(args.kernel)
    if args.faithful:
        return _print_report("faithful", check_faithful(kernel, chain), args.json)
    if args.strong:
        return _print_report("strong-markovian", check_strong_markovian(kernel, chain), args.json)
    if args.markovian is not None:
        if args.horizon is None:
            raise ParseError("--markovian requires --horizon")
        joint = fileio.load_joint(args.markovian)
        report = check_markovian_for(kernel, chain, joint, args.horizon)
        return _print_report(f"markovian (horizon {args.horizon})", report, args.json)
    if args.horizon is None:
        raise ParseError("--prop1 requires --horizon")
    report = check_proposition_condition(kernel, chain, args.horizon)
    return _print_report(f"point-mass condition (horizon {args.horizon})", report, args.json)


def cmd_stick_verify(args) -> int:
    chain = fileio.load_chain(args.chain)
    kernel = fileio.load_kernel(args.kernel)
    joint = fileio.load_joint(args.joint)
    report = verify_sticking(kernel, joint, chain, args.horizon, args.limit)
    if args.json:
        payload = {
            "verdict": report.verdict,
            "discrepancies": [
                {"path": list(d.path), "stuck": str(d.stuck), "markov": str(d.markov)}
                for d in report.discrepancies
            ],
            "tail": [str(p) for p in report.tail.entries],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"sticking: {'PASS' if report.verdict else 'FAIL'}")
        if report.discrepancies:
            print("discrepancies:")
            for d in report.discrepancies:
                print(f"  path {','.join(d.path)}: stuck {d.stuck}, markov {d.markov}")
        for i, p in enumerate(report.tail.entries):
            print(f"  Pr(T>{i}) = {p}")
    return 0 if report.verdict else 1


def cmd_build(args) -> int:
    if args.construction != "sticky" and args.base is not None:
        raise ParseError("--base only applies to --construction sticky")
    chain = fileio.load_chain(args.chain)
    if args.construction == "independent":
        kernel = independent_coupling(chain)
    elif args.construction == "greedy":
        kernel = greedy_maximal_coupling(chain)
    else:
        if args.base is None:
            raise ParseError("--construction sticky requires --base KERNEL")
        base = fileio.load_kernel(args.base)
        kernel = make_sticky_kernel(base, chain)
    fileio.dump_kernel(kernel, args.out)
    print(f"wrote {args.construction} kernel to {args.out}")
    return 0


def cmd_tail(args) -> int:
    kernel = fileio.load_kernel(args.kernel)
    joint = fileio.load_joint(args.joint)
    tail = coupling_time_tail(kernel, joint, args.horizon)
    if args.json:
        print(json.dumps({"tail": [str(p) for p in tail.entries]}, indent=2))
    else:
        for i, p in enumerate(tail.entries):
            print(f"Pr(T>{i}) = {p}")
    return 0


def cmd_simulate(args) -> int:
    kernel = fileio.load_kernel(args.kernel)
    joint = fileio.load_joint(args.joint)
    seed = Seed(args.seed)
    if args.tail_step is not None:
        est = estimate_tail(kernel, joint, args.tail_step, args.samples, seed)
        exact = coupling_time_tail(kernel, joint, args.tail_step).entries[args.tail_step]
        event = {"kind": "tail", "step": args.tail_step}
        label = f"tail step {args.tail_step}"
    else:
        prefix = tuple(args.prefix.split(","))
        est = estimate_stuck_event(kernel, joint, prefix, args.samples, seed)
        try:
            law = stuck_path_distribution(kernel, joint, len(prefix) - 1, args.limit)
            exact = law.prob(prefix)
        except EnumerationLimitExceeded:
            exact = None
        event = {"kind": "prefix", "prefix": list(prefix)}
        label = f"prefix {args.prefix}"
    if args.json:
        payload = {
            "event": event,
            "estimate": est.estimate,
            "standard_error": est.standard_error,
            "samples": est.samples,
            "exact": str(exact) if exact is not None else None,
        }
        print(json.dumps(payload, indent=2))
    else:
        line = (
            f"{label}: estimate {est.estimate:.6f} +/- {est.standard_error:.6f}"
            f" (samples {est.samples})"
        )
        if exact is not None:
            line += f", exact {exact}"
        print(line)
    return 0


def cmd_demo_rosenthal(args) -> int:
    """Walk the counterexample end to end and verify every expected outcome."""
    chain, kernel, uniform_joint, skewed_joint = rosenthal_fixture()
    half, quarter, eighth = Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)
    checks: list[tuple[str, bool]] = []

    # 1. with the uniform pair start the kernel is a Markovian coupling
    invariant = evolve_joint(uniform_joint, kernel) == uniform_joint
    markovian = check_markovian_for(kernel, chain, uniform_joint, 4).verdict
    checks.append(("uniform start stays Markovian (joint law invariant)", invariant and markovian))

    # 2. the skewed start breaks Markovian evolution in one step
    skew_next = evolve_joint(skewed_joint, kernel)
    expected_next = (3 * eighth, 3 * eighth, eighth, eighth)
    x_marg = marginal_x(skew_next).probs
    report2 = check_markovian_for(kernel, chain, skewed_joint, 1)
    checks.append(
        (
            "skewed start drifts: X-marginal becomes [3/4, 1/4]",
            skew_next.probs == expected_next
            and x_marg == (Fraction(3, 4), quarter)
            and not report2.verdict,
        )
    )

    # 3. the kernel is not faithful; row (0,1) already violates the x-sum
    report3 = check_faithful(kernel, chain)
    witness = any(
        v.row == ("0", "1") and v.side == "x" and v.target == "0"
        and v.expected == half and v.actual == 0
        for v in report3.violations
    )
    checks.append(("faithfulness fails at row (0,1): x-sum 0, expected 1/2", not report3.verdict and witness))

    # 4. the point-mass restart condition fails from (0,0)
    eta1 = evolve_joint(joint_delta(chain.space, "0", "0"), kernel)
    x1 = marginal_x(eta1).probs
    target = evolve(delta(chain.space, "0"), chain).probs
    report4 = check_proposition_condition(kernel, chain, 1)
    checks.append(
        (
            "restart from (0,0) gives X-marginal [1, 0], not [1/2, 1/2]",
            eta1.probs == (half, half, Fraction(0), Fraction(0))
            and x1 == (Fraction(1), Fraction(0))
            and target == (half, half)
            and not report4.verdict,
        )
    )

    # 5. sticking fails: the stuck law puts 1/8 on path (1,0) where the chain puts 1/4
    t0_mass = Fraction(0)
    later_mass = Fraction(0)
    for path, met, p in enumerate_stuck_paths(kernel, uniform_joint, 1):
        if path == ("1", "0"):
            if met == 0:
                t0_mass += p
            else:
                later_mass += p
    stuck_p = stuck_path_distribution(kernel, uniform_joint, 1).prob(("1", "0"))
    markov_p = markov_path_distribution(marginal_x(uniform_joint), chain, 1).prob(("1", "0"))
    stick = verify_sticking(kernel, uniform_joint, chain, 1)
    checks.append(
        (
            "sticking fails: stuck 1/8 (= 1/8 + 0 over T=0 / T>0) vs markov 1/4",
            stuck_p == eighth
            and t0_mass == eighth
            and later_mass == 0
            and markov_p == quarter
            and not stick.verdict,
        )
    )

    all_hold = all(ok for _, ok in checks)
    if args.json:
        payload = {
            "checks": [{"description": d, "holds": ok} for d, ok in checks],
            "stuck_probability": str(stuck_p),
            "markov_probability": str(markov_p),
            "all_hold": all_hold,
        }
        print(json.dumps(payload, indent=2))
    else:
        print("Rosenthal two-state counterexample")
        for desc, ok in checks:
            print(f"  [{'ok' if ok else 'FAIL'}] {desc}")
        print(f"stuck Pr(Z0=1,Z1=0) = {stuck_p}, expected {markov_p}")
        print("all expected outcomes hold" if all_hold else "unexpected outcome, see above")
    return 0 if all_hold else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupling-lab",
        description="Exact construction, verification and simulation of Markov chain couplings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a coupling property checker")
    p.add_argument("chain", help="chain JSON file")
    p.add_argument("kernel", help="kernel JSON file")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--faithful", action="store_true", help="per-row sum conditions")
    mode.add_argument("--strong", action="store_true", help="point-mass marginal conditions")
    mode.add_argument("--markovian", metavar="JOINT", help="evolution from a specific joint start")
    mode.add_argument("--prop1", action="store_true", help="point-mass restart condition")
    p.add_argument("--horizon", type=int, help="steps to certify (markovian / prop1)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("stick-verify", help="compare the stuck law with the chain law")
    p.add_argument("chain")
    p.add_argument("kernel")
    p.add_argument("joint")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--limit", type=int, help="enumeration term limit")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stick_verify)

    p = sub.add_parser("build", help="construct a coupling kernel and write it")
    p.add_argument("chain")
    p.add_argument("--construction", required=True, choices=("independent", "greedy", "sticky"))
    p.add_argument("--base", help="base kernel file (sticky only)")
    p.add_argument("--out", required=True, help="output kernel file")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("tail", help="exact meeting-time tail")
    p.add_argument("kernel")
    p.add_argument("joint")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("simulate", help="Monte Carlo estimate with the exact value beside it")
    p.add_argument("kernel")
    p.add_argument("joint")
    event = p.add_mutually_exclusive_group(required=True)
    event.add_argument("--tail-step", type=int, help="estimate Pr(T > step)")
    event.add_argument("--prefix", help="comma-joined stuck path prefix, e.g. 1,0")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--limit", type=int, help="enumeration term limit for the exact column")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("demo-rosenthal", help="walk the two-state counterexample end to end")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_demo_rosenthal)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CouplingLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
