"""Command-line front end.

Exit codes: ``0`` success / ``μ ⪯ ν``; ``1`` ``μ ⋠ ν`` (or a failed property
suite); ``2`` input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import characterize as ch
from . import demos
from .exceptions import CapacityError, InputError, UnsupportedModelError
from .io import (
    Instance,
    certificate_to_doc,
    dumps,
    lw_to_doc,
    precedence_to_doc,
)
from .spacetime import MinkowskiModel
from .transport import check_precedence, lorentz_wasserstein, minimize_certificate


def _emit(doc, out) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _pair(args):
    inst = Instance.load(args.instance)
    return inst, inst.measure(args.mu), inst.measure(args.nu)


def cmd_check(args) -> int:
    inst, mu, nu = _pair(args)
    result = check_precedence(inst.model, mu, nu)
    _emit(precedence_to_doc(result), args.out)
    return 0 if result.feasible else 1


def cmd_coupling(args) -> int:
    inst, mu, nu = _pair(args)
    result = check_precedence(inst.model, mu, nu)
    doc = precedence_to_doc(result)
    if not result.feasible:
        doc = {"status": "infeasible", "coupling": None}
    _emit(doc, args.out)
    return 0 if result.feasible else 1


def cmd_certify(args) -> int:
    inst, mu, nu = _pair(args)
    result = check_precedence(inst.model, mu, nu)
    if result.feasible:
        _emit({"status": "feasible", "certificate": None}, args.out)
        return 0
    cert = minimize_certificate(inst.model, result.certificate, mu, nu)
    _emit({"status": "infeasible", "certificate": certificate_to_doc(cert)}, args.out)
    return 1


def cmd_distance(args) -> int:
    inst, mu, nu = _pair(args)
    _emit(lw_to_doc(lorentz_wasserstein(inst.model, mu, nu, args.s)), args.out)
    return 0


def equivalence_report(model, mu, nu, trials: int = 1000, seed: int = 0) -> dict:
    """Verdicts of every characterization of ``μ ⪯ ν`` plus an agreement flag."""
    flow = check_precedence(model, mu, nu)
    verdicts = {"7": "holds" if flow.feasible else "violated"}
    try:
        c5 = ch.check_condition_5(model, mu, nu)
        c4 = ch.check_condition_4(model, mu, nu)
    except CapacityError:
        for key in ("2", "4", "5", "8"):
            verdicts[key] = "skipped"
        return {"verdicts": verdicts, "agreement": True, "note": "support exceeds brute-force bound"}
    verdicts["4"], verdicts["5"] = c4.verdict, c5.verdict
    extra = [] if flow.feasible else [flow.certificate.indicator(model.n)]
    verdicts["2"] = ch.falsify_condition_2(model, mu, nu, trials, seed, functions=extra).verdict
    if isinstance(model, MinkowskiModel):
        verdicts["8"] = ch.check_condition_8_slices(model, mu, nu).verdict
    else:
        verdicts["8"] = "skipped"
    agreement = verdicts["4"] == verdicts["5"] == verdicts["7"]
    if flow.feasible:
        agreement = agreement and verdicts["2"] == "holds" and verdicts["8"] in ("holds", "skipped")
    return {"verdicts": dict(sorted(verdicts.items())), "agreement": agreement}


def cmd_equiv(args) -> int:
    inst, mu, nu = _pair(args)
    _emit(equivalence_report(inst.model, mu, nu, args.trials, args.seed), args.out)
    return 0


def cmd_ladder(args) -> int:
    inst = Instance.load(args.instance)
    _emit({"ladder": inst.model.classify_ladder().value, "n": inst.model.n}, args.out)
    return 0


def cmd_props(args) -> int:
    inst = Instance.load(args.instance)
    labels = list(inst.measures)
    report = ch.property_suite(inst.model, [inst.measures[k] for k in labels])
    doc = report.to_dict()
    for failure in doc["counterexamples"]:
        failure["measures"] = [labels[i] for i in failure["measures"]]
    doc["pass"] = report.passed
    _emit(doc, args.out)
    return 0 if report.passed else 1


def cmd_demo(args) -> int:
    if args.name == "hegerfeldt":
        inst = demos.hegerfeldt(args.leak)
    elif args.name == "geometric":
        inst = demos.geometric(args.n, args.s)
    else:
        inst = demos.diamond(args.count, args.seed)
    _emit(inst.to_doc(), args.out)
    return 0


def cmd_gen(args) -> int:
    inst = demos.generate(args.kind, args.size, args.seed, args.spatial_dim)
    _emit(inst.to_doc(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalot",
        description="Causal precedence and Lorentz-Wasserstein distance for discrete measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def pair_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--instance", required=True, help="instance JSON file")
        p.add_argument("--mu", required=True, help="label of the first measure")
        p.add_argument("--nu", required=True, help="label of the second measure")
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.set_defaults(func=func)
        return p

    pair_command("check", cmd_check, "decide mu ⪯ nu (exit 0 yes, 1 no)")
    pair_command("coupling", cmd_coupling, "print a causal coupling if one exists")
    pair_command("certify", cmd_certify, "print a minimized non-precedence certificate")
    p = pair_command("distance", cmd_distance, "Lorentz-Wasserstein distance LW_s")
    p.add_argument("--s", type=float, default=1.0, help="exponent in (0, 1] (default 1)")
    p = pair_command("equiv", cmd_equiv, "cross-check all characterizations")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    for name, func, help_text in (
        ("ladder", cmd_ladder, "classify the model on the causal ladder"),
        ("props", cmd_props, "partial-order property suite over all measures"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--instance", required=True)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("demo", help="write a demo instance")
    p.add_argument("name", choices=["hegerfeldt", "geometric", "diamond"])
    p.add_argument("--leak", default="0.01", help="hegerfeldt: leaked mass")
    p.add_argument("--n", type=int, default=10, help="geometric: number of atoms N")
    p.add_argument("--s", type=float, default=1.0, help="geometric: exponent s")
    p.add_argument("--count", type=int, default=10, help="diamond: number of events")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--kind", choices=["graph", "minkowski"], default="graph")
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--spatial-dim", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CapacityError, UnsupportedModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
