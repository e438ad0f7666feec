"""Command line entry point; every subcommand prints JSON on stdout."""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import classify
from .cocycle import braiding_b, q_from_omega, standard_cocycle, verify_abelian_cocycle
from .config import AUTOMORPHISMS, RunConfig, build_run_config, resolve_automorphism
from .lattice import EvenLattice, theta_series
from .liealg import conformal_weight, integrable_weights, root_datum, weyl_dim
from .orbifold import multiplier_check, prepare_run, run_orbifold
from .qseries import EtaQuotientSpec, eisenstein, eta_quotient_from_cycle_shape
from .quadform import FiniteQuadraticModule, fusion_group, isotropic_subgroups

logger = logging.getLogger(__name__)


def _parse_shape(text: str) -> dict[Fraction, int]:
    """"1:-1,5:5" -> {1: -1, 5: 5}; scales may be fractions such as 1/5."""
    shape = {}
    for item in text.split(","):
        key, sep, value = item.partition(":")
        if not sep:
            msg = f"Expected k:b pairs such as 1:-1,5:5, got {item!r}"
            raise ValueError(msg)
        shape[Fraction(key)] = int(value)
    return shape


def _parse_matrix(text: str) -> list[list[int]]:
    """A JSON matrix given inline or as a file path."""
    path = Path(text)
    raw = path.read_text(encoding="utf-8") if path.is_file() else text
    try:
        rows = json.loads(raw)
    except json.JSONDecodeError as e:
        msg = f"Gram matrix must be JSON, e.g. [[2,-1],[-1,2]]: {e}"
        raise ValueError(msg) from e
    return [[int(x) for x in row] for row in rows]


def _emit(data: Any, output: str | None = None) -> None:  # noqa: ANN401
    text = json.dumps(data, indent=2, sort_keys=True)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
        logger.info("wrote %s", output)
    else:
        print(text)


# --- subcommands -----------------------------------------------------------------------


def _cmd_qexp(args: argparse.Namespace, config: RunConfig) -> int:
    if args.kind == "eisenstein":
        series = eisenstein(args.weight, config.terms)
        data = {"kind": "eisenstein", "weight": args.weight, "series": series.to_json()}
        _emit(data, config.output)
        return 0
    shape = _parse_shape(args.shape)
    if args.kind == "shape":
        if any(k.denominator != 1 for k in shape):
            msg = "Cycle shapes take integer periods"
            raise ValueError(msg)
        spec = eta_quotient_from_cycle_shape({int(k): b for k, b in shape.items()})
    else:
        spec = EtaQuotientSpec(tuple(sorted(shape.items())))
    series = spec.expand(spec.leading_q_shift + config.terms)
    data = {
        "kind": args.kind,
        "product": spec.describe(),
        "weight": str(spec.weight),
        "series": series.to_json(),
    }
    _emit(data, config.output)
    return 0


def _cmd_fusion(args: argparse.Namespace, config: RunConfig) -> int:
    group = fusion_group(args.order, args.type)
    data = group.to_json()
    data["isotropic_subgroups"] = [
        sorted(list(x) for x in h.elements) for h in isotropic_subgroups(group)
    ]
    _emit(data, config.output)
    return 0


def _cmd_cocycle(args: argparse.Namespace, config: RunConfig) -> int:
    orders = [int(x) for x in args.group.split(",")]
    values = [Fraction(x) for x in args.q.split(",")]
    if len(values) != len(orders):
        msg = f"Need one value of q per cyclic factor, got {len(values)} for {len(orders)}"
        raise ValueError(msg)
    form = [
        [2 * values[i] if i == j else Fraction(0) for j in range(len(orders))]
        for i in range(len(orders))
    ]
    module = FiniteQuadraticModule(tuple(orders), tuple(map(tuple, form)))
    cocycle = standard_cocycle(module)
    check = verify_abelian_cocycle(cocycle)
    data = cocycle.to_json()
    data["valid"] = check.valid
    data["violation"] = check.violation
    data["q"] = {",".join(map(str, x)): str(v) for x, v in q_from_omega(cocycle).items()}
    data["B"] = [value.to_json() for _, value in sorted(braiding_b(cocycle).items())]
    _emit(data, config.output)
    return 0 if check.valid else 1


def _cmd_lie(args: argparse.Namespace, config: RunConfig) -> int:
    datum = root_datum(args.type)
    rows = [
        {
            "weight": list(lam),
            "conformal_weight": str(conformal_weight(datum, lam, args.level)),
            "dim": weyl_dim(datum, lam),
        }
        for lam in integrable_weights(datum, args.level)
    ]
    data = {
        "type": datum.label,
        "level": args.level,
        "dual_coxeter": datum.dual_coxeter,
        "dim": datum.dim,
        "weights": rows,
    }
    _emit(data, config.output)
    return 0


def _cmd_classify(args: argparse.Namespace, config: RunConfig) -> int:
    if args.action == "enumerate":
        for index, candidate in enumerate(classify.enumerate_candidates()):
            print(json.dumps({"index": index, "candidate": candidate.name, "dim": candidate.dim}))
        return 0
    if args.action == "check":
        if not args.candidate:
            msg = "classify check needs a candidate name such as 'A4,5^2'"
            raise ValueError(msg)
        verdict = classify.check_candidate(classify.parse_candidate(args.candidate), config)
        _emit(verdict.to_json(), config.output)
        return 0
    verdicts, summary = classify.run_classification(config, parallel=config.workers > 1)
    data = {
        "verdicts": [v.to_json(i) for i, v in enumerate(verdicts)],
        "summary": summary.to_json(),
        "feasible_by_dim": {str(k): v for k, v in classify.feasible_table(verdicts).items()},
    }
    _emit(data, config.output)
    return 0 if summary.matches else 1


def _cmd_orbifold(args: argparse.Namespace, config: RunConfig) -> int:
    if not config.input:
        bundled = ", ".join(AUTOMORPHISMS)
        msg = f"orbifold needs --input: a bundled name ({bundled}) or a JSON file"
        raise ValueError(msg)
    spec = resolve_automorphism(config.input)
    result = run_orbifold(spec, config.terms, seed=config.seed)
    data = result.to_json()
    if args.check_multipliers:
        run = prepare_run(spec.build(), seed=config.seed, name=spec.name)
        data["multipliers"] = multiplier_check(run, config.terms)
    _emit(data, config.output)
    return 0


def _cmd_theta(args: argparse.Namespace, config: RunConfig) -> int:
    lattice = EvenLattice(tuple(map(tuple, _parse_matrix(args.gram))), name="input")
    series = theta_series(lattice, truncation=config.terms)
    _emit({"rank": lattice.rank, "series": series.to_json()}, config.output)
    return 0


_COMMANDS = {
    "qexp": _cmd_qexp,
    "fusion": _cmd_fusion,
    "cocycle": _cmd_cocycle,
    "lie": _cmd_lie,
    "classify": _cmd_classify,
    "orbifold": _cmd_orbifold,
    "theta": _cmd_theta,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="holomorphic-orbifolds",
        description="Exact orbifold, fusion and classification data for holomorphic VOAs.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    parser.add_argument("--config", help="key = value settings file")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", dest="output", help="write JSON here instead of stdout")
    common.add_argument("--json", action="store_true", help="JSON output (the only format)")
    sub = parser.add_subparsers(dest="command", required=True)

    qexp = sub.add_parser("qexp", parents=[common], help="eta quotients and Eisenstein series")
    qexp.add_argument("kind", choices=("eta", "shape", "eisenstein"))
    qexp.add_argument("--shape", default="1:24", help="k:b pairs, e.g. 1:-1,5:5")
    qexp.add_argument("--weight", type=int, default=4)
    qexp.add_argument("--terms", type=int)

    fusion = sub.add_parser("fusion", parents=[common], help="fusion group of a cyclic orbifold")
    fusion.add_argument("--order", type=int, required=True)
    fusion.add_argument("--type", type=int, default=0)

    cocycle = sub.add_parser(
        "cocycle", parents=[common], help="standard abelian 3-cocycle of a quadratic form"
    )
    cocycle.add_argument("--group", required=True, help="cyclic orders, e.g. 5 or 2,4")
    cocycle.add_argument("--q", required=True, help="q on each cyclic generator, e.g. 1/5")

    lie = sub.add_parser("lie", parents=[common], help="integrable weights of an affine algebra")
    lie.add_argument("action", choices=("weights",))
    lie.add_argument("--type", required=True, help="e.g. A4")
    lie.add_argument("--level", type=int, required=True)

    cls = sub.add_parser(
        "classify", parents=[common], help="central charge 24 feasibility cascade"
    )
    cls.add_argument("action", choices=("enumerate", "check", "all"))
    cls.add_argument("candidate", nargs="?", help="e.g. 'A4,5^2'")
    cls.add_argument("--workers", type=int)
    cls.add_argument("--branch-budget", dest="branch_budget", type=int)
    cls.add_argument("--pivot-budget", dest="pivot_budget", type=int)
    cls.add_argument("--node-budget", dest="node_budget", type=int)
    cls.add_argument("--seed", type=int)
    cls.add_argument("--point-margin", dest="point_margin", type=int)

    orbifold = sub.add_parser(
        "orbifold", parents=[common], help="orbifold of a Niemeier lattice VOA"
    )
    orbifold.add_argument("--input", help="bundled automorphism name or JSON file")
    orbifold.add_argument("--terms", type=int)
    orbifold.add_argument("--seed", type=int)
    orbifold.add_argument("--check-multipliers", action="store_true")

    theta = sub.add_parser("theta", parents=[common], help="theta series of an even lattice")
    theta.add_argument("--gram", required=True, help="JSON matrix or a file containing one")
    theta.add_argument("--terms", type=int)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run a subcommand; 0 on success, 1 on a domain error, 2 on a usage error."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    _configure_logging(args.verbose)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    flags["verbosity"] = args.verbose
    try:
        config = build_run_config(args.command, args.config, flags)
        return _COMMANDS[args.command](args, config)
    except (ValueError, ArithmeticError, OSError) as e:
        logger.debug("%s failed", args.command, exc_info=True)
        print(json.dumps({"error": str(e), "kind": type(e).__name__}))
        return 1


def run() -> None:
    """Console script wrapper."""
    sys.exit(main())
