"""Command-line front end.

Subcommands: validate, bne, implements, direct, truthful, verify-rp,
energy, fuzz, gen. Reports go to stdout (text by default, JSON with
`--format json`); diagnostics go to stderr. Exit codes:

    0  success (and, for the theorem-checking commands, the check holds)
    1  usage error (bad flags, unreadable input path)
    2  validation error (document fails to parse or validate)
    3  enumeration cap exceeded
    4  counterexample found (fuzz / verify-rp / truthful)
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from mechbench import reports
from mechbench.document import (
    DocumentError,
    InstanceDocument,
    instance_payload,
    parse_instance,
    parse_rational,
    serialize_instance,
)
from mechbench.energy import (
    EnergyParams,
    check_energy_condition,
    designer_preference,
    energy_matrix,
    simplified_matrix,
)
from mechbench.equilibrium import (
    DEFAULT_PROFILE_CAP,
    CapExceeded,
    enumerate_bne,
    implements,
    search_space_size,
)
from mechbench.game import STRATEGY_FORMATS
from mechbench.generate import GeneratorConfig, SplitMix64, generate_instance
from mechbench.revelation import (
    TruthfulnessCounterexample,
    as_direct,
    is_truthful_bne,
    verify_revelation_principle,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_COUNTEREXAMPLE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through our codes.
    def error(self, message):
        raise UsageError(message)


def _rational_flag(text: str):
    try:
        return parse_rational(text, "argument")
    except DocumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_format(parser):
    parser.add_argument(
        "--format", choices=("text", "json"), default="text",
        help="report format (default: text)",
    )


def _add_output(parser, help_text="write the report here instead of stdout"):
    parser.add_argument("--output", metavar="PATH", help=help_text)


def _add_cap(parser):
    parser.add_argument(
        "--max-profiles", type=int, default=DEFAULT_PROFILE_CAP, metavar="N",
        help=f"exhaustive-search cap (default: {DEFAULT_PROFILE_CAP})",
    )


def _add_generator_knobs(parser):
    parser.add_argument("--max-agents", type=int, default=3, metavar="N")
    parser.add_argument("--max-types", type=int, default=3, metavar="N")
    parser.add_argument("--max-strategies", type=int, default=3, metavar="N")
    parser.add_argument("--max-outcomes", type=int, default=4, metavar="N")
    parser.add_argument(
        "--prior-mode", choices=("independent-uniform", "random-joint"),
        default="random-joint",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="mechbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate an instance document")
    p.add_argument("--input", required=True, metavar="PATH")
    _add_format(p)
    _add_output(p)

    p = sub.add_parser("bne", help="enumerate all pure-strategy equilibria")
    p.add_argument("--input", required=True, metavar="PATH")
    _add_cap(p)
    _add_format(p)
    _add_output(p)

    p = sub.add_parser(
        "implements",
        help="check whether the mechanism implements the document's scf",
    )
    p.add_argument("--input", required=True, metavar="PATH")
    _add_cap(p)
    _add_format(p)
    _add_output(p)

    p = sub.add_parser(
        "direct",
        help="build the direct mechanism of every equilibrium, emit as documents",
    )
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument(
        "--output", metavar="DIR",
        help="directory for the emitted documents (direct-000.json, ...)",
    )
    _add_cap(p)
    _add_format(p)

    p = sub.add_parser(
        "truthful", help="check truth-telling on a direct instance (strategies = types)"
    )
    p.add_argument("--input", required=True, metavar="PATH")
    _add_format(p)
    _add_output(p)

    p = sub.add_parser(
        "verify-rp",
        help="enumerate equilibria, build each direct mechanism, verify truth-telling",
    )
    p.add_argument("--input", required=True, metavar="PATH")
    _add_cap(p)
    _add_format(p)
    _add_output(p)

    p = sub.add_parser("energy", help="energy matrices, feasibility and preferences")
    p.add_argument("--input", metavar="PATH", help="read costs/budget from a document")
    p.add_argument("--agents", type=int, metavar="I")
    p.add_argument("--ea", type=_rational_flag, metavar="R", help="action cost")
    p.add_argument("--em", type=_rational_flag, metavar="R", help="message cost")
    p.add_argument("--esend", type=_rational_flag, metavar="R", help="send cost")
    p.add_argument("--eg", type=_rational_flag, metavar="R", help="outcome-function cost")
    p.add_argument("--budget", type=_rational_flag, metavar="R", help="designer budget")
    p.add_argument("--strategy-format", choices=STRATEGY_FORMATS)
    _add_format(p)
    _add_output(p)

    p = sub.add_parser(
        "fuzz",
        help="run seeded random instances through verify-rp; fail on counterexamples",
    )
    p.add_argument("--count", type=int, default=100, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument(
        "--output", metavar="DIR", default="fuzz-failures",
        help="directory for failing documents (default: fuzz-failures)",
    )
    _add_generator_knobs(p)
    _add_cap(p)
    _add_format(p)

    p = sub.add_parser("gen", help="emit one seeded random instance document")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    _add_generator_knobs(p)
    _add_output(p, help_text="write the document here instead of stdout")

    return parser


def _load_document(path: str) -> InstanceDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def _emit(args, payload: dict, renderer, use_output: bool = True) -> None:
    # For `direct` and `fuzz`, --output names an artifact directory, not
    # the report destination; those callers pass use_output=False.
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = renderer(payload)
    output = getattr(args, "output", None) if use_output else None
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _generator_config(args, seed: int) -> GeneratorConfig:
    return GeneratorConfig(
        seed=seed,
        agents=(1, args.max_agents),
        types_per_agent=(1, args.max_types),
        strategies_per_agent=(1, args.max_strategies),
        outcomes=(2, args.max_outcomes),
        prior_mode=args.prior_mode,
    )


def _cmd_validate(args) -> int:
    try:
        _load_document(args.input)
    except DocumentError as exc:
        violations = exc.violations or [str(exc)]
        _emit(args, {"valid": False, "violations": violations}, reports.render_validate)
        return EXIT_INVALID
    _emit(args, {"valid": True, "violations": []}, reports.render_validate)
    return EXIT_OK


def _cmd_bne(args) -> int:
    doc = _load_document(args.input)
    env, mech = doc.environment, doc.mechanism
    certs = enumerate_bne(env, mech, args.max_profiles)
    payload = {
        "search_space": search_space_size(env, mech),
        "count": len(certs),
        "certificates": [reports.certificate_payload(env, c) for c in certs],
    }
    _emit(args, payload, reports.render_bne)
    return EXIT_OK


def _cmd_implements(args) -> int:
    doc = _load_document(args.input)
    if doc.scf is None:
        raise DocumentError(
            "document has no scf section, which `implements` requires"
        )
    witness = implements(doc.environment, doc.mechanism, doc.scf, args.max_profiles)
    _emit(args, reports.witness_payload(doc.environment, witness), reports.render_implements)
    return EXIT_OK


def _cmd_direct(args) -> int:
    doc = _load_document(args.input)
    env, mech = doc.environment, doc.mechanism
    rp_reports = verify_revelation_principle(env, mech, args.max_profiles)
    documents = []
    out_dir = Path(args.output) if args.output else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    for k, report in enumerate(rp_reports):
        direct_doc = InstanceDocument(
            environment=env,
            mechanism=report.direct.mechanism,
            scf=report.scf,
            energy=doc.energy,
            designer_budget=doc.designer_budget,
        )
        entry = {"index": k}
        if out_dir is not None:
            path = out_dir / f"direct-{k:03d}.json"
            path.write_text(serialize_instance(direct_doc), encoding="utf-8")
            entry["path"] = str(path)
        else:
            entry["document"] = instance_payload(direct_doc)
        documents.append(entry)
    payload = {"count": len(rp_reports), "documents": documents}
    _emit(args, payload, reports.render_direct, use_output=False)
    return EXIT_OK


def _cmd_truthful(args) -> int:
    doc = _load_document(args.input)
    env = doc.environment
    try:
        dm = as_direct(env, doc.mechanism)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    result = is_truthful_bne(env, dm)
    skipped = [
        {"agent": agent + 1, "type": t}
        for agent in range(env.agent_count)
        for t in env.type_spaces[agent]
        if env.marginal(agent, t) == 0
    ]
    if isinstance(result, TruthfulnessCounterexample):
        payload = {
            "truthful": False,
            "certificate": None,
            "counterexample": reports.counterexample_payload(result),
            "skipped_types": skipped,
        }
        _emit(args, payload, reports.render_truthful)
        return EXIT_COUNTEREXAMPLE
    payload = {
        "truthful": True,
        "certificate": reports.certificate_payload(env, result),
        "counterexample": None,
        "skipped_types": skipped,
    }
    _emit(args, payload, reports.render_truthful)
    return EXIT_OK


def _cmd_verify_rp(args) -> int:
    doc = _load_document(args.input)
    env = doc.environment
    rp_reports = verify_revelation_principle(env, doc.mechanism, args.max_profiles)
    payload = {
        "count": len(rp_reports),
        "all_hold": all(r.holds for r in rp_reports),
        "reports": [reports.revelation_report_payload(env, r) for r in rp_reports],
    }
    _emit(args, payload, reports.render_verify_rp)
    return EXIT_OK if payload["all_hold"] else EXIT_COUNTEREXAMPLE


def _cmd_energy(args) -> int:
    doc = None
    if args.input:
        doc = _load_document(args.input)

    agent_count = args.agents
    if agent_count is None and doc is not None:
        agent_count = doc.environment.agent_count
    if agent_count is None:
        raise UsageError("--agents is required when no --input document is given")
    if agent_count < 1:
        raise UsageError("--agents must be at least 1")

    base = doc.energy if doc is not None else None
    zero = Fraction(0)

    def pick(flag_value, base_value):
        if flag_value is not None:
            return flag_value
        if base_value is not None:
            return base_value
        return zero

    try:
        params = EnergyParams(
            action_cost=pick(args.ea, base.action_cost if base else None),
            message_cost=pick(args.em, base.message_cost if base else None),
            send_cost=pick(args.esend, base.send_cost if base else None),
            outcome_cost=pick(args.eg, base.outcome_cost if base else None),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    budget = args.budget
    if budget is None and doc is not None:
        budget = doc.designer_budget

    if args.strategy_format:
        formats = (args.strategy_format,)
    elif doc is not None:
        formats = (doc.mechanism.strategy_format,)
    else:
        formats = STRATEGY_FORMATS

    matrix = energy_matrix(agent_count, params)
    payload = {
        "agents": agent_count,
        "params": reports.energy_params_payload(params),
        "standard_regime": params.standard_regime,
        "matrix": reports.matrix_payload(matrix),
        "simplified": reports.matrix_payload(
            simplified_matrix(agent_count, params.action_cost)
        ),
        "feasibility": (
            [
                reports.feasibility_payload(
                    check_energy_condition(agent_count, params, fmt, budget)
                )
                for fmt in formats
            ]
            if budget is not None
            else None
        ),
        "preference": [
            reports.preference_payload(designer_preference(agent_count, params, fmt))
            for fmt in formats
        ],
    }
    _emit(args, payload, reports.render_energy)
    return EXIT_OK


def _cmd_fuzz(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    master = SplitMix64(args.seed)
    failures = []
    equilibria_checked = 0
    out_dir = Path(args.output)
    for iteration in range(args.count):
        instance_seed = master.next_u64()
        doc = generate_instance(_generator_config(args, instance_seed))
        rp_reports = verify_revelation_principle(
            doc.environment, doc.mechanism, args.max_profiles
        )
        equilibria_checked += len(rp_reports)
        if all(r.holds for r in rp_reports):
            continue
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"fail-seed{args.seed}-iter{iteration:05d}.json"
        path.write_text(serialize_instance(doc), encoding="utf-8")
        failures.append(
            {
                "iteration": iteration,
                "instance_seed": instance_seed,
                "path": str(path),
            }
        )
    payload = {
        "seed": args.seed,
        "count": args.count,
        "equilibria_checked": equilibria_checked,
        "failures": failures,
    }
    _emit(args, payload, reports.render_fuzz, use_output=False)
    return EXIT_COUNTEREXAMPLE if failures else EXIT_OK


def _cmd_gen(args) -> int:
    doc = generate_instance(_generator_config(args, args.seed))
    text = serialize_instance(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "bne": _cmd_bne,
    "implements": _cmd_implements,
    "direct": _cmd_direct,
    "truthful": _cmd_truthful,
    "verify-rp": _cmd_verify_rp,
    "energy": _cmd_energy,
    "fuzz": _cmd_fuzz,
    "gen": _cmd_gen,
}


def run_cli(argv: list[str]) -> int:
    """Parse `argv` (without the program name) and run one subcommand."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
