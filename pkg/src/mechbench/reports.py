"""JSON payload builders and the matching plain-text renderers.

Every CLI subcommand builds one JSON-ready payload dict here; text mode
renders the same dict, so the two output formats always carry identical
information. Keys are inserted in a fixed order and agent numbers are
1-based in everything user-facing.
"""

import json
from fractions import Fraction

from mechbench.document import format_rational, mechanism_payload
from mechbench.energy import (
    EnergyMatrix,
    EnergyParams,
    FeasibilityVerdict,
    PreferenceReport,
)
from mechbench.equilibrium import BneCertificate, BneRejection, ImplementationWitness
from mechbench.game import Environment, SocialChoiceFunction, StrategyProfile
from mechbench.revelation import RevelationReport, TruthfulnessCounterexample


def _rational(value: Fraction | None) -> str | None:
    return None if value is None else format_rational(value)


def profile_payload(env: Environment, profile: StrategyProfile) -> list[dict]:
    return [
        {t: profile.maps[i][t] for t in env.type_spaces[i]}
        for i in range(env.agent_count)
    ]


def certificate_payload(env: Environment, cert: BneCertificate) -> dict:
    return {
        "profile": profile_payload(env, cert.profile),
        "records": [
            {
                "agent": r.agent + 1,
                "type": r.type_label,
                "chosen": r.chosen,
                "utility": _rational(r.utility),
                "best_utility": _rational(r.best_utility),
                "skipped": r.skipped,
            }
            for r in cert.records
        ],
    }


def rejection_payload(rejection: BneRejection) -> dict:
    return {
        "agent": rejection.agent + 1,
        "type": rejection.type_label,
        "deviation": rejection.deviation,
    }


def counterexample_payload(cx: TruthfulnessCounterexample) -> dict:
    return {
        "agent": cx.agent + 1,
        "type": cx.type_label,
        "misreport": cx.misreport,
    }


def scf_payload(env: Environment, scf: SocialChoiceFunction) -> dict:
    return {
        ",".join(profile): scf.table[profile] for profile in env.type_profiles()
    }


def witness_payload(env: Environment, witness: ImplementationWitness) -> dict:
    return {
        "implements": witness.implemented,
        "scf": scf_payload(env, witness.scf),
        "witnesses": [certificate_payload(env, c) for c in witness.witnesses],
    }


def revelation_report_payload(env: Environment, report: RevelationReport) -> dict:
    source = report.direct.source
    return {
        "holds": report.holds,
        "source_mechanism": {
            "strategy_format": source.strategy_format if source else None,
            "strategy_counts": [len(s) for s in source.strategy_sets] if source else None,
        },
        "bne": certificate_payload(env, report.bne),
        "scf": scf_payload(env, report.scf),
        "direct_mechanism": mechanism_payload(report.direct.mechanism),
        "truthful_certificate": (
            certificate_payload(env, report.truthful_certificate)
            if report.truthful_certificate is not None
            else None
        ),
        "counterexample": (
            counterexample_payload(report.counterexample)
            if report.counterexample is not None
            else None
        ),
        "outcome_preserved": report.outcome_preserved,
        "skipped_types": [
            {"agent": agent + 1, "type": t} for agent, t in report.skipped_types
        ],
    }


def energy_params_payload(params: EnergyParams) -> dict:
    return {
        "action": format_rational(params.action_cost),
        "message": format_rational(params.message_cost),
        "send": format_rational(params.send_cost),
        "outcome": format_rational(params.outcome_cost),
    }


def matrix_payload(matrix: EnergyMatrix) -> dict:
    def cell(c):
        return {
            "agents": format_rational(c.agents),
            "designer": format_rational(c.designer),
        }

    return {
        "agents": matrix.agent_count,
        "oral": {
            "indirect": cell(matrix.oral_indirect),
            "direct": cell(matrix.oral_direct),
        },
        "laborious": {
            "indirect": cell(matrix.laborious_indirect),
            "direct": cell(matrix.laborious_direct),
        },
    }


def feasibility_payload(verdict: FeasibilityVerdict) -> dict:
    return {
        "strategy_format": verdict.strategy_format,
        "designer_budget": format_rational(verdict.designer_budget),
        "agents_indirect_cost": format_rational(verdict.agents_indirect_cost),
        "designer_direct_cost": format_rational(verdict.designer_direct_cost),
        "covers_agents_indirect": verdict.covers_agents_indirect,
        "covers_designer_direct": verdict.covers_designer_direct,
    }


def preference_payload(report: PreferenceReport) -> dict:
    return {
        "strategy_format": report.strategy_format,
        "designer_indirect": format_rational(report.designer_indirect),
        "designer_direct": format_rational(report.designer_direct),
        "agents_indirect": format_rational(report.agents_indirect),
        "agents_direct": format_rational(report.agents_direct),
        "designer_prefers": report.designer_prefers,
        "agents_prefer": report.agents_prefer,
        "commentary": report.commentary,
    }


# ---------------------------------------------------------------------------
# Text rendering. One renderer per payload shape; all of them spell out
# every field the JSON carries.
# ---------------------------------------------------------------------------


def _cert_lines(payload: dict, indent: str = "  ") -> list[str]:
    lines = []
    for record in payload["records"]:
        if record["skipped"]:
            lines.append(
                f"{indent}agent {record['agent']} type {record['type']}: "
                f"plays {record['chosen']} (skipped: zero-marginal type)"
            )
        else:
            lines.append(
                f"{indent}agent {record['agent']} type {record['type']}: "
                f"plays {record['chosen']} "
                f"(utility {record['utility']}, best {record['best_utility']})"
            )
    return lines


def _scf_line(payload: dict) -> str:
    return "; ".join(f"{k} -> {v}" for k, v in payload.items())


def render_validate(payload: dict) -> str:
    if payload["valid"]:
        return "valid\n"
    lines = ["invalid"] + [f"  - {v}" for v in payload["violations"]]
    return "\n".join(lines) + "\n"


def render_bne(payload: dict) -> str:
    lines = [
        f"profile space: {payload['search_space']}",
        f"equilibria found: {payload['count']}",
    ]
    for k, cert in enumerate(payload["certificates"], start=1):
        lines.append(f"equilibrium {k}:")
        lines += _cert_lines(cert)
    return "\n".join(lines) + "\n"


def render_implements(payload: dict) -> str:
    lines = [
        f"scf: {_scf_line(payload['scf'])}",
        f"implements: {'yes' if payload['implements'] else 'no'}",
        f"witnesses: {len(payload['witnesses'])}",
    ]
    for k, cert in enumerate(payload["witnesses"], start=1):
        lines.append(f"witness {k}:")
        lines += _cert_lines(cert)
    return "\n".join(lines) + "\n"


def render_direct(payload: dict) -> str:
    lines = [f"equilibria found: {payload['count']}"]
    for entry in payload["documents"]:
        where = entry.get("path")
        if where:
            lines.append(f"direct mechanism {entry['index']}: written to {where}")
        else:
            lines.append(f"direct mechanism {entry['index']}:")
            lines.append(json.dumps(entry["document"], indent=2))
    return "\n".join(lines) + "\n"


def render_truthful(payload: dict) -> str:
    lines = [f"truthful: {'yes' if payload['truthful'] else 'no'}"]
    if payload["certificate"] is not None:
        lines.append("truth-telling certificate:")
        lines += _cert_lines(payload["certificate"])
    if payload["counterexample"] is not None:
        cx = payload["counterexample"]
        lines.append(
            f"counterexample: agent {cx['agent']} of type {cx['type']} "
            f"gains by announcing {cx['misreport']}"
        )
    if payload["skipped_types"]:
        skipped = ", ".join(
            f"agent {s['agent']} type {s['type']}" for s in payload["skipped_types"]
        )
        lines.append(f"skipped zero-marginal types: {skipped}")
    return "\n".join(lines) + "\n"


def render_verify_rp(payload: dict) -> str:
    lines = [
        f"equilibria checked: {payload['count']}",
        f"all reports hold: {'yes' if payload['all_hold'] else 'no'}",
    ]
    for k, report in enumerate(payload["reports"], start=1):
        lines.append(
            f"report {k}: {'holds' if report['holds'] else 'FAILS'}"
        )
        src = report["source_mechanism"]
        lines.append(
            f"  source mechanism: {src['strategy_format']} with strategy "
            f"counts {src['strategy_counts']}"
        )
        lines.append("  equilibrium:")
        lines += _cert_lines(report["bne"], indent="    ")
        lines.append(f"  induced scf: {_scf_line(report['scf'])}")
        direct_fn = report["direct_mechanism"]["outcome_fn"]
        lines.append(f"  direct outcome table: {_scf_line(direct_fn)}")
        if report["truthful_certificate"] is not None:
            lines.append("  truth-telling verified:")
            lines += _cert_lines(report["truthful_certificate"], indent="    ")
        if report["counterexample"] is not None:
            cx = report["counterexample"]
            lines.append(
                f"  counterexample: agent {cx['agent']} of type {cx['type']} "
                f"gains by announcing {cx['misreport']}"
            )
        lines.append(
            f"  outcome table preserved: "
            f"{'yes' if report['outcome_preserved'] else 'no'}"
        )
        if report["skipped_types"]:
            skipped = ", ".join(
                f"agent {s['agent']} type {s['type']}"
                for s in report["skipped_types"]
            )
            lines.append(f"  skipped zero-marginal types: {skipped}")
    return "\n".join(lines) + "\n"


def _matrix_lines(payload: dict, title: str) -> list[str]:
    def fmt(cell):
        return f"[{cell['agents']}, {cell['designer']}]"

    rows = [
        ("oral", payload["oral"]),
        ("laborious", payload["laborious"]),
    ]
    lines = [f"{title} (agents {payload['agents']}; cells are [agents, designer]):"]
    width = max(len(fmt(row["indirect"])) for _, row in rows)
    for name, row in rows:
        lines.append(
            f"  {name:<10} indirect {fmt(row['indirect']):<{width}}  "
            f"direct {fmt(row['direct'])}"
        )
    return lines


def render_energy(payload: dict) -> str:
    p = payload["params"]
    lines = [
        f"agents: {payload['agents']}",
        (
            f"costs: action {p['action']}, message {p['message']}, "
            f"send {p['send']}, outcome {p['outcome']}"
        ),
        f"standard regime (action > message): "
        f"{'yes' if payload['standard_regime'] else 'no'}",
    ]
    lines += _matrix_lines(payload["matrix"], "energy matrix")
    lines += _matrix_lines(payload["simplified"], "simplified matrix (action cost only)")
    for verdict in payload.get("feasibility") or []:
        lines.append(f"feasibility ({verdict['strategy_format']}):")
        lines.append(f"  designer budget: {verdict['designer_budget']}")
        lines.append(
            f"  covers agents' indirect cost {verdict['agents_indirect_cost']}: "
            f"{'yes' if verdict['covers_agents_indirect'] else 'no'}"
        )
        lines.append(
            f"  covers designer's direct cost {verdict['designer_direct_cost']}: "
            f"{'yes' if verdict['covers_designer_direct'] else 'no'}"
        )
    for pref in payload["preference"]:
        lines.append(f"preference ({pref['strategy_format']}):")
        lines.append(
            f"  designer: indirect {pref['designer_indirect']} vs direct "
            f"{pref['designer_direct']} -> prefers {pref['designer_prefers']}"
        )
        lines.append(
            f"  agents:   indirect {pref['agents_indirect']} vs direct "
            f"{pref['agents_direct']} -> prefer {pref['agents_prefer']}"
        )
        lines.append(f"  commentary: {pref['commentary']}")
    return "\n".join(lines) + "\n"


def render_fuzz(payload: dict) -> str:
    lines = [
        f"seed: {payload['seed']}",
        f"instances run: {payload['count']}",
        f"equilibria checked: {payload['equilibria_checked']}",
        f"failures: {len(payload['failures'])}",
    ]
    for failure in payload["failures"]:
        lines.append(
            f"  iteration {failure['iteration']} "
            f"(instance seed {failure['instance_seed']}): {failure['path']}"
        )
    return "\n".join(lines) + "\n"
