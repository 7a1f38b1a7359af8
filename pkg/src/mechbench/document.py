"""The instance document: a JSON wire format for whole problem instances.

One document carries an environment and a mechanism, optionally a social
choice function, energy costs and a designer budget. Design constraints:

* Exact numbers. Every rational is written as "p/q" text (integers may
  be written without the denominator). Float literals are rejected so
  no value can lose precision on the way in.
* Canonical orderings. The arrays for types, strategies and outcomes
  define the iteration order used everywhere else, so the same document
  always produces the same reports.
* Stable round trips. parse -> serialize -> parse is the identity, and
  serializing a parsed document twice yields identical bytes.

Type profiles and joint strategies appear as object keys with the labels
joined by commas ("L,h" is the profile (L, h)); labels therefore must not
contain commas, which parsing enforces. The format version tag is
"mechbench/1".
"""

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from mechbench.energy import EnergyParams
from mechbench.game import (
    Environment,
    Mechanism,
    SocialChoiceFunction,
    validate_environment,
    validate_mechanism,
    validate_scf,
)

FORMAT_VERSION = "mechbench/1"

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")

_TOP_KEYS = ("format", "environment", "mechanism", "scf", "energy", "designer_budget")
_ENV_KEYS = ("types", "outcomes", "prior", "utilities")
_MECH_KEYS = ("strategy_format", "strategies", "outcome_fn")
_ENERGY_KEYS = ("action", "message", "send", "outcome")


class DocumentError(Exception):
    """A document failed to parse or validate.

    `violations` lists every named problem when validation (rather than
    syntax) is at fault; for syntax errors it is empty.
    """

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = violations or []


@dataclass(frozen=True)
class InstanceDocument:
    """A parsed, validated problem instance."""

    environment: Environment
    mechanism: Mechanism
    scf: SocialChoiceFunction | None = None
    energy: EnergyParams | None = None
    designer_budget: Fraction | None = None


def parse_rational(value, path: str = "value") -> Fraction:
    """Parse "p/q" text (or an exact JSON integer) into a Fraction."""
    if isinstance(value, bool):
        raise DocumentError(f"{path}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise DocumentError(
            f"{path}: float literals are not allowed; write the exact "
            f'rational as "p/q" text'
        )
    if not isinstance(value, str) or not _RATIONAL_RE.match(value):
        raise DocumentError(
            f'{path}: expected a rational like "3" or "-1/2", got {value!r}'
        )
    if "/" in value:
        num, den = value.split("/")
        if int(den) == 0:
            raise DocumentError(f"{path}: zero denominator in {value!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(value))


def format_rational(value: Fraction) -> str:
    return str(value)


def _expect_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise DocumentError(f"{path}: expected an object")
    return value


def _expect_array(value, path: str) -> list:
    if not isinstance(value, list):
        raise DocumentError(f"{path}: expected an array")
    return value


def _reject_unknown_keys(obj: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise DocumentError(f"{path}: unknown key {key!r}")


def _label_list(value, path: str) -> tuple[str, ...]:
    items = _expect_array(value, path)
    labels = []
    for k, item in enumerate(items):
        if not isinstance(item, str) or not item:
            raise DocumentError(f"{path}[{k}]: labels must be nonempty strings")
        if "," in item:
            raise DocumentError(
                f"{path}[{k}]: label {item!r} contains a comma, which is "
                f"reserved as the profile-key separator"
            )
        labels.append(item)
    return tuple(labels)


def _profile_key(labels: tuple[str, ...]) -> str:
    return ",".join(labels)


def _split_key(key: str) -> tuple[str, ...]:
    return tuple(key.split(","))


def _parse_environment(obj, path: str) -> Environment:
    section = _expect_object(obj, path)
    _reject_unknown_keys(section, _ENV_KEYS, path)
    for key in _ENV_KEYS:
        if key not in section:
            raise DocumentError(f"{path}: missing key {key!r}")

    spaces = _expect_array(section["types"], f"{path}.types")
    type_spaces = tuple(
        _label_list(space, f"{path}.types[{i}]") for i, space in enumerate(spaces)
    )
    if not type_spaces:
        raise DocumentError(f"{path}.types: at least one agent is required")
    outcomes = _label_list(section["outcomes"], f"{path}.outcomes")

    prior_obj = _expect_object(section["prior"], f"{path}.prior")
    prior = {
        _split_key(key): parse_rational(value, f"{path}.prior[{key!r}]")
        for key, value in prior_obj.items()
    }

    tables_arr = _expect_array(section["utilities"], f"{path}.utilities")
    if len(tables_arr) != len(type_spaces):
        raise DocumentError(
            f"{path}.utilities: expected one table per agent "
            f"({len(type_spaces)}), found {len(tables_arr)}"
        )
    utilities = []
    for i, table_obj in enumerate(tables_arr):
        table_path = f"{path}.utilities[{i}]"
        table_obj = _expect_object(table_obj, table_path)
        table = {}
        for outcome, per_type in table_obj.items():
            per_type = _expect_object(per_type, f"{table_path}.{outcome}")
            for type_label, value in per_type.items():
                table[(outcome, type_label)] = parse_rational(
                    value, f"{table_path}.{outcome}.{type_label}"
                )
        utilities.append(table)

    return Environment(
        type_spaces=type_spaces,
        prior=prior,
        outcomes=outcomes,
        utilities=tuple(utilities),
    )


def _parse_mechanism(obj, path: str) -> Mechanism:
    section = _expect_object(obj, path)
    _reject_unknown_keys(section, _MECH_KEYS, path)
    for key in _MECH_KEYS:
        if key not in section:
            raise DocumentError(f"{path}: missing key {key!r}")

    sets = _expect_array(section["strategies"], f"{path}.strategies")
    strategy_sets = tuple(
        _label_list(s, f"{path}.strategies[{i}]") for i, s in enumerate(sets)
    )
    outcome_obj = _expect_object(section["outcome_fn"], f"{path}.outcome_fn")
    outcome_fn = {}
    for key, value in outcome_obj.items():
        if not isinstance(value, str):
            raise DocumentError(
                f"{path}.outcome_fn[{key!r}]: expected an outcome label"
            )
        outcome_fn[_split_key(key)] = value
    strategy_format = section["strategy_format"]
    if not isinstance(strategy_format, str):
        raise DocumentError(f"{path}.strategy_format: expected a string")
    return Mechanism(
        strategy_sets=strategy_sets,
        outcome_fn=outcome_fn,
        strategy_format=strategy_format,
    )


def _parse_scf(obj, path: str) -> SocialChoiceFunction:
    section = _expect_object(obj, path)
    table = {}
    for key, value in section.items():
        if not isinstance(value, str):
            raise DocumentError(f"{path}[{key!r}]: expected an outcome label")
        table[_split_key(key)] = value
    return SocialChoiceFunction(table=table)


def _parse_energy(obj, path: str) -> tuple[EnergyParams | None, list[str]]:
    section = _expect_object(obj, path)
    _reject_unknown_keys(section, _ENERGY_KEYS, path)
    values = {}
    violations = []
    for key in _ENERGY_KEYS:
        if key not in section:
            raise DocumentError(f"{path}: missing key {key!r}")
        values[key] = parse_rational(section[key], f"{path}.{key}")
        if values[key] < 0:
            violations.append(f"{path}.{key} must be nonnegative, got {values[key]}")
    if violations:
        return None, violations
    return (
        EnergyParams(
            action_cost=values["action"],
            message_cost=values["message"],
            send_cost=values["send"],
            outcome_cost=values["outcome"],
        ),
        [],
    )


def parse_instance(text: str) -> InstanceDocument:
    """Parse and fully validate an instance document.

    Raises DocumentError for JSON syntax problems (with the decoder's
    line/column context), for structural problems (with the offending
    field's path), and for semantic validation failures (with the
    complete violation list).
    """
    if not text.strip():
        raise DocumentError("syntax error: empty input")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"syntax error: {exc}") from exc

    data = _expect_object(data, "document")
    _reject_unknown_keys(data, _TOP_KEYS, "document")
    version = data.get("format")
    if version != FORMAT_VERSION:
        raise DocumentError(
            f"unknown format version {version!r}; expected {FORMAT_VERSION!r}"
        )
    if "environment" not in data:
        raise DocumentError("document: missing key 'environment'")
    if "mechanism" not in data:
        raise DocumentError("document: missing key 'mechanism'")

    env = _parse_environment(data["environment"], "environment")
    mech = _parse_mechanism(data["mechanism"], "mechanism")
    scf = _parse_scf(data["scf"], "scf") if "scf" in data else None

    violations = validate_environment(env)
    violations += validate_mechanism(env, mech)
    if scf is not None:
        violations += validate_scf(env, scf)

    energy = None
    if "energy" in data:
        energy, energy_violations = _parse_energy(data["energy"], "energy")
        violations += energy_violations

    budget = None
    if "designer_budget" in data:
        budget = parse_rational(data["designer_budget"], "designer_budget")
        if budget < 0:
            violations.append(f"designer_budget must be nonnegative, got {budget}")

    if violations:
        raise DocumentError(
            "instance failed validation: " + "; ".join(violations), violations
        )
    return InstanceDocument(
        environment=env,
        mechanism=mech,
        scf=scf,
        energy=energy,
        designer_budget=budget,
    )


def environment_payload(env: Environment) -> dict:
    return {
        "types": [list(space) for space in env.type_spaces],
        "outcomes": list(env.outcomes),
        "prior": {
            _profile_key(profile): format_rational(env.prior[profile])
            for profile in env.type_profiles()
        },
        "utilities": [
            {
                outcome: {
                    t: format_rational(env.utilities[i][(outcome, t)])
                    for t in env.type_spaces[i]
                }
                for outcome in env.outcomes
            }
            for i in range(env.agent_count)
        ],
    }


def mechanism_payload(mech: Mechanism) -> dict:
    return {
        "strategy_format": mech.strategy_format,
        "strategies": [list(s) for s in mech.strategy_sets],
        "outcome_fn": {
            _profile_key(vector): mech.outcome_fn[vector]
            for vector in mech.strategy_vectors()
        },
    }


def instance_payload(doc: InstanceDocument) -> dict:
    """The document as a JSON-ready object, in canonical key order."""
    env = doc.environment
    payload = {
        "format": FORMAT_VERSION,
        "environment": environment_payload(env),
        "mechanism": mechanism_payload(doc.mechanism),
    }
    if doc.scf is not None:
        payload["scf"] = {
            _profile_key(profile): doc.scf.table[profile]
            for profile in env.type_profiles()
        }
    if doc.energy is not None:
        payload["energy"] = {
            "action": format_rational(doc.energy.action_cost),
            "message": format_rational(doc.energy.message_cost),
            "send": format_rational(doc.energy.send_cost),
            "outcome": format_rational(doc.energy.outcome_cost),
        }
    if doc.designer_budget is not None:
        payload["designer_budget"] = format_rational(doc.designer_budget)
    return payload


def serialize_instance(doc: InstanceDocument) -> str:
    return json.dumps(instance_payload(doc), indent=2) + "\n"
