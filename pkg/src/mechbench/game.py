"""Finite Bayesian collective-choice environments and mechanisms.

Everything here is exact: probabilities and utilities are
`fractions.Fraction` values, so the equilibrium machinery built on top
compares rationals, never floats, and weak inequalities cannot be decided
by rounding noise.

The model: I agents, each privately observing a type from a finite,
ordered per-agent type space; a joint prior given as a mass table over
full type profiles (correlation allowed); a finite ordered outcome set;
and per-agent utilities u_i(outcome, own type). A mechanism gives each
agent a finite ordered strategy set and maps every joint strategy to an
outcome. A social choice function maps type profiles to outcomes
directly.

All collections keep the caller's declared order, so iteration and
reports are deterministic. Instances are frozen and never mutated after
validation; every function in this module is pure.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping

TypeProfile = tuple[str, ...]
StrategyVector = tuple[str, ...]

STRATEGY_FORMATS = ("oral", "laborious")

ONE = Fraction(1)
ZERO = Fraction(0)


class ZeroMarginal(Exception):
    """Raised when conditioning on a type whose marginal probability is 0.

    Such a type can never occur; callers that check per-type constraints
    skip it and record the skip instead of treating this as a failure.
    """

    def __init__(self, agent: int, type_label: str):
        super().__init__(
            f"type {type_label!r} of agent {agent + 1} has zero marginal probability"
        )
        self.agent = agent
        self.type_label = type_label


@dataclass(frozen=True)
class Environment:
    """The uncertainty structure shared by every agent.

    type_spaces: one ordered tuple of type labels per agent (agent count
        is its length).
    prior: mass of each full type profile; must be nonnegative and sum
        to exactly 1 over the product of the type spaces.
    outcomes: ordered tuple of outcome labels.
    utilities: per agent, a table (outcome label, own type label) -> value.
    """

    type_spaces: tuple[tuple[str, ...], ...]
    prior: Mapping[TypeProfile, Fraction]
    outcomes: tuple[str, ...]
    utilities: tuple[Mapping[tuple[str, str], Fraction], ...]

    @property
    def agent_count(self) -> int:
        return len(self.type_spaces)

    def type_profiles(self) -> Iterator[TypeProfile]:
        """All full type profiles in declared (lexicographic) order."""
        return product(*self.type_spaces)

    def marginal(self, agent: int, type_label: str) -> Fraction:
        """Marginal probability that `agent` is of type `type_label`."""
        total = ZERO
        for profile in self.type_profiles():
            if profile[agent] == type_label:
                total += self.prior.get(profile, ZERO)
        return total

    def utility(self, agent: int, outcome: str, type_label: str) -> Fraction:
        return self.utilities[agent][(outcome, type_label)]


@dataclass(frozen=True)
class Mechanism:
    """Per-agent strategy sets plus an outcome function over joint strategies.

    strategy_format distinguishes how strategies are physically carried
    out: "oral" strategies are messages (plans of action), "laborious"
    ones are actions. The distinction does not affect play, only the
    energy accounting in `mechbench.energy`.
    """

    strategy_sets: tuple[tuple[str, ...], ...]
    outcome_fn: Mapping[StrategyVector, str]
    strategy_format: str

    def strategy_vectors(self) -> Iterator[StrategyVector]:
        return product(*self.strategy_sets)


@dataclass(frozen=True)
class SocialChoiceFunction:
    """A total map from full type profiles to outcomes."""

    table: Mapping[TypeProfile, str]


@dataclass(frozen=True)
class StrategyProfile:
    """One total map per agent from that agent's types to its strategies."""

    maps: tuple[Mapping[str, str], ...]

    def strategy(self, agent: int, type_label: str) -> str:
        return self.maps[agent][type_label]


def validate_environment(env: Environment) -> list[str]:
    """Check every Environment invariant; return the violations found.

    An empty list means the environment is valid. Violations are plain
    strings naming the offending entry, produced in a fixed order
    (structure, prior completeness, prior values, prior sum, utilities),
    so repeated runs yield identical lists. Agent numbers in messages are
    1-based.
    """
    violations: list[str] = []

    if not env.type_spaces:
        violations.append("environment has no agents")
        return violations
    for i, space in enumerate(env.type_spaces):
        if not space:
            violations.append(f"agent {i + 1} has an empty type space")
        if len(set(space)) != len(space):
            violations.append(f"agent {i + 1} has duplicate type labels")
    if not env.outcomes:
        violations.append("outcome set is empty")
    if len(set(env.outcomes)) != len(env.outcomes):
        violations.append("duplicate outcome labels")
    if len(env.utilities) != env.agent_count:
        violations.append(
            f"expected {env.agent_count} utility tables, found {len(env.utilities)}"
        )
    if violations:
        # Table checks below assume the structure is sound.
        return violations

    profiles = list(env.type_profiles())
    profile_set = set(profiles)
    for profile in profiles:
        if profile not in env.prior:
            violations.append(
                f"missing prior entry for type profile ({', '.join(profile)})"
            )
    for key in env.prior:
        if key not in profile_set:
            violations.append(
                f"prior entry ({', '.join(key)}) does not name a type profile"
            )
    for profile in profiles:
        p = env.prior.get(profile)
        if p is not None and p < 0:
            violations.append(
                f"negative probability {p} for type profile ({', '.join(profile)})"
            )
    if all(profile in env.prior for profile in profiles):
        total = sum((env.prior[profile] for profile in profiles), ZERO)
        if total != 1:
            violations.append(f"prior sums to {total}")

    for i, table in enumerate(env.utilities):
        valid_keys = set()
        for outcome in env.outcomes:
            for type_label in env.type_spaces[i]:
                valid_keys.add((outcome, type_label))
                if (outcome, type_label) not in table:
                    violations.append(
                        f"agent {i + 1} is missing a utility entry for "
                        f"outcome {outcome!r}, type {type_label!r}"
                    )
        for key in table:
            if key not in valid_keys:
                violations.append(
                    f"agent {i + 1} has a utility entry for unknown pair {key!r}"
                )

    return violations


def validate_mechanism(env: Environment, mech: Mechanism) -> list[str]:
    """Check a mechanism against its environment; return violations."""
    violations: list[str] = []

    if mech.strategy_format not in STRATEGY_FORMATS:
        violations.append(
            f"strategy_format must be one of {STRATEGY_FORMATS}, "
            f"got {mech.strategy_format!r}"
        )
    if len(mech.strategy_sets) != env.agent_count:
        violations.append(
            f"expected {env.agent_count} strategy sets, found {len(mech.strategy_sets)}"
        )
        return violations
    for i, strategies in enumerate(mech.strategy_sets):
        if not strategies:
            violations.append(f"agent {i + 1} has an empty strategy set")
        if len(set(strategies)) != len(strategies):
            violations.append(f"agent {i + 1} has duplicate strategy labels")
    if any("empty strategy set" in v or "duplicate strategy" in v for v in violations):
        return violations

    vectors = list(mech.strategy_vectors())
    vector_set = set(vectors)
    outcome_set = set(env.outcomes)
    for vector in vectors:
        outcome = mech.outcome_fn.get(vector)
        if outcome is None:
            violations.append(
                f"outcome function is missing an entry for strategies "
                f"({', '.join(vector)})"
            )
        elif outcome not in outcome_set:
            violations.append(
                f"outcome function maps ({', '.join(vector)}) to unknown "
                f"outcome {outcome!r}"
            )
    for key in mech.outcome_fn:
        if key not in vector_set:
            violations.append(
                f"outcome function entry ({', '.join(key)}) does not name a "
                f"joint strategy"
            )
    return violations


def validate_scf(env: Environment, scf: SocialChoiceFunction) -> list[str]:
    """Check a social choice function against its environment."""
    violations: list[str] = []
    profiles = list(env.type_profiles())
    profile_set = set(profiles)
    outcome_set = set(env.outcomes)
    for profile in profiles:
        outcome = scf.table.get(profile)
        if outcome is None:
            violations.append(
                f"social choice function is missing an entry for type profile "
                f"({', '.join(profile)})"
            )
        elif outcome not in outcome_set:
            violations.append(
                f"social choice function maps ({', '.join(profile)}) to unknown "
                f"outcome {outcome!r}"
            )
    for key in scf.table:
        if key not in profile_set:
            violations.append(
                f"social choice function entry ({', '.join(key)}) does not "
                f"name a type profile"
            )
    return violations


def validate_profile(env: Environment, mech: Mechanism, profile: StrategyProfile) -> list[str]:
    """Check that a strategy profile is total and within the strategy sets."""
    violations: list[str] = []
    if len(profile.maps) != env.agent_count:
        violations.append(
            f"expected {env.agent_count} strategy maps, found {len(profile.maps)}"
        )
        return violations
    for i, mapping in enumerate(profile.maps):
        allowed = set(mech.strategy_sets[i])
        for type_label in env.type_spaces[i]:
            strategy = mapping.get(type_label)
            if strategy is None:
                violations.append(
                    f"agent {i + 1} has no strategy for type {type_label!r}"
                )
            elif strategy not in allowed:
                violations.append(
                    f"agent {i + 1} plays unknown strategy {strategy!r} "
                    f"for type {type_label!r}"
                )
        for type_label in mapping:
            if type_label not in env.type_spaces[i]:
                violations.append(
                    f"agent {i + 1} maps unknown type {type_label!r}"
                )
    return violations


def conditional_prior(
    env: Environment, agent: int, type_label: str
) -> dict[TypeProfile, Fraction]:
    """Distribution of the other agents' types given one agent's own type.

    Returns a complete table over the product of the other agents' type
    spaces (agent order preserved, the conditioning agent removed); its
    values sum to exactly 1. For a single-agent environment the table is
    the unit mass on the empty profile.

    Raises ZeroMarginal when the conditioning type has marginal
    probability 0, since the conditional is then undefined.
    """
    marginal = env.marginal(agent, type_label)
    if marginal == 0:
        raise ZeroMarginal(agent, type_label)

    other_spaces = [
        space for j, space in enumerate(env.type_spaces) if j != agent
    ]
    table: dict[TypeProfile, Fraction] = {}
    for others in product(*other_spaces):
        full = others[:agent] + (type_label,) + others[agent:]
        table[others] = env.prior.get(full, ZERO) / marginal
    return table


def induced_scf(
    env: Environment, mech: Mechanism, profile: StrategyProfile
) -> SocialChoiceFunction:
    """The social choice function a strategy profile induces through g.

    Maps every full type profile to the outcome of the joint strategy the
    profile selects there; total over the type-profile product by
    construction.
    """
    bad = validate_profile(env, mech, profile)
    if bad:
        raise ValueError("; ".join(bad))
    table: dict[TypeProfile, str] = {}
    for theta in env.type_profiles():
        vector = tuple(profile.maps[i][theta[i]] for i in range(env.agent_count))
        table[theta] = mech.outcome_fn[vector]
    return SocialChoiceFunction(table=table)
