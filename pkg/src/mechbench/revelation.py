"""Direct revelation mechanisms and constructive truthfulness checks.

Given a mechanism and one of its equilibria s*, the direct mechanism asks
every agent to announce a type and applies the original outcome function
to the equilibrium strategies those announcements would have selected:
announcements theta-hat map to g(s*_1(theta-hat_1), ..., s*_I(theta-hat_I)).
The table is total over all announcement profiles, truthful or not.

`verify_revelation_principle` runs the whole construction for every
enumerated equilibrium and checks that truth-telling is an equilibrium of
each resulting direct mechanism. On any instance this is a theorem, so a
counterexample in a report is always an artifact bug, never a discovery;
the fuzz harness persists any instance that produces one.
"""

from dataclasses import dataclass
from itertools import product

from mechbench.equilibrium import (
    BneCertificate,
    BneRejection,
    DEFAULT_PROFILE_CAP,
    enumerate_bne,
    is_bne,
)
from mechbench.game import (
    Environment,
    Mechanism,
    SocialChoiceFunction,
    StrategyProfile,
    TypeProfile,
    induced_scf,
    validate_profile,
)


class StaleBne(Exception):
    """The supplied certificate does not verify against this instance.

    Usually means the certificate was produced from a different
    environment or mechanism than the one passed in.
    """


@dataclass(frozen=True)
class DirectMechanism:
    """A mechanism whose strategies are type announcements.

    `mechanism` has each agent's strategy set equal to that agent's type
    space (same labels, same order). `source` and `source_bne` link back
    to the mechanism and equilibrium the outcome table was derived from;
    both are None for hand-built direct mechanisms.
    """

    mechanism: Mechanism
    source: Mechanism | None = None
    source_bne: BneCertificate | None = None


@dataclass(frozen=True)
class TruthfulnessCounterexample:
    """An agent type that strictly gains by announcing a different type."""

    agent: int
    type_label: str
    misreport: str


@dataclass(frozen=True)
class RevelationReport:
    """Everything produced while checking one equilibrium of one mechanism."""

    bne: BneCertificate
    scf: SocialChoiceFunction
    direct: DirectMechanism
    truthful_certificate: BneCertificate | None
    counterexample: TruthfulnessCounterexample | None
    outcome_preserved: bool
    skipped_types: tuple[tuple[int, str], ...]

    @property
    def holds(self) -> bool:
        """Truth-telling verified and the direct table reproduces the scf."""
        return self.counterexample is None and self.outcome_preserved


def truth_telling_profile(env: Environment) -> StrategyProfile:
    """The profile where every agent announces its own type."""
    return StrategyProfile(
        maps=tuple({t: t for t in space} for space in env.type_spaces)
    )


def _require_direct(env: Environment, mech: Mechanism) -> None:
    if mech.strategy_sets != env.type_spaces:
        raise ValueError(
            "not a direct mechanism: strategy sets must equal the type "
            "spaces, label for label, in the same order"
        )


def as_direct(env: Environment, mech: Mechanism) -> DirectMechanism:
    """Wrap an already-direct mechanism (strategy sets = type spaces)."""
    _require_direct(env, mech)
    return DirectMechanism(mechanism=mech)


def _direct_outcome_table(
    env: Environment, mech: Mechanism, profile: StrategyProfile
) -> dict[TypeProfile, str]:
    table: dict[TypeProfile, str] = {}
    for announced in product(*env.type_spaces):
        vector = tuple(
            profile.maps[i][announced[i]] for i in range(env.agent_count)
        )
        table[announced] = mech.outcome_fn[vector]
    return table


def build_direct(
    env: Environment, mech: Mechanism, bne: BneCertificate
) -> DirectMechanism:
    """Construct the direct mechanism induced by a verified equilibrium.

    Re-verifies the certificate first and raises StaleBne if it does not
    hold here, which catches certificates carried over from a different
    instance. The strategy format is inherited from the source mechanism:
    announcing a type is a message either way, but the designer ends up
    performing whatever the equilibrium strategies were.
    """
    if validate_profile(env, mech, bne.profile):
        raise StaleBne("certificate profile does not fit this mechanism")
    if isinstance(is_bne(env, mech, bne.profile), BneRejection):
        raise StaleBne("certificate profile is not an equilibrium here")
    return DirectMechanism(
        mechanism=Mechanism(
            strategy_sets=env.type_spaces,
            outcome_fn=_direct_outcome_table(env, mech, bne.profile),
            strategy_format=mech.strategy_format,
        ),
        source=mech,
        source_bne=bne,
    )


def is_truthful_bne(
    env: Environment, dm: DirectMechanism
) -> BneCertificate | TruthfulnessCounterexample:
    """Is announcing one's true type an equilibrium of a direct mechanism?

    Accepts iff for every agent and every positive-marginal type, the
    truthful announcement's interim expected utility weakly beats every
    alternative announcement. Returns the truth-telling certificate, or
    the first profitable misreport.
    """
    _require_direct(env, dm.mechanism)
    result = is_bne(env, dm.mechanism, truth_telling_profile(env))
    if isinstance(result, BneRejection):
        return TruthfulnessCounterexample(
            agent=result.agent,
            type_label=result.type_label,
            misreport=result.deviation,
        )
    return result


def verify_revelation_principle(
    env: Environment, mech: Mechanism, max_profiles: int = DEFAULT_PROFILE_CAP
) -> tuple[RevelationReport, ...]:
    """Run the full construction for every equilibrium of `mech`.

    For each enumerated equilibrium: record the induced choice function,
    build the direct mechanism, check truth-telling, and check that the
    truthful announcements reproduce the induced choice function
    pointwise. One report per equilibrium, in enumeration order.
    """
    reports: list[RevelationReport] = []
    for cert in enumerate_bne(env, mech, max_profiles):
        scf = induced_scf(env, mech, cert.profile)
        # The certificate was minted by enumerate_bne above, so the
        # StaleBne recheck in build_direct would be redundant work.
        dm = DirectMechanism(
            mechanism=Mechanism(
                strategy_sets=env.type_spaces,
                outcome_fn=_direct_outcome_table(env, mech, cert.profile),
                strategy_format=mech.strategy_format,
            ),
            source=mech,
            source_bne=cert,
        )
        result = is_truthful_bne(env, dm)
        if isinstance(result, TruthfulnessCounterexample):
            truthful_certificate, counterexample = None, result
        else:
            truthful_certificate, counterexample = result, None
        truthful_table = induced_scf(env, dm.mechanism, truth_telling_profile(env))
        reports.append(
            RevelationReport(
                bne=cert,
                scf=scf,
                direct=dm,
                truthful_certificate=truthful_certificate,
                counterexample=counterexample,
                outcome_preserved=truthful_table == scf,
                skipped_types=cert.skipped_slots(),
            )
        )
    return tuple(reports)
