"""Energy bookkeeping for mechanisms and their direct counterparts.

Four abstract nonnegative costs drive everything (units are arbitrary;
reports call them joules):

* action_cost: one agent performing one physical action,
* message_cost: one agent selecting one message (a plan of action),
* send_cost: sending one message to the designer,
* outcome_cost: one execution of the outcome function.

Running the indirect mechanism, each agent chooses and transmits its own
strategy; in the direct mechanism agents merely announce types while the
designer reconstructs the equilibrium strategies, which shifts the
choosing (oral case) or the acting (laborious case) onto the designer.
The 2x2 matrix of (agents' total, designer's total) cells over
{oral, laborious} x {indirect, direct} makes the shift explicit:

  oral indirect:       (I*(message_cost+send_cost), outcome_cost)
  oral direct:         (I*send_cost, I*message_cost+outcome_cost)
  laborious indirect:  (I*action_cost, outcome_cost)
  laborious direct:    (I*send_cost, I*action_cost+outcome_cost)

All arithmetic is exact rational arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction

from mechbench.game import STRATEGY_FORMATS

INDIRECT = "indirect"
DIRECT = "direct"
MECHANISM_KINDS = (INDIRECT, DIRECT)


def _nonnegative(value: Fraction, name: str) -> None:
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class EnergyParams:
    """The four per-unit costs; all must be nonnegative.

    It is natural for performing an action to cost more than picking a
    message, but nothing forces that: `standard_regime` just flags
    whether action_cost > message_cost so reports can mark unusual
    parameterizations instead of rejecting them.
    """

    action_cost: Fraction
    message_cost: Fraction
    send_cost: Fraction
    outcome_cost: Fraction

    def __post_init__(self):
        _nonnegative(self.action_cost, "action_cost")
        _nonnegative(self.message_cost, "message_cost")
        _nonnegative(self.send_cost, "send_cost")
        _nonnegative(self.outcome_cost, "outcome_cost")

    @property
    def standard_regime(self) -> bool:
        return self.action_cost > self.message_cost


@dataclass(frozen=True)
class EnergyCell:
    """Total energy one run costs the agents (jointly) and the designer."""

    agents: Fraction
    designer: Fraction

    @property
    def total(self) -> Fraction:
        return self.agents + self.designer


@dataclass(frozen=True)
class EnergyMatrix:
    agent_count: int
    oral_indirect: EnergyCell
    oral_direct: EnergyCell
    laborious_indirect: EnergyCell
    laborious_direct: EnergyCell

    def cell(self, strategy_format: str, kind: str) -> EnergyCell:
        if strategy_format not in STRATEGY_FORMATS:
            raise ValueError(f"unknown strategy format {strategy_format!r}")
        if kind not in MECHANISM_KINDS:
            raise ValueError(f"unknown mechanism kind {kind!r}")
        return getattr(self, f"{strategy_format}_{kind}")


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Can a designer budget sustain the direct mechanism?

    Two readings are reported side by side: the stated minimum (the
    budget must cover at least what all agents would spend in the
    indirect mechanism) and the full bill (the designer's entire direct-
    mechanism cell, which also counts running the outcome function and,
    in the oral case, selecting the messages).
    """

    strategy_format: str
    designer_budget: Fraction
    agents_indirect_cost: Fraction
    designer_direct_cost: Fraction
    covers_agents_indirect: bool
    covers_designer_direct: bool


@dataclass(frozen=True)
class PreferenceReport:
    """Who would rather run which mechanism, on energy grounds alone.

    Both mechanisms implement the same choice function, so energy is the
    only thing at stake. `commentary` is "conflict" when the designer is
    strictly better off indirect while the agents are strictly better
    off direct (switching to the direct mechanism shifts the bill onto
    the designer), "aligned" when both strictly favor the same side, and
    "neutral" otherwise.
    """

    strategy_format: str
    designer_indirect: Fraction
    designer_direct: Fraction
    agents_indirect: Fraction
    agents_direct: Fraction
    designer_prefers: str
    agents_prefer: str
    commentary: str


def energy_matrix(agent_count: int, params: EnergyParams) -> EnergyMatrix:
    """The 2x2 cost matrix for I agents under the given per-unit costs."""
    if agent_count < 1:
        raise ValueError("agent_count must be at least 1")
    count = Fraction(agent_count)
    return EnergyMatrix(
        agent_count=agent_count,
        oral_indirect=EnergyCell(
            agents=count * (params.message_cost + params.send_cost),
            designer=params.outcome_cost,
        ),
        oral_direct=EnergyCell(
            agents=count * params.send_cost,
            designer=count * params.message_cost + params.outcome_cost,
        ),
        laborious_indirect=EnergyCell(
            agents=count * params.action_cost,
            designer=params.outcome_cost,
        ),
        laborious_direct=EnergyCell(
            agents=count * params.send_cost,
            designer=count * params.action_cost + params.outcome_cost,
        ),
    )


def simplified_matrix(agent_count: int, action_cost: Fraction) -> EnergyMatrix:
    """The matrix when message, send and outcome costs are neglected.

    The oral row collapses to zeros; the laborious row becomes
    (I*action_cost, 0) indirect and (0, I*action_cost) direct: the whole
    bill moves from the agents to the designer.
    """
    return energy_matrix(
        agent_count,
        EnergyParams(
            action_cost=Fraction(action_cost),
            message_cost=Fraction(0),
            send_cost=Fraction(0),
            outcome_cost=Fraction(0),
        ),
    )


def check_energy_condition(
    agent_count: int,
    params: EnergyParams,
    strategy_format: str,
    designer_budget: Fraction,
) -> FeasibilityVerdict:
    """Check the designer's budget against both feasibility readings."""
    if designer_budget < 0:
        raise ValueError("designer_budget must be nonnegative")
    matrix = energy_matrix(agent_count, params)
    threshold = matrix.cell(strategy_format, INDIRECT).agents
    full_cost = matrix.cell(strategy_format, DIRECT).designer
    return FeasibilityVerdict(
        strategy_format=strategy_format,
        designer_budget=designer_budget,
        agents_indirect_cost=threshold,
        designer_direct_cost=full_cost,
        covers_agents_indirect=designer_budget >= threshold,
        covers_designer_direct=designer_budget >= full_cost,
    )


def _prefer(indirect: Fraction, direct: Fraction) -> str:
    if indirect < direct:
        return INDIRECT
    if direct < indirect:
        return DIRECT
    return "indifferent"


def designer_preference(
    agent_count: int, params: EnergyParams, strategy_format: str
) -> PreferenceReport:
    """Compare designer and agent bills across the two mechanisms."""
    matrix = energy_matrix(agent_count, params)
    indirect = matrix.cell(strategy_format, INDIRECT)
    direct = matrix.cell(strategy_format, DIRECT)
    designer_prefers = _prefer(indirect.designer, direct.designer)
    agents_prefer = _prefer(indirect.agents, direct.agents)
    if designer_prefers == INDIRECT and agents_prefer == DIRECT:
        commentary = "conflict"
    elif (
        designer_prefers == agents_prefer
        and designer_prefers != "indifferent"
    ):
        commentary = "aligned"
    else:
        commentary = "neutral"
    return PreferenceReport(
        strategy_format=strategy_format,
        designer_indirect=indirect.designer,
        designer_direct=direct.designer,
        agents_indirect=indirect.agents,
        agents_direct=direct.agents,
        designer_prefers=designer_prefers,
        agents_prefer=agents_prefer,
        commentary=commentary,
    )
