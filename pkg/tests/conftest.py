"""Shared fixtures: small hand-built games and a hypothesis instance strategy."""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from mechbench.game import Environment, Mechanism, SocialChoiceFunction, StrategyProfile

F = Fraction


def utility_table(outcomes, types, value):
    """Build a complete (outcome, type) -> Fraction table from a callable."""
    return {(x, t): F(value(x, t)) for x in outcomes for t in types}


@pytest.fixture
def g1_env() -> Environment:
    """Two agents; agent 1 has types L/H, agent 2 a single type.

    Agent 1 wants x0 as L and x1 as H; agent 2 is indifferent. With the
    uniform prior this pins a unique equilibrium of the g1 mechanism.
    """
    return Environment(
        type_spaces=(("L", "H"), ("t",)),
        prior={("L", "t"): F(1, 2), ("H", "t"): F(1, 2)},
        outcomes=("x0", "x1"),
        utilities=(
            {
                ("x0", "L"): F(1), ("x1", "L"): F(0),
                ("x0", "H"): F(0), ("x1", "H"): F(1),
            },
            {("x0", "t"): F(0), ("x1", "t"): F(0)},
        ),
    )


@pytest.fixture
def g1_mech() -> Mechanism:
    return Mechanism(
        strategy_sets=(("a", "b"), ("c",)),
        outcome_fn={("a", "c"): "x0", ("b", "c"): "x1"},
        strategy_format="oral",
    )


@pytest.fixture
def g1_bne_profile() -> StrategyProfile:
    return StrategyProfile(maps=({"L": "a", "H": "b"}, {"t": "c"}))


@pytest.fixture
def g1_scf() -> SocialChoiceFunction:
    return SocialChoiceFunction(table={("L", "t"): "x0", ("H", "t"): "x1"})


@pytest.fixture
def correlated_env() -> Environment:
    """Correlated prior: agent 2's type is informative about agent 1's."""
    return Environment(
        type_spaces=(("L", "H"), ("l", "h")),
        prior={
            ("L", "l"): F(1, 2),
            ("L", "h"): F(0),
            ("H", "l"): F(1, 4),
            ("H", "h"): F(1, 4),
        },
        outcomes=("x",),
        utilities=(
            utility_table(("x",), ("L", "H"), lambda x, t: 0),
            utility_table(("x",), ("l", "h"), lambda x, t: 0),
        ),
    )


@pytest.fixture
def pennies_env() -> Environment:
    """Zero-sum guessing game with a single type per agent: no pure equilibrium."""
    return Environment(
        type_spaces=(("t",), ("t",)),
        prior={("t", "t"): F(1)},
        outcomes=("w1", "w2"),
        utilities=(
            {("w1", "t"): F(1), ("w2", "t"): F(0)},
            {("w1", "t"): F(0), ("w2", "t"): F(1)},
        ),
    )


@pytest.fixture
def pennies_mech() -> Mechanism:
    return Mechanism(
        strategy_sets=(("heads", "tails"), ("heads", "tails")),
        outcome_fn={
            ("heads", "heads"): "w1",
            ("tails", "tails"): "w1",
            ("heads", "tails"): "w2",
            ("tails", "heads"): "w2",
        },
        strategy_format="laborious",
    )


@st.composite
def small_instances(draw, max_agents=2, max_types=2, max_strategies=2, max_outcomes=3):
    """Random valid (Environment, Mechanism) pairs, small enough to brute-force.

    Priors are drawn as nonnegative integer weights (at least one
    positive) and normalized, so zero-probability profiles and
    zero-marginal types do occur.
    """
    from itertools import product

    agent_count = draw(st.integers(1, max_agents))
    type_spaces = tuple(
        tuple(f"t{k}" for k in range(draw(st.integers(1, max_types))))
        for _ in range(agent_count)
    )
    strategy_sets = tuple(
        tuple(f"s{k}" for k in range(draw(st.integers(1, max_strategies))))
        for _ in range(agent_count)
    )
    outcomes = tuple(f"x{k}" for k in range(draw(st.integers(1, max_outcomes))))

    profiles = list(product(*type_spaces))
    weights = draw(
        st.lists(
            st.integers(0, 3),
            min_size=len(profiles),
            max_size=len(profiles),
        ).filter(lambda ws: any(ws))
    )
    total = sum(weights)
    prior = {p: F(w, total) for p, w in zip(profiles, weights)}

    utilities = tuple(
        {
            (x, t): F(draw(st.integers(-2, 2)))
            for x in outcomes
            for t in type_spaces[i]
        }
        for i in range(agent_count)
    )
    outcome_fn = {
        v: outcomes[draw(st.integers(0, len(outcomes) - 1))]
        for v in product(*strategy_sets)
    }
    env = Environment(
        type_spaces=type_spaces, prior=prior, outcomes=outcomes, utilities=utilities
    )
    mech = Mechanism(
        strategy_sets=strategy_sets,
        outcome_fn=outcome_fn,
        strategy_format=draw(st.sampled_from(("oral", "laborious"))),
    )
    return env, mech
