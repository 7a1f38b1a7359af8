"""Interim utilities, the naive equilibrium oracle and cached enumeration."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mechbench.equilibrium import (
    BneCertificate,
    BneRejection,
    CapExceeded,
    enumerate_bne,
    implements,
    interim_utility,
    is_bne,
    search_space_size,
)
from mechbench.game import (
    Environment,
    Mechanism,
    SocialChoiceFunction,
    StrategyProfile,
    induced_scf,
)

from conftest import small_instances

F = Fraction


def all_profiles(env, mech):
    """Every total strategy profile, in the lexicographic slot encoding."""
    slots = [
        (agent, t)
        for agent in range(env.agent_count)
        for t in env.type_spaces[agent]
    ]
    for assignment in product(*(mech.strategy_sets[a] for a, _ in slots)):
        maps = [dict() for _ in range(env.agent_count)]
        for (agent, t), s in zip(slots, assignment):
            maps[agent][t] = s
        yield StrategyProfile(maps=tuple(maps))


def naive_enumerate(env, mech):
    """Reference oracle: run the naive single-profile check on everything."""
    out = []
    for profile in all_profiles(env, mech):
        result = is_bne(env, mech, profile)
        if isinstance(result, BneCertificate):
            out.append(result)
    return tuple(out)


def test_interim_single_agent_reduces_to_plain_utility():
    env = Environment(
        type_spaces=(("L",),),
        prior={("L",): F(1)},
        outcomes=("x0", "x1"),
        utilities=({("x0", "L"): F(3), ("x1", "L"): F(-2)},),
    )
    mech = Mechanism(
        strategy_sets=(("p", "q"),),
        outcome_fn={("p",): "x0", ("q",): "x1"},
        strategy_format="oral",
    )
    profile = StrategyProfile(maps=({"L": "p"},))
    assert interim_utility(env, mech, profile, 0, "L", "p") == F(3)
    assert interim_utility(env, mech, profile, 0, "L", "q") == F(-2)


def test_interim_constant_utilities_return_the_constant(g1_env, g1_mech):
    env = Environment(
        type_spaces=g1_env.type_spaces,
        prior=g1_env.prior,
        outcomes=g1_env.outcomes,
        utilities=(
            {(x, t): F(7, 3) for x in g1_env.outcomes for t in ("L", "H")},
            {(x, "t"): F(7, 3) for x in g1_env.outcomes},
        ),
    )
    profile = StrategyProfile(maps=({"L": "a", "H": "a"}, {"t": "c"}))
    for candidate in ("a", "b"):
        assert interim_utility(env, g1_mech, profile, 0, "L", candidate) == F(7, 3)


def test_interim_g1_agent1_type_L(g1_env, g1_mech, g1_bne_profile):
    # Agent 2 has a single type, so the expectation is a single term:
    # playing a yields u1(x0, L) = 1, playing b yields u1(x1, L) = 0.
    assert interim_utility(g1_env, g1_mech, g1_bne_profile, 0, "L", "a") == F(1)
    assert interim_utility(g1_env, g1_mech, g1_bne_profile, 0, "L", "b") == F(0)


def test_interim_rejects_unknown_strategy(g1_env, g1_mech, g1_bne_profile):
    with pytest.raises(ValueError):
        interim_utility(g1_env, g1_mech, g1_bne_profile, 0, "L", "zzz")


def test_is_bne_accepts_g1_equilibrium(g1_env, g1_mech, g1_bne_profile):
    result = is_bne(g1_env, g1_mech, g1_bne_profile)
    assert isinstance(result, BneCertificate)
    by_slot = {(r.agent, r.type_label): r for r in result.records}
    assert by_slot[(0, "L")].utility == F(1)
    assert by_slot[(0, "L")].best_utility == F(1)
    assert by_slot[(0, "H")].utility == F(1)
    assert not any(r.skipped for r in result.records)


def test_is_bne_rejects_and_names_first_deviation(g1_env, g1_mech):
    profile = StrategyProfile(maps=({"L": "b", "H": "b"}, {"t": "c"}))
    result = is_bne(g1_env, g1_mech, profile)
    assert result == BneRejection(agent=0, type_label="L", deviation="a")


def test_is_bne_single_strategy_always_accepts(g1_env):
    mech = Mechanism(
        strategy_sets=(("only",), ("c",)),
        outcome_fn={("only", "c"): "x0"},
        strategy_format="laborious",
    )
    profile = StrategyProfile(maps=({"L": "only", "H": "only"}, {"t": "c"}))
    assert isinstance(is_bne(g1_env, mech, profile), BneCertificate)


def test_is_bne_constant_utilities_accept_everything(g1_mech):
    env = Environment(
        type_spaces=(("L", "H"), ("t",)),
        prior={("L", "t"): F(1, 2), ("H", "t"): F(1, 2)},
        outcomes=("x0", "x1"),
        utilities=(
            {(x, t): F(5) for x in ("x0", "x1") for t in ("L", "H")},
            {(x, "t"): F(5) for x in ("x0", "x1")},
        ),
    )
    for profile in all_profiles(env, g1_mech):
        assert isinstance(is_bne(env, g1_mech, profile), BneCertificate)


def test_is_bne_skips_zero_marginal_types(g1_mech):
    env = Environment(
        type_spaces=(("L", "H"), ("t",)),
        prior={("L", "t"): F(1), ("H", "t"): F(0)},
        outcomes=("x0", "x1"),
        utilities=(
            {("x0", "L"): F(1), ("x1", "L"): F(0),
             ("x0", "H"): F(0), ("x1", "H"): F(1)},
            {("x0", "t"): F(0), ("x1", "t"): F(0)},
        ),
    )
    # H never occurs, so even its "bad" strategy choice cannot be refuted.
    profile = StrategyProfile(maps=({"L": "a", "H": "a"}, {"t": "c"}))
    result = is_bne(env, g1_mech, profile)
    assert isinstance(result, BneCertificate)
    assert result.skipped_slots() == ((0, "H"),)
    skipped = [r for r in result.records if r.skipped]
    assert skipped[0].utility is None and skipped[0].best_utility is None


def test_enumerate_g1_finds_exactly_the_unique_equilibrium(
    g1_env, g1_mech, g1_bne_profile
):
    certs = enumerate_bne(g1_env, g1_mech)
    assert len(certs) == 1
    assert certs[0].profile == g1_bne_profile


def test_enumerate_constant_single_agent_returns_both_profiles():
    env = Environment(
        type_spaces=(("L",),),
        prior={("L",): F(1)},
        outcomes=("x",),
        utilities=({("x", "L"): F(2)},),
    )
    mech = Mechanism(
        strategy_sets=(("p", "q"),),
        outcome_fn={("p",): "x", ("q",): "x"},
        strategy_format="oral",
    )
    certs = enumerate_bne(env, mech)
    assert [c.profile.maps[0]["L"] for c in certs] == ["p", "q"]


def test_enumerate_is_deterministic(g1_env, g1_mech):
    assert enumerate_bne(g1_env, g1_mech) == enumerate_bne(g1_env, g1_mech)


def test_enumerate_matches_naive_oracle_on_fixtures(
    g1_env, g1_mech, pennies_env, pennies_mech, correlated_env
):
    correlated_mech = Mechanism(
        strategy_sets=(("u", "v"), ("u", "v")),
        outcome_fn={
            ("u", "u"): "x", ("u", "v"): "x", ("v", "u"): "x", ("v", "v"): "x",
        },
        strategy_format="oral",
    )
    cases = [
        (g1_env, g1_mech),
        (pennies_env, pennies_mech),
        (correlated_env, correlated_mech),
    ]
    for env, mech in cases:
        assert enumerate_bne(env, mech) == naive_enumerate(env, mech)


def test_enumerate_pennies_has_no_pure_equilibrium(pennies_env, pennies_mech):
    assert enumerate_bne(pennies_env, pennies_mech) == ()
    assert naive_enumerate(pennies_env, pennies_mech) == ()


def test_enumerate_output_reverifies(g1_env, g1_mech):
    for cert in enumerate_bne(g1_env, g1_mech):
        assert is_bne(g1_env, g1_mech, cert.profile) == cert


def test_cap_exceeded_reports_search_space(g1_env, g1_mech):
    assert search_space_size(g1_env, g1_mech) == 4
    with pytest.raises(CapExceeded) as excinfo:
        enumerate_bne(g1_env, g1_mech, max_profiles=3)
    assert excinfo.value.search_space == 4
    assert excinfo.value.cap == 3


def test_implements_g1_with_induced_scf(g1_env, g1_mech, g1_scf):
    witness = implements(g1_env, g1_mech, g1_scf)
    assert witness.implemented
    assert len(witness.witnesses) == 1


def test_implements_g1_rejects_other_scf(g1_env, g1_mech):
    constant = SocialChoiceFunction(table={("L", "t"): "x1", ("H", "t"): "x1"})
    witness = implements(g1_env, g1_mech, constant)
    assert not witness.implemented
    assert witness.witnesses == ()


def test_implements_accepts_induced_scf_of_any_equilibrium(g1_env, g1_mech):
    for cert in enumerate_bne(g1_env, g1_mech):
        f = induced_scf(g1_env, g1_mech, cert.profile)
        assert implements(g1_env, g1_mech, f).implemented


@settings(max_examples=60, deadline=None)
@given(case=small_instances(), scale=st.fractions(min_value=F(1, 3), max_value=F(5)),
       shift=st.fractions(min_value=F(-3), max_value=F(3)))
def test_positive_affine_rescaling_preserves_equilibrium_set(case, scale, shift):
    env, mech = case
    rescaled = Environment(
        type_spaces=env.type_spaces,
        prior=env.prior,
        outcomes=env.outcomes,
        utilities=tuple(
            {k: scale * v + shift for k, v in table.items()}
            for table in env.utilities
        ),
    )
    original = {tuple(sorted((i, t, m[t]) for i, m in enumerate(c.profile.maps) for t in m))
                for c in enumerate_bne(env, mech)}
    transformed = {tuple(sorted((i, t, m[t]) for i, m in enumerate(c.profile.maps) for t in m))
                   for c in enumerate_bne(rescaled, mech)}
    assert original == transformed


@settings(max_examples=40, deadline=None)
@given(case=small_instances())
def test_enumerate_matches_naive_oracle_on_random_instances(case):
    env, mech = case
    assert enumerate_bne(env, mech) == naive_enumerate(env, mech)
