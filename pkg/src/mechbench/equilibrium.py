"""Interim utilities, best responses and exhaustive pure-equilibrium search.

A strategy profile is an equilibrium when no agent, at any type that can
actually occur, can raise its interim expected utility by a unilateral
strategy change. Two code paths decide this:

* `is_bne` checks one profile the naive way, recomputing every interim
  expectation from the conditional prior. It is the reference oracle.
* `enumerate_bne` walks the whole profile space. Because the interim
  utility of (agent, type) depends only on the candidate strategy and on
  what the *other* agents play at types that can co-occur, it caches one
  best-reply table per (agent, type, relevant opposing assignment) and
  reuses it across profiles. The two paths must agree exactly on every
  instance; the test suite enforces this.

Types whose marginal probability is 0 impose no constraint (the
conditional expectation is undefined, and they never occur); their
certificate records are flagged as skipped.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping

from mechbench.game import (
    Environment,
    Mechanism,
    SocialChoiceFunction,
    StrategyProfile,
    ZERO,
    conditional_prior,
    induced_scf,
    validate_profile,
)

DEFAULT_PROFILE_CAP = 10_000_000


class CapExceeded(Exception):
    """The profile space is too large for exhaustive search."""

    def __init__(self, search_space: int, cap: int):
        super().__init__(
            f"strategy-profile space holds {search_space} profiles, "
            f"exceeding the cap of {cap}"
        )
        self.search_space = search_space
        self.cap = cap


@dataclass(frozen=True)
class SlotRecord:
    """Best-reply assessment of one (agent, type) slot of a profile.

    `utility` and `best_utility` are the interim expected utility of the
    chosen strategy and the maximum over the agent's whole strategy set;
    both are None exactly when the slot is skipped (zero-marginal type).
    """

    agent: int
    type_label: str
    chosen: str
    utility: Fraction | None
    best_utility: Fraction | None
    skipped: bool


@dataclass(frozen=True)
class BneCertificate:
    """A verified equilibrium: the profile plus one record per slot."""

    profile: StrategyProfile
    records: tuple[SlotRecord, ...]

    def skipped_slots(self) -> tuple[tuple[int, str], ...]:
        return tuple((r.agent, r.type_label) for r in self.records if r.skipped)


@dataclass(frozen=True)
class BneRejection:
    """First profitable deviation found: agent, its type, the better strategy."""

    agent: int
    type_label: str
    deviation: str


@dataclass(frozen=True)
class ImplementationWitness:
    """Equilibria of a mechanism whose induced choice function equals `scf`."""

    scf: SocialChoiceFunction
    witnesses: tuple[BneCertificate, ...]

    @property
    def implemented(self) -> bool:
        return bool(self.witnesses)


def search_space_size(env: Environment, mech: Mechanism) -> int:
    """Number of pure strategy profiles: prod_i |S_i| ** |types_i|."""
    size = 1
    for types, strategies in zip(env.type_spaces, mech.strategy_sets):
        size *= len(strategies) ** len(types)
    return size


def interim_utility(
    env: Environment,
    mech: Mechanism,
    profile: StrategyProfile,
    agent: int,
    type_label: str,
    candidate: str,
) -> Fraction:
    """Expected utility of playing `candidate` at (`agent`, `type_label`).

    The expectation is over the other agents' types conditional on the
    agent's own type, with the others playing their profile maps. Exact;
    raises ZeroMarginal if the conditioning type cannot occur.
    """
    if candidate not in mech.strategy_sets[agent]:
        raise ValueError(
            f"{candidate!r} is not a strategy of agent {agent + 1}"
        )
    cond = conditional_prior(env, agent, type_label)
    others = [j for j in range(env.agent_count) if j != agent]
    total = ZERO
    for theta_minus, p in cond.items():
        if p == 0:
            continue
        vector = [""] * env.agent_count
        vector[agent] = candidate
        for pos, j in enumerate(others):
            vector[j] = profile.maps[j][theta_minus[pos]]
        outcome = mech.outcome_fn[tuple(vector)]
        total += p * env.utility(agent, outcome, type_label)
    return total


def is_bne(
    env: Environment, mech: Mechanism, profile: StrategyProfile
) -> BneCertificate | BneRejection:
    """Naive per-profile equilibrium check.

    Walks agents and types in declared order; on the first slot where
    some strategy beats the chosen one, returns a rejection naming the
    first such deviation in strategy order. Otherwise returns the full
    certificate.
    """
    bad = validate_profile(env, mech, profile)
    if bad:
        raise ValueError("; ".join(bad))

    records: list[SlotRecord] = []
    for agent in range(env.agent_count):
        for type_label in env.type_spaces[agent]:
            if env.marginal(agent, type_label) == 0:
                records.append(
                    SlotRecord(agent, type_label, profile.maps[agent][type_label],
                               None, None, True)
                )
                continue
            chosen = profile.maps[agent][type_label]
            utilities = {
                s: interim_utility(env, mech, profile, agent, type_label, s)
                for s in mech.strategy_sets[agent]
            }
            chosen_utility = utilities[chosen]
            best = max(utilities.values())
            if chosen_utility < best:
                deviation = next(
                    s for s in mech.strategy_sets[agent]
                    if utilities[s] > chosen_utility
                )
                return BneRejection(agent, type_label, deviation)
            records.append(
                SlotRecord(agent, type_label, chosen, chosen_utility, best, False)
            )
    return BneCertificate(profile=profile, records=tuple(records))


class _InterimIndex:
    """Per-instance scaffolding for the cached enumeration path.

    Slots are (agent, type) pairs in declared order. For each positive-
    marginal slot we keep the conditional support and, for every support
    entry, the slot positions the other agents' strategies are read
    from. A best-reply table is cached per (slot, restriction of the
    assignment to the slots that matter there).
    """

    def __init__(self, env: Environment, mech: Mechanism):
        self.env = env
        self.mech = mech
        self.slots: list[tuple[int, str]] = [
            (agent, type_label)
            for agent in range(env.agent_count)
            for type_label in env.type_spaces[agent]
        ]
        self.slot_pos = {slot: k for k, slot in enumerate(self.slots)}
        self.strategy_sets = [
            mech.strategy_sets[agent] for agent, _ in self.slots
        ]

        self.skipped: list[bool] = []
        # Per slot: the other agents in order, and one support entry per
        # positive-probability opposing type profile, holding its
        # conditional probability and the slot positions the others'
        # strategies are read from (aligned with the others list).
        self.others: list[tuple[int, ...]] = []
        self.support: list[list[tuple[Fraction, tuple[int, ...]]]] = []
        self.relevant: list[tuple[int, ...]] = []
        for agent, type_label in self.slots:
            if env.marginal(agent, type_label) == 0:
                self.skipped.append(True)
                self.others.append(())
                self.support.append([])
                self.relevant.append(())
                continue
            self.skipped.append(False)
            cond = conditional_prior(env, agent, type_label)
            others = tuple(j for j in range(env.agent_count) if j != agent)
            self.others.append(others)
            entries: list[tuple[Fraction, tuple[int, ...]]] = []
            seen_slots: list[int] = []
            for theta_minus, p in cond.items():
                if p == 0:
                    continue
                positions = tuple(
                    self.slot_pos[(j, theta_minus[pos])]
                    for pos, j in enumerate(others)
                )
                for k in positions:
                    if k not in seen_slots:
                        seen_slots.append(k)
                entries.append((p, positions))
            self.support.append(entries)
            self.relevant.append(tuple(sorted(seen_slots)))

        self._tables: dict[
            tuple[int, tuple[str, ...]], tuple[Mapping[str, Fraction], Fraction]
        ] = {}

    def best_reply_table(
        self, slot: int, assignment: tuple[str, ...]
    ) -> tuple[Mapping[str, Fraction], Fraction]:
        """Candidate -> interim utility at `slot`, plus the max, cached."""
        key = (slot, tuple(assignment[k] for k in self.relevant[slot]))
        hit = self._tables.get(key)
        if hit is not None:
            return hit

        agent, type_label = self.slots[slot]
        others = self.others[slot]
        utilities: dict[str, Fraction] = {}
        for candidate in self.mech.strategy_sets[agent]:
            total = ZERO
            for p, positions in self.support[slot]:
                vector = [""] * self.env.agent_count
                vector[agent] = candidate
                for pos, j in enumerate(others):
                    vector[j] = assignment[positions[pos]]
                outcome = self.mech.outcome_fn[tuple(vector)]
                total += p * self.env.utility(agent, outcome, type_label)
            utilities[candidate] = total
        result = (utilities, max(utilities.values()))
        self._tables[key] = result
        return result

    def certificate(self, assignment: tuple[str, ...]) -> BneCertificate:
        maps: list[dict[str, str]] = [dict() for _ in range(self.env.agent_count)]
        for k, (agent, type_label) in enumerate(self.slots):
            maps[agent][type_label] = assignment[k]
        records: list[SlotRecord] = []
        for k, (agent, type_label) in enumerate(self.slots):
            if self.skipped[k]:
                records.append(
                    SlotRecord(agent, type_label, assignment[k], None, None, True)
                )
                continue
            utilities, best = self.best_reply_table(k, assignment)
            records.append(
                SlotRecord(agent, type_label, assignment[k],
                           utilities[assignment[k]], best, False)
            )
        return BneCertificate(
            profile=StrategyProfile(maps=tuple(maps)), records=tuple(records)
        )


def enumerate_bne(
    env: Environment, mech: Mechanism, max_profiles: int = DEFAULT_PROFILE_CAP
) -> tuple[BneCertificate, ...]:
    """All pure-strategy equilibria, in lexicographic profile order.

    The encoding orders slots agent-major, types within each agent in
    declared order, and strategies in declared order, so the output is
    deterministic and diffable. Raises CapExceeded (with the computed
    size) instead of searching when the profile space is larger than
    `max_profiles`; silent truncation would corrupt downstream checks.
    """
    size = search_space_size(env, mech)
    if size > max_profiles:
        raise CapExceeded(size, max_profiles)

    index = _InterimIndex(env, mech)
    found: list[BneCertificate] = []
    active = [k for k in range(len(index.slots)) if not index.skipped[k]]
    for assignment in product(*index.strategy_sets):
        ok = True
        for k in active:
            utilities, best = index.best_reply_table(k, assignment)
            if utilities[assignment[k]] != best:
                ok = False
                break
        if ok:
            found.append(index.certificate(assignment))
    return tuple(found)


def implements(
    env: Environment,
    mech: Mechanism,
    scf: SocialChoiceFunction,
    max_profiles: int = DEFAULT_PROFILE_CAP,
) -> ImplementationWitness:
    """Does some equilibrium of `mech` induce exactly `scf`?

    Returns every certificate whose induced choice function equals `scf`
    pointwise; the mechanism implements `scf` iff the list is nonempty.
    """
    witnesses = tuple(
        cert
        for cert in enumerate_bne(env, mech, max_profiles)
        if induced_scf(env, mech, cert.profile) == scf
    )
    return ImplementationWitness(scf=scf, witnesses=witnesses)
