"""Deterministic random instance generation for the fuzz harness.

Reproducibility across runs, machines and reimplementations matters more
here than statistical quality, so instead of a library generator the
stream is splitmix64, whose whole state-advance rule fits in four lines
and is documented in docs/format.md:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z <- ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output z XOR (z >> 31)

Bounded draws use plain modulo (`next_u64() % n`); the bias is irrelevant
at the tiny bounds used here and keeps the rule trivial to reproduce in
any language. The same config always yields the same document, byte for
byte.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from mechbench.document import InstanceDocument
from mechbench.game import Environment, Mechanism

MASK64 = (1 << 64) - 1

PRIOR_MODES = ("independent-uniform", "random-joint")

# Weights for random-joint priors are drawn from [1, _MAX_PRIOR_WEIGHT],
# so every type profile keeps strictly positive probability.
_MAX_PRIOR_WEIGHT = 16


class SplitMix64:
    """The splitmix64 stream; see the module docstring for the rule."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound < 1:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def int_in(self, low: int, high: int) -> int:
        if low > high:
            raise ValueError(f"empty range [{low}, {high}]")
        return low + self.below(high - low + 1)

    def pick(self, items):
        return items[self.below(len(items))]


@dataclass(frozen=True)
class GeneratorConfig:
    """Ranges (inclusive) and mode for one generated instance.

    Utility values are small integers so that certificates stay readable
    and exact ties show up often enough to exercise the weak-inequality
    paths. The default outcome range starts at 2: a single outcome makes
    every profile an equilibrium, which is legal but floods downstream
    reports.
    """

    seed: int
    agents: tuple[int, int] = (1, 3)
    types_per_agent: tuple[int, int] = (1, 3)
    strategies_per_agent: tuple[int, int] = (1, 3)
    outcomes: tuple[int, int] = (2, 4)
    utility_range: tuple[int, int] = (-4, 4)
    prior_mode: str = "random-joint"

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")
        for name in ("agents", "types_per_agent", "strategies_per_agent", "outcomes"):
            low, high = getattr(self, name)
            if low < 1 or low > high:
                raise ValueError(f"{name} range [{low}, {high}] is empty or nonpositive")
        low, high = self.utility_range
        if low > high:
            raise ValueError("utility_range is empty")
        if self.prior_mode not in PRIOR_MODES:
            raise ValueError(
                f"prior_mode must be one of {PRIOR_MODES}, got {self.prior_mode!r}"
            )


def generate_instance(config: GeneratorConfig) -> InstanceDocument:
    """Draw one valid instance document, fully determined by the config.

    Draw order (fixed; reordering would silently change every seed):
    agent count, per-agent type counts, per-agent strategy counts,
    outcome count, strategy format, prior, utilities (agent-major,
    outcome-major), outcome function (joint strategies in product order).
    """
    rng = SplitMix64(config.seed)

    agent_count = rng.int_in(*config.agents)
    type_spaces = tuple(
        tuple(f"t{k + 1}" for k in range(rng.int_in(*config.types_per_agent)))
        for _ in range(agent_count)
    )
    strategy_sets = tuple(
        tuple(f"s{k + 1}" for k in range(rng.int_in(*config.strategies_per_agent)))
        for _ in range(agent_count)
    )
    outcomes = tuple(f"x{k + 1}" for k in range(rng.int_in(*config.outcomes)))
    strategy_format = "oral" if rng.below(2) == 0 else "laborious"

    profiles = list(product(*type_spaces))
    if config.prior_mode == "independent-uniform":
        share = Fraction(1, len(profiles))
        prior = {profile: share for profile in profiles}
    else:
        weights = [rng.int_in(1, _MAX_PRIOR_WEIGHT) for _ in profiles]
        total = sum(weights)
        prior = {
            profile: Fraction(weight, total)
            for profile, weight in zip(profiles, weights)
        }

    utilities = tuple(
        {
            (outcome, type_label): Fraction(rng.int_in(*config.utility_range))
            for outcome in outcomes
            for type_label in type_spaces[i]
        }
        for i in range(agent_count)
    )
    outcome_fn = {
        vector: outcomes[rng.below(len(outcomes))]
        for vector in product(*strategy_sets)
    }

    return InstanceDocument(
        environment=Environment(
            type_spaces=type_spaces,
            prior=prior,
            outcomes=outcomes,
            utilities=utilities,
        ),
        mechanism=Mechanism(
            strategy_sets=strategy_sets,
            outcome_fn=outcome_fn,
            strategy_format=strategy_format,
        ),
    )
