"""Exact workbench for finite Bayesian mechanisms.

Models finite collective-choice environments and mechanisms, enumerates
pure-strategy Bayesian Nash equilibria exhaustively, constructs and
checks direct revelation mechanisms, and accounts for the energy spent
by agents and the designer under either mechanism. All arithmetic is
exact rational arithmetic.
"""

from mechbench.game import (
    Environment,
    Mechanism,
    SocialChoiceFunction,
    StrategyProfile,
    ZeroMarginal,
    conditional_prior,
    induced_scf,
    validate_environment,
    validate_mechanism,
    validate_profile,
    validate_scf,
)
from mechbench.equilibrium import (
    DEFAULT_PROFILE_CAP,
    BneCertificate,
    BneRejection,
    CapExceeded,
    ImplementationWitness,
    SlotRecord,
    enumerate_bne,
    implements,
    interim_utility,
    is_bne,
    search_space_size,
)
from mechbench.revelation import (
    DirectMechanism,
    RevelationReport,
    StaleBne,
    TruthfulnessCounterexample,
    as_direct,
    build_direct,
    is_truthful_bne,
    truth_telling_profile,
    verify_revelation_principle,
)
from mechbench.energy import (
    EnergyCell,
    EnergyMatrix,
    EnergyParams,
    FeasibilityVerdict,
    PreferenceReport,
    check_energy_condition,
    designer_preference,
    energy_matrix,
    simplified_matrix,
)
from mechbench.document import (
    FORMAT_VERSION,
    DocumentError,
    InstanceDocument,
    parse_instance,
    parse_rational,
    serialize_instance,
)
from mechbench.generate import GeneratorConfig, SplitMix64, generate_instance

__version__ = "0.1.0"

__all__ = [
    "Environment",
    "Mechanism",
    "SocialChoiceFunction",
    "StrategyProfile",
    "ZeroMarginal",
    "conditional_prior",
    "induced_scf",
    "validate_environment",
    "validate_mechanism",
    "validate_profile",
    "validate_scf",
    "DEFAULT_PROFILE_CAP",
    "BneCertificate",
    "BneRejection",
    "CapExceeded",
    "ImplementationWitness",
    "SlotRecord",
    "enumerate_bne",
    "implements",
    "interim_utility",
    "is_bne",
    "search_space_size",
    "DirectMechanism",
    "RevelationReport",
    "StaleBne",
    "TruthfulnessCounterexample",
    "as_direct",
    "build_direct",
    "is_truthful_bne",
    "truth_telling_profile",
    "verify_revelation_principle",
    "EnergyCell",
    "EnergyMatrix",
    "EnergyParams",
    "FeasibilityVerdict",
    "PreferenceReport",
    "check_energy_condition",
    "designer_preference",
    "energy_matrix",
    "simplified_matrix",
    "FORMAT_VERSION",
    "DocumentError",
    "InstanceDocument",
    "parse_instance",
    "parse_rational",
    "serialize_instance",
    "GeneratorConfig",
    "SplitMix64",
    "generate_instance",
]
