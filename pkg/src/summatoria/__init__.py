"""Summatory arithmetic functions at scale, with empirical limit-law
diagnostics: segmented sieves for mu and lambda, checkpointed traces,
empirical distribution statistics, remainder-class fits, and perturbed
finite-valued schedules with deterministic realizations."""

from .empirical import (
    EmpiricalDistribution,
    empirical_cdf,
    empirical_mean,
    empirical_moments,
    independence_estimator,
    ks_distance,
)
from .errors import BoundError, CapacityError, DegenerateSampleError, NumericError
from .limits import (
    BOUNDED,
    DECAYING,
    GROWING,
    INCONCLUSIVE,
    LimitVerdict,
    RemainderFit,
    estimate_limit_mean,
    euler_maclaurin_gap,
    fit_remainders,
    full_verdict,
    mean_rate_fit,
    vanishing_sum_verdict,
    verdict_to_json_dict,
)
from .schedules import (
    TwoPointSchedule,
    fair_coin_schedule,
    log2_indicator_schedule,
    log_coin_schedule,
    realize_greedy,
    schedule_from_json_dict,
    schedule_mean,
    schedule_summatory,
    schedule_to_json_dict,
    two_value_schedule,
)
from .sequences import (
    ArithmeticSequence,
    liouville_sequence,
    mobius_sequence,
    sequence_from_function,
    sequence_from_values,
    weighted_mobius_sequence,
)
from .sieve import (
    SieveBlock,
    liouville_oracle,
    mobius_oracle,
    primes_up_to,
    sieve_block,
)
from .traces import (
    SummatoryTrace,
    geometric_checkpoints,
    liouville_trace,
    mertens_trace,
    summatory_trace,
    weighted_mobius_trace,
    write_trace_csv,
)

__all__ = [
    "ArithmeticSequence",
    "BOUNDED",
    "BoundError",
    "CapacityError",
    "DECAYING",
    "DegenerateSampleError",
    "EmpiricalDistribution",
    "GROWING",
    "INCONCLUSIVE",
    "LimitVerdict",
    "NumericError",
    "RemainderFit",
    "SieveBlock",
    "SummatoryTrace",
    "TwoPointSchedule",
    "empirical_cdf",
    "empirical_mean",
    "empirical_moments",
    "estimate_limit_mean",
    "euler_maclaurin_gap",
    "fair_coin_schedule",
    "fit_remainders",
    "full_verdict",
    "geometric_checkpoints",
    "independence_estimator",
    "ks_distance",
    "liouville_oracle",
    "liouville_sequence",
    "liouville_trace",
    "log2_indicator_schedule",
    "log_coin_schedule",
    "mean_rate_fit",
    "mertens_trace",
    "mobius_oracle",
    "mobius_sequence",
    "primes_up_to",
    "realize_greedy",
    "schedule_from_json_dict",
    "schedule_mean",
    "schedule_summatory",
    "schedule_to_json_dict",
    "sequence_from_function",
    "sequence_from_values",
    "sieve_block",
    "summatory_trace",
    "two_value_schedule",
    "vanishing_sum_verdict",
    "verdict_to_json_dict",
    "weighted_mobius_sequence",
    "weighted_mobius_trace",
    "write_trace_csv",
]

__version__ = "0.1.0"
