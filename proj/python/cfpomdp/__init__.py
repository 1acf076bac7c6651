"""Exact equivalence checks, determinization and learning transfer for finite POMDPs.

Probabilities are returned as ``fractions.Fraction``. Histories and policies
use the same text forms as the ``cfpomdp`` command line.
"""

from ._core import (
    Environment,
    InputError,
    PreconditionError,
    cf_equiv,
    collection_prob,
    count_env_policies,
    determinize,
    env_policies,
    equiv,
    history_prob,
    learn,
    learn_transfer,
    minimize,
    posterior,
    simulate,
)

__all__ = [
    "Environment",
    "InputError",
    "PreconditionError",
    "cf_equiv",
    "collection_prob",
    "count_env_policies",
    "determinize",
    "env_policies",
    "equiv",
    "history_prob",
    "learn",
    "learn_transfer",
    "minimize",
    "posterior",
    "simulate",
]
