"""Condition assessment of oil-impregnated-paper HV bushings from DGA data.

The package fuzzifies dissolved-gas concentrations against IEC 60599 /
IEEE C57-104 screening limits, evaluates an oxygen-conditioned rule set,
defuzzifies the aggregated risk into a 0-100 rank with an
Accept / Monitor / Reject maintenance decision, and ships a small
feed-forward network baseline for comparison.
"""

from bushingdx.membership import GasId, Level, Unit, eval_mf, gas_catalog
from bushingdx.fuzzify import GasReading, GasMembershipTable, compute_tdcg, fuzzify_bushing, fuzzify_gas
from bushingdx.rules import (
    AggregatedMembership,
    Atom,
    RiskGroup,
    Rule,
    RuleSet,
    aggregate,
    default_ruleset,
    parse_rules,
    rule_count,
)
from bushingdx.defuzz import Decision, RiskAssessment, assess, crisp_rank, decide

__all__ = [
    "GasId",
    "Level",
    "Unit",
    "eval_mf",
    "gas_catalog",
    "GasReading",
    "GasMembershipTable",
    "compute_tdcg",
    "fuzzify_gas",
    "fuzzify_bushing",
    "Atom",
    "Rule",
    "RuleSet",
    "RiskGroup",
    "AggregatedMembership",
    "rule_count",
    "parse_rules",
    "default_ruleset",
    "aggregate",
    "Decision",
    "RiskAssessment",
    "crisp_rank",
    "decide",
    "assess",
]

__version__ = "0.1.0"
