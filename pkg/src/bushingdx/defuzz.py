"""Defuzzification of aggregated risk into a crisp 0-100 rank and decision.

The crisp rank is the weighted average of the output-set maxima: each risk
group contributes the midpoint of its peak interval on the risk axis (low
peaks over 0-10, medium at 60, high over 80-100), weighted by the group's
aggregated degree. A rank above 30 rejects the bushing, 10 to 30 halves the
monitoring interval, and below 10 it stays in normal service.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

from bushingdx.fuzzify import GasMembershipTable, GasReading, fuzzify_bushing
from bushingdx.membership import GasId
from bushingdx.rules import AggregatedMembership, RiskGroup, RuleSet, aggregate, default_ruleset


class Decision(Enum):
    """Maintenance action implied by the crisp rank."""

    ACCEPT = "Accept"
    MONITOR = "Monitor"
    REJECT = "Reject"


class UndefinedRankError(ValueError):
    """All aggregated memberships are zero: no rule fired, no rank exists."""


@dataclass(frozen=True)
class OutputSet:
    """Peak interval of one risk group's output set on the 0-100 risk axis."""

    group: RiskGroup
    peak_lo: float
    peak_hi: float

    def __post_init__(self) -> None:
        if not self.peak_lo <= self.peak_hi:
            raise ValueError("peak interval must satisfy lo <= hi")

    @property
    def coefficient(self) -> float:
        """Midpoint of the peak interval: the group's risk level at maximum."""
        return (self.peak_lo + self.peak_hi) / 2.0


_OUTPUT_SETS: Tuple[OutputSet, OutputSet, OutputSet] = (
    OutputSet(RiskGroup.LOW, 0.0, 10.0),
    OutputSet(RiskGroup.MEDIUM, 60.0, 60.0),
    OutputSet(RiskGroup.HIGH, 80.0, 100.0),
)

#: Rank strictly above this is rejected.
REJECT_ABOVE = 30.0
#: Rank strictly below this stays in normal service; [10, 30] is monitored.
ACCEPT_BELOW = 10.0


def output_sets() -> Tuple[OutputSet, OutputSet, OutputSet]:
    """The three output sets, ordered low < medium < high without overlap."""
    return _OUTPUT_SETS


def crisp_rank(agg: AggregatedMembership) -> float:
    """Weighted average of output-set maxima.

    Raises:
        UndefinedRankError: every membership is zero (no rule fired).
    """
    weights = {s.group: s.coefficient for s in _OUTPUT_SETS}
    total = agg.lr + agg.mr + agg.hr
    if total == 0.0:
        raise UndefinedRankError("no rule fired: aggregated memberships are all zero")
    numerator = weights[RiskGroup.LOW] * agg.lr + weights[RiskGroup.MEDIUM] * agg.mr + weights[RiskGroup.HIGH] * agg.hr
    rank = numerator / total
    # the weighted mean lies in [lowest, highest coefficient]; clamp away
    # sub-ulp rounding excursions so the published bounds hold exactly
    return min(weights[RiskGroup.HIGH], max(weights[RiskGroup.LOW], rank))


def decide(rank: float) -> Decision:
    """Map a crisp rank to the maintenance decision.

    Both band edges belong to the middle band: exactly 10 and exactly 30
    are monitored.
    """
    if not (math.isfinite(rank) and 0.0 <= rank <= 100.0):
        raise ValueError(f"rank must lie in [0, 100], got {rank!r}")
    if rank > REJECT_ABOVE:
        return Decision.REJECT
    if rank >= ACCEPT_BELOW:
        return Decision.MONITOR
    return Decision.ACCEPT


@dataclass(frozen=True)
class RiskAssessment:
    """End-to-end result for one bushing, with intermediates kept for reporting."""

    bushing_id: str
    reading: GasReading
    table: GasMembershipTable
    memberships: AggregatedMembership
    rank: float
    decision: Decision

    def gas_values(self) -> Dict[str, float]:
        """All ten concentrations keyed by gas id (TDCG recomputed)."""
        return {gas.value: self.reading.value(gas) for gas in GasId}

    def to_json_dict(self) -> dict:
        return {
            "bushing_id": self.bushing_id,
            "gases": self.gas_values(),
            "memberships": self.table.to_json_dict(),
            "aggregated": {
                RiskGroup.LOW.value: self.memberships.lr,
                RiskGroup.MEDIUM.value: self.memberships.mr,
                RiskGroup.HIGH.value: self.memberships.hr,
            },
            "rank": self.rank,
            "decision": self.decision.value,
        }


def assess(reading: GasReading, ruleset: Optional[RuleSet] = None) -> RiskAssessment:
    """Fuzzify, aggregate, rank and decide for one reading."""
    if ruleset is None:
        ruleset = default_ruleset()
    table = fuzzify_bushing(reading)
    agg = aggregate(ruleset, table)
    rank = crisp_rank(agg)
    return RiskAssessment(
        bushing_id=reading.bushing_id,
        reading=reading,
        table=table,
        memberships=agg,
        rank=rank,
        decision=decide(rank),
    )
