"""Fuzzification of a raw DGA reading into per-gas membership degrees.

Total dissolved combustible gas (TDCG) is always recomputed as the sum of
the six combustibles (H2, CH4, C2H6, C2H4, C2H2, CO); a TDCG value supplied
with the reading is treated as a checksum, never as an override.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from bushingdx.membership import COMBUSTIBLES, GasId, Level, catalog_entry

#: Largest tolerated difference between a supplied TDCG and the recomputed sum.
TDCG_TOLERANCE_PPM = 0.5


class TdcgMismatchError(ValueError):
    """Supplied TDCG disagrees with the sum of the six combustibles."""

    def __init__(self, supplied: float, computed: float):
        super().__init__(
            f"supplied TDCG {supplied:g} ppm differs from computed sum "
            f"{computed:g} ppm by more than {TDCG_TOLERANCE_PPM} ppm"
        )
        self.supplied = supplied
        self.computed = computed


@dataclass(frozen=True)
class GasReading:
    """One bushing's gas concentrations.

    ppm: h2, ch4, c2h6, c2h4, c2h2, co, co2 (and the optional tdcg);
    percent of volume: n2, o2.
    """

    bushing_id: str
    h2: float
    ch4: float
    c2h6: float
    c2h4: float
    c2h2: float
    co: float
    co2: float
    n2: float
    o2: float
    tdcg: Optional[float] = None

    _FIELDS_BY_GAS = {
        GasId.HYDROGEN: "h2",
        GasId.METHANE: "ch4",
        GasId.ETHANE: "c2h6",
        GasId.ETHYLENE: "c2h4",
        GasId.ACETYLENE: "c2h2",
        GasId.CARBON_MONOXIDE: "co",
        GasId.NITROGEN: "n2",
        GasId.OXYGEN: "o2",
        GasId.CARBON_DIOXIDE: "co2",
    }

    def __post_init__(self) -> None:
        if not self.bushing_id:
            raise ValueError("bushing_id must be a non-empty string")
        for name in ("h2", "ch4", "c2h6", "c2h4", "c2h2", "co", "co2", "n2", "o2"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")
        if self.tdcg is not None and not (math.isfinite(self.tdcg) and self.tdcg >= 0):
            raise ValueError(f"tdcg must be finite and non-negative, got {self.tdcg!r}")

    def value(self, gas: GasId) -> float:
        """Concentration of one gas; TDCG is the recomputed combustible sum."""
        if gas is GasId.TDCG:
            return compute_tdcg(self)
        return float(getattr(self, self._FIELDS_BY_GAS[gas]))


def compute_tdcg(reading: GasReading) -> float:
    """Sum of the six combustible-gas concentrations, in ppm.

    Raises:
        TdcgMismatchError: the reading carries a TDCG value that differs
            from the recomputed sum by more than TDCG_TOLERANCE_PPM.
    """
    total = reading.h2 + reading.ch4 + reading.c2h6 + reading.c2h4 + reading.c2h2 + reading.co
    if reading.tdcg is not None and abs(reading.tdcg - total) > TDCG_TOLERANCE_PPM:
        raise TdcgMismatchError(reading.tdcg, total)
    return float(total)


def fuzzify_gas(gas: GasId, value: float) -> Tuple[float, float, float]:
    """(normal, elevated, dangerous) degrees of one concentration."""
    entry = catalog_entry(gas)
    return (
        entry.normal.evaluate(value),
        entry.elevated.evaluate(value),
        entry.dangerous.evaluate(value),
    )


@dataclass
class GasMembershipTable:
    """Per-gas (normal, elevated, dangerous) degrees for one bushing.

    Produced by fuzzify_bushing, where every triple sums to one; the
    constructor stays permissive so synthetic tables can be built in
    diagnostics and tests.
    """

    bushing_id: str
    tdcg_ppm: float
    degrees: Dict[GasId, Tuple[float, float, float]] = field(default_factory=dict)

    def degree(self, gas: GasId, level: Level) -> float:
        triple = self.degrees[gas]
        return triple[(Level.NORMAL, Level.ELEVATED, Level.DANGEROUS).index(level)]

    def validate(self, tol: float = 1e-12) -> bool:
        """True when all ten gases are present, in range, and sum to one."""
        if set(self.degrees) != set(GasId):
            return False
        for triple in self.degrees.values():
            if any(not (0.0 <= d <= 1.0) for d in triple):
                return False
            if abs(sum(triple) - 1.0) > tol:
                return False
        return True

    def to_json_dict(self) -> Dict[str, Dict[str, float]]:
        return {
            gas.value: {
                Level.NORMAL.value: self.degrees[gas][0],
                Level.ELEVATED.value: self.degrees[gas][1],
                Level.DANGEROUS.value: self.degrees[gas][2],
            }
            for gas in GasId
            if gas in self.degrees
        }


def fuzzify_bushing(reading: GasReading) -> GasMembershipTable:
    """Fuzzify all ten criteria of one reading, including synthesized TDCG."""
    tdcg = compute_tdcg(reading)
    degrees = {gas: fuzzify_gas(gas, reading.value(gas)) for gas in GasId}
    return GasMembershipTable(bushing_id=reading.bushing_id, tdcg_ppm=tdcg, degrees=degrees)
