"""Membership functions for the ten dissolved-gas criteria.

Every criterion (seven combustible/inert gases in ppm, nitrogen and oxygen
in percent, plus total dissolved combustible gas) carries three fuzzy sets:
Normal, Elevated and Dangerous. The sets are trapezoids anchored on the
IEC 60599 / IEEE C57-104 screening limits. They are stored as breakpoint
vertices rather than slope/intercept pairs so that adjacent ramps share
their endpoints exactly: at any concentration the three degrees sum to one,
and evaluation at a published limit returns exactly 0 or 1.
"""

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple


class Unit(Enum):
    """Measurement unit of a gas concentration."""

    PPM = "ppm"
    PERCENT = "percent"


class Level(Enum):
    """Fuzzy category of a gas concentration."""

    NORMAL = "normal"
    ELEVATED = "elevated"
    DANGEROUS = "dangerous"


class GasId(Enum):
    """The ten criteria evaluated per bushing.

    Declaration order is the canonical ordering used for feature vectors
    and serialized tables.
    """

    HYDROGEN = "hydrogen"
    METHANE = "methane"
    ETHANE = "ethane"
    ETHYLENE = "ethylene"
    ACETYLENE = "acetylene"
    CARBON_MONOXIDE = "carbon_monoxide"
    NITROGEN = "nitrogen"
    OXYGEN = "oxygen"
    CARBON_DIOXIDE = "carbon_dioxide"
    TDCG = "tdcg"

    @property
    def unit(self) -> Unit:
        if self in (GasId.NITROGEN, GasId.OXYGEN):
            return Unit.PERCENT
        return Unit.PPM


#: Gases whose concentrations sum to the total dissolved combustible gas.
COMBUSTIBLES: Tuple[GasId, ...] = (
    GasId.HYDROGEN,
    GasId.METHANE,
    GasId.ETHANE,
    GasId.ETHYLENE,
    GasId.ACETYLENE,
    GasId.CARBON_MONOXIDE,
)


@dataclass(frozen=True)
class MembershipFunction:
    """Clamped piecewise-linear map from concentration to degree in [0, 1].

    Attributes:
        breakpoints: ordered (x, y) vertices; x strictly increasing.
        left_value: degree returned for x below the first vertex.
        right_value: degree returned for x above the last vertex.
    """

    breakpoints: Tuple[Tuple[float, float], ...]
    left_value: float
    right_value: float

    def __post_init__(self) -> None:
        pts = tuple((float(x), float(y)) for x, y in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        object.__setattr__(self, "left_value", float(self.left_value))
        object.__setattr__(self, "right_value", float(self.right_value))
        if not pts:
            raise ValueError("membership function needs at least one vertex")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise ValueError(f"vertex x-coordinates must be strictly increasing, got {x0} then {x1}")
        for y in [y for _, y in pts] + [self.left_value, self.right_value]:
            if not (math.isfinite(y) and 0.0 <= y <= 1.0):
                raise ValueError(f"degrees must lie in [0, 1], got {y}")

    def evaluate(self, x: float) -> float:
        """Degree of membership at concentration x.

        Exact at vertices; linear between them; clamped to the plateau
        values outside the vertex range.
        """
        x = float(x)
        if not math.isfinite(x) or x < 0.0:
            raise ValueError(f"concentration must be finite and non-negative, got {x!r}")
        pts = self.breakpoints
        if x < pts[0][0]:
            return self.left_value
        if x > pts[-1][0]:
            return self.right_value
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 <= x <= x1:
                if x == x0:
                    return y0
                if x == x1:
                    return y1
                t = (x - x0) / (x1 - x0)
                return y0 + (y1 - y0) * t
        return pts[0][1]  # single-vertex function, x == vertex


def eval_mf(mf: MembershipFunction, x: float) -> float:
    """Evaluate a membership function at concentration x."""
    return mf.evaluate(x)


@dataclass(frozen=True)
class GasCatalogEntry:
    """The three fuzzy sets of one gas, plus its unit."""

    gas: GasId
    unit: Unit
    normal: MembershipFunction
    elevated: MembershipFunction
    dangerous: MembershipFunction

    def by_level(self, level: Level) -> MembershipFunction:
        return {
            Level.NORMAL: self.normal,
            Level.ELEVATED: self.elevated,
            Level.DANGEROUS: self.dangerous,
        }[level]

    @property
    def dangerous_onset(self) -> float:
        """Concentration at which the Dangerous plateau begins."""
        return self.dangerous.breakpoints[-1][0]


# Screening limits per gas: (normal plateau end, normal zero,
# elevated plateau end, dangerous plateau start). Nitrogen and oxygen are
# interpreted in percent of volume, everything else in ppm.
_LIMITS: Dict[GasId, Tuple[float, float, float, float]] = {
    GasId.HYDROGEN: (135.0, 150.0, 900.0, 1000.0),
    GasId.METHANE: (23.0, 25.0, 72.0, 80.0),
    GasId.ETHANE: (9.0, 10.0, 32.0, 35.0),
    GasId.ETHYLENE: (18.0, 20.0, 90.0, 100.0),
    GasId.ACETYLENE: (14.0, 15.0, 63.0, 70.0),
    GasId.CARBON_MONOXIDE: (450.0, 500.0, 900.0, 1000.0),
    GasId.NITROGEN: (0.9, 1.0, 9.0, 10.0),
    GasId.OXYGEN: (0.09, 0.10, 0.18, 0.20),
    GasId.CARBON_DIOXIDE: (9000.0, 10000.0, 13500.0, 15000.0),
    GasId.TDCG: (648.0, 720.0, 4500.0, 5000.0),
}


def _entry(gas: GasId) -> GasCatalogEntry:
    a, b, c, d = _LIMITS[gas]
    return GasCatalogEntry(
        gas=gas,
        unit=gas.unit,
        normal=MembershipFunction(((a, 1.0), (b, 0.0)), left_value=1.0, right_value=0.0),
        elevated=MembershipFunction(((a, 0.0), (b, 1.0), (c, 1.0), (d, 0.0)), left_value=0.0, right_value=0.0),
        dangerous=MembershipFunction(((c, 0.0), (d, 1.0)), left_value=0.0, right_value=1.0),
    )


@lru_cache(maxsize=1)
def _catalog() -> Tuple[GasCatalogEntry, ...]:
    return tuple(_entry(gas) for gas in GasId)


def gas_catalog() -> List[GasCatalogEntry]:
    """All ten catalog entries, in canonical gas order."""
    return list(_catalog())


def catalog_entry(gas: GasId) -> GasCatalogEntry:
    """Catalog entry for one gas."""
    return _catalog()[list(GasId).index(gas)]


@dataclass(frozen=True)
class CatalogFinding:
    """One violated invariant found by validate_catalog.

    ``lo``/``hi`` bracket the concentrations where the violation was
    observed, when the check is pointwise.
    """

    gas: GasId
    check: str
    detail: str
    lo: Optional[float] = None
    hi: Optional[float] = None


def _sample_grid(entry: GasCatalogEntry, points: int) -> List[float]:
    hi = entry.dangerous_onset * 1.5
    return [hi * i / (points - 1) for i in range(points)]


def validate_catalog(
    entries: Sequence[GasCatalogEntry], points: int = 2001, tol: float = 1e-9
) -> List[CatalogFinding]:
    """Check partition-of-unity and monotonicity on a dense sample grid.

    Returns one finding per violated invariant; an empty list means the
    catalog is valid. Structural problems (vertex ordering, degree range)
    are reported rather than raised so a damaged catalog can be diagnosed.
    """
    findings: List[CatalogFinding] = []
    for entry in entries:
        for level in Level:
            mf = entry.by_level(level)
            xs = [x for x, _ in mf.breakpoints]
            if any(not x0 < x1 for x0, x1 in zip(xs, xs[1:])):
                findings.append(
                    CatalogFinding(entry.gas, "structure", f"{level.value}: vertex x-coordinates not strictly increasing")
                )
            ys = [y for _, y in mf.breakpoints] + [mf.left_value, mf.right_value]
            if any(not (math.isfinite(y) and 0.0 <= y <= 1.0) for y in ys):
                findings.append(CatalogFinding(entry.gas, "range", f"{level.value}: degree outside [0, 1]"))
        if any(f.gas is entry.gas and f.check == "structure" for f in findings):
            continue  # evaluation on a malformed entry is meaningless

        grid = _sample_grid(entry, points)
        bad_sum = [x for x in grid if abs(entry.normal.evaluate(x) + entry.elevated.evaluate(x) + entry.dangerous.evaluate(x) - 1.0) > tol]
        if bad_sum:
            findings.append(
                CatalogFinding(
                    entry.gas,
                    "partition",
                    f"normal + elevated + dangerous != 1 at {len(bad_sum)} sample points",
                    lo=min(bad_sum),
                    hi=max(bad_sum),
                )
            )
        for name, mf, sign in (("normal", entry.normal, -1.0), ("dangerous", entry.dangerous, 1.0)):
            values = [mf.evaluate(x) for x in grid]
            bad = [grid[i] for i in range(len(grid) - 1) if sign * (values[i + 1] - values[i]) < -tol]
            if bad:
                direction = "non-increasing" if sign < 0 else "non-decreasing"
                findings.append(
                    CatalogFinding(entry.gas, f"monotonic_{name}", f"{name} is not {direction}", lo=min(bad), hi=max(bad))
                )
    return findings


def catalog_to_json(entries: Optional[Sequence[GasCatalogEntry]] = None) -> str:
    """Serialize the catalog for documentation and cross-implementation diffing."""
    if entries is None:
        entries = gas_catalog()

    def mf_doc(mf: MembershipFunction) -> dict:
        return {
            "left_value": mf.left_value,
            "breakpoints": [[x, y] for x, y in mf.breakpoints],
            "right_value": mf.right_value,
        }

    doc = [
        {
            "gas": entry.gas.value,
            "unit": entry.unit.value,
            "normal": mf_doc(entry.normal),
            "elevated": mf_doc(entry.elevated),
            "dangerous": mf_doc(entry.dangerous),
        }
        for entry in entries
    ]
    return json.dumps(doc, indent=2) + "\n"
