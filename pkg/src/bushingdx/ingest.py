"""CSV ingestion of DGA readings and assessment-report serialization.

Input format: comma-separated, '.' decimal point, exact case-sensitive
header ``bushing_id,h2_ppm,ch4_ppm,c2h6_ppm,c2h4_ppm,c2h2_ppm,co_ppm,
co2_ppm,n2_pct,o2_pct`` with an optional trailing ``tdcg_ppm`` column.
Percent columns carry raw percent values (4.58 means 4.58%). A bad header
is fatal; a bad row becomes a diagnostic and is skipped, so parsing never
raises on row data.
"""

import csv
import io
import json
import math
import pathlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from bushingdx.defuzz import Decision, RiskAssessment
from bushingdx.fuzzify import (
    TDCG_TOLERANCE_PPM,
    GasMembershipTable,
    GasReading,
    TdcgMismatchError,
    compute_tdcg,
)
from bushingdx.membership import GasId
from bushingdx.rules import AggregatedMembership, RiskGroup

HEADER = ["bushing_id", "h2_ppm", "ch4_ppm", "c2h6_ppm", "c2h4_ppm", "c2h2_ppm", "co_ppm", "co2_ppm", "n2_pct", "o2_pct"]
HEADER_WITH_TDCG = HEADER + ["tdcg_ppm"]


class CsvFormatError(ValueError):
    """The file-level CSV structure (header) is wrong; nothing was parsed."""


class Severity(Enum):
    WARNING = "warning"
    ERROR = "error"


@dataclass(frozen=True)
class RowDiagnostic:
    """One anomaly found while parsing; row numbers are 1-based file lines."""

    row: int
    severity: Severity
    message: str


def _parse_cell(name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"{name} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {text!r}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {text!r}")
    return value


def parse_dga_csv(text: str) -> Tuple[List[GasReading], List[RowDiagnostic]]:
    """Parse CSV text into readings plus per-row diagnostics.

    Rows that produce an error diagnostic yield no reading; the reading
    list preserves input row order.

    Raises:
        CsvFormatError: missing or misordered header.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("input is empty: header row required") from None
    if header != HEADER and header != HEADER_WITH_TDCG:
        raise CsvFormatError(f"bad header: expected {','.join(HEADER)}[,tdcg_ppm], got {','.join(header)}")
    has_tdcg = header == HEADER_WITH_TDCG

    readings: List[GasReading] = []
    diagnostics: List[RowDiagnostic] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) != len(header):
            diagnostics.append(
                RowDiagnostic(line_no, Severity.ERROR, f"expected {len(header)} fields, got {len(row)}")
            )
            continue
        try:
            bushing_id = row[0].strip()
            if not bushing_id:
                raise ValueError("bushing_id is empty")
            values = [_parse_cell(HEADER[i], row[i].strip()) for i in range(1, 10)]
            tdcg: Optional[float] = None
            if has_tdcg and row[10].strip() != "":
                tdcg = _parse_cell("tdcg_ppm", row[10].strip())
            reading = GasReading(
                bushing_id=bushing_id,
                h2=values[0],
                ch4=values[1],
                c2h6=values[2],
                c2h4=values[3],
                c2h2=values[4],
                co=values[5],
                co2=values[6],
                n2=values[7],
                o2=values[8],
                tdcg=tdcg,
            )
            computed = compute_tdcg(reading)  # raises on checksum mismatch
            if tdcg is not None and tdcg != computed:
                diagnostics.append(
                    RowDiagnostic(
                        line_no,
                        Severity.WARNING,
                        f"supplied tdcg_ppm {tdcg:g} differs from computed {computed:g} "
                        f"(within the {TDCG_TOLERANCE_PPM} ppm tolerance); the computed value is used",
                    )
                )
        except (ValueError, TdcgMismatchError) as exc:
            diagnostics.append(RowDiagnostic(line_no, Severity.ERROR, str(exc)))
            continue
        readings.append(reading)
    return readings, diagnostics


def load_dga_csv(path) -> Tuple[List[GasReading], List[RowDiagnostic]]:
    return parse_dga_csv(pathlib.Path(path).read_text(encoding="utf-8"))


# --- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    """One bushing's assessment, with optional classifier columns."""

    assessment: RiskAssessment
    neuro_fuzzy: Optional[Decision] = None
    nn: Optional[Decision] = None


@dataclass
class Report:
    """Assessments plus the agreement summary against the fuzzy decision."""

    rows: List[ReportRow] = field(default_factory=list)

    def has_neuro_fuzzy(self) -> bool:
        return any(row.neuro_fuzzy is not None for row in self.rows)

    def has_nn(self) -> bool:
        return any(row.nn is not None for row in self.rows)

    def summary(self) -> dict:
        """Row count and per-method percent agreement with the fuzzy column."""
        n = len(self.rows)
        agreement: Dict[str, float] = {"fuzzy": 100.0}
        if self.has_neuro_fuzzy():
            hits = sum(1 for r in self.rows if r.neuro_fuzzy == r.assessment.decision)
            agreement["neuro_fuzzy"] = 100.0 * hits / n
        if self.has_nn():
            hits = sum(1 for r in self.rows if r.nn == r.assessment.decision)
            agreement["nn"] = 100.0 * hits / n
        return {"rows": n, "agreement": agreement}


def write_report(report: Report, format: str = "json") -> str:
    """Serialize a report; 'json' keeps all intermediates, 'csv' mirrors the
    rank/decision comparison table with an accuracy footer.

    Raises:
        ValueError: empty report or unknown format.
    """
    if not report.rows:
        raise ValueError("report has no rows")
    if format == "json":
        return _report_json(report)
    if format == "csv":
        return _report_csv(report)
    raise ValueError(f"unknown report format {format!r} (expected 'json' or 'csv')")


def _report_json(report: Report) -> str:
    rows = []
    for row in report.rows:
        doc = row.assessment.to_json_dict()
        if row.neuro_fuzzy is not None:
            doc["neuro_fuzzy"] = row.neuro_fuzzy.value
        if row.nn is not None:
            doc["nn"] = row.nn.value
        rows.append(doc)
    return json.dumps({"rows": rows, "summary": report.summary()}, indent=2) + "\n"


def _report_csv(report: Report) -> str:
    columns = ["bushing_id", "rank", "fuzzy"]
    if report.has_neuro_fuzzy():
        columns.append("neuro_fuzzy")
    if report.has_nn():
        columns.append("nn")
    lines = [",".join(columns)]
    for row in report.rows:
        cells = [row.assessment.bushing_id, f"{row.assessment.rank:.6f}", row.assessment.decision.value]
        if report.has_neuro_fuzzy():
            cells.append(row.neuro_fuzzy.value if row.neuro_fuzzy is not None else "")
        if report.has_nn():
            cells.append(row.nn.value if row.nn is not None else "")
        lines.append(",".join(cells))
    agreement = report.summary()["agreement"]
    footer = ["accuracy", "", f"{agreement['fuzzy']:.1f}"]
    if report.has_neuro_fuzzy():
        footer.append(f"{agreement['neuro_fuzzy']:.1f}")
    if report.has_nn():
        footer.append(f"{agreement['nn']:.1f}")
    lines.append(",".join(footer))
    return "\n".join(lines) + "\n"


def report_from_json(text: str) -> Report:
    """Rebuild a Report from its JSON serialization (write_report inverse)."""
    doc = json.loads(text)
    rows: List[ReportRow] = []
    for row_doc in doc["rows"]:
        gases = row_doc["gases"]
        reading = GasReading(
            bushing_id=row_doc["bushing_id"],
            h2=gases[GasId.HYDROGEN.value],
            ch4=gases[GasId.METHANE.value],
            c2h6=gases[GasId.ETHANE.value],
            c2h4=gases[GasId.ETHYLENE.value],
            c2h2=gases[GasId.ACETYLENE.value],
            co=gases[GasId.CARBON_MONOXIDE.value],
            co2=gases[GasId.CARBON_DIOXIDE.value],
            n2=gases[GasId.NITROGEN.value],
            o2=gases[GasId.OXYGEN.value],
            tdcg=gases[GasId.TDCG.value],
        )
        degrees = {
            gas: (
                row_doc["memberships"][gas.value]["normal"],
                row_doc["memberships"][gas.value]["elevated"],
                row_doc["memberships"][gas.value]["dangerous"],
            )
            for gas in GasId
        }
        table = GasMembershipTable(bushing_id=reading.bushing_id, tdcg_ppm=gases[GasId.TDCG.value], degrees=degrees)
        agg = AggregatedMembership(
            lr=row_doc["aggregated"][RiskGroup.LOW.value],
            mr=row_doc["aggregated"][RiskGroup.MEDIUM.value],
            hr=row_doc["aggregated"][RiskGroup.HIGH.value],
        )
        assessment = RiskAssessment(
            bushing_id=reading.bushing_id,
            reading=reading,
            table=table,
            memberships=agg,
            rank=row_doc["rank"],
            decision=Decision(row_doc["decision"]),
        )
        rows.append(
            ReportRow(
                assessment=assessment,
                neuro_fuzzy=Decision(row_doc["neuro_fuzzy"]) if "neuro_fuzzy" in row_doc else None,
                nn=Decision(row_doc["nn"]) if "nn" in row_doc else None,
            )
        )
    return Report(rows=rows)
