"""CSV ingestion diagnostics and report serialization."""

import json

import pytest

from bushingdx.defuzz import Decision, assess
from bushingdx.ingest import (
    CsvFormatError,
    Report,
    ReportRow,
    Severity,
    parse_dga_csv,
    report_from_json,
    write_report,
)
from bushingdx.mlp import neuro_fuzzy_classify

HEADER = "bushing_id,h2_ppm,ch4_ppm,c2h6_ppm,c2h4_ppm,c2h2_ppm,co_ppm,co2_ppm,n2_pct,o2_pct"
REFERENCE_ROW = "200323106,5782,240,22,2,0,44,72,4.58,0.2535,"


class TestParse:
    def test_reference_row(self):
        readings, diagnostics = parse_dga_csv(HEADER + ",tdcg_ppm\n" + REFERENCE_ROW + "\n")
        assert diagnostics == []
        assert len(readings) == 1
        reading = readings[0]
        assert reading.bushing_id == "200323106"
        assert reading.h2 == 5782
        assert reading.n2 == 4.58
        assert reading.tdcg is None

    def test_header_without_tdcg_column(self):
        readings, diagnostics = parse_dga_csv(HEADER + "\n" + REFERENCE_ROW.rstrip(",") + "\n")
        assert diagnostics == []
        assert len(readings) == 1

    def test_supplied_tdcg_checksum_passes(self):
        text = HEADER + ",tdcg_ppm\n200323106,5782,240,22,2,0,44,72,4.58,0.2535,6090\n"
        readings, diagnostics = parse_dga_csv(text)
        assert diagnostics == []
        assert readings[0].tdcg == 6090

    def test_supplied_tdcg_mismatch_is_row_error(self):
        text = HEADER + ",tdcg_ppm\n200323106,5782,240,22,2,0,44,72,4.58,0.2535,9999\n"
        readings, diagnostics = parse_dga_csv(text)
        assert readings == []
        assert len(diagnostics) == 1
        assert diagnostics[0].severity is Severity.ERROR
        assert "9999" in diagnostics[0].message and "6090" in diagnostics[0].message

    def test_near_miss_tdcg_is_a_warning(self):
        text = HEADER + ",tdcg_ppm\n200323106,5782,240,22,2,0,44,72,4.58,0.2535,6090.3\n"
        readings, diagnostics = parse_dga_csv(text)
        assert len(readings) == 1
        assert len(diagnostics) == 1
        assert diagnostics[0].severity is Severity.WARNING

    def test_negative_cell_is_row_error(self):
        text = HEADER + "\nbad,-5,240,22,2,0,44,72,4.58,0.2535\n"
        readings, diagnostics = parse_dga_csv(text)
        assert readings == []
        assert len(diagnostics) == 1
        assert diagnostics[0].row == 2
        assert diagnostics[0].severity is Severity.ERROR
        assert "h2_ppm" in diagnostics[0].message

    def test_non_numeric_cell_is_row_error(self):
        text = HEADER + "\nbad,5782,oops,22,2,0,44,72,4.58,0.2535\n"
        readings, diagnostics = parse_dga_csv(text)
        assert readings == []
        assert "ch4_ppm" in diagnostics[0].message

    def test_missing_header_is_fatal(self):
        with pytest.raises(CsvFormatError):
            parse_dga_csv(REFERENCE_ROW + "\n")

    def test_misordered_header_is_fatal(self):
        shuffled = HEADER.replace("h2_ppm,ch4_ppm", "ch4_ppm,h2_ppm")
        with pytest.raises(CsvFormatError):
            parse_dga_csv(shuffled + "\n" + REFERENCE_ROW.rstrip(",") + "\n")

    def test_empty_input_is_fatal(self):
        with pytest.raises(CsvFormatError, match="empty"):
            parse_dga_csv("")

    def test_row_count_conservation(self, fixture_csv_text):
        # two broken rows injected in the middle
        lines = fixture_csv_text.strip().splitlines()
        lines.insert(4, "broken,-1,0,0,0,0,0,0,0,0,")
        lines.insert(7, "short,1,2")
        text = "\n".join(lines) + "\n"
        readings, diagnostics = parse_dga_csv(text)
        errors = [d for d in diagnostics if d.severity is Severity.ERROR]
        assert len(readings) + len(errors) == 12

    @pytest.mark.parametrize(
        "junk",
        [
            "\n\n\n",
            "bushing_id\n",
            HEADER + "\n" + ",,,,,,,,,\n",
            HEADER + "\nid,1,2,3,4,5,6,7,8\n",
            HEADER + "\nid,1,2,3,4,5,6,7,8,inf\n",
            HEADER + "\nid,1,2,3,4,5,6,7,8,nan\n",
        ],
    )
    def test_no_row_data_crashes(self, junk):
        try:
            readings, diagnostics = parse_dga_csv(junk)
        except CsvFormatError:
            return  # header-level rejection is the documented fatal path
        assert isinstance(readings, list)
        assert isinstance(diagnostics, list)

    def test_preserves_input_order(self, fixture_csv_text):
        readings, _ = parse_dga_csv(fixture_csv_text)
        assert [r.bushing_id for r in readings] == [
            "200323106",
            "200373387",
            "200323104",
            "200323105",
            "200302381",
            "200355292",
            "200367794",
            "200378937",
            "200328202",
            "200365229",
        ]


@pytest.fixture(scope="module")
def fixture_report(fixture_csv_text) -> Report:
    readings, _ = parse_dga_csv(fixture_csv_text)
    rows = []
    for reading in readings:
        assessment = assess(reading)
        rows.append(
            ReportRow(
                assessment=assessment,
                neuro_fuzzy=neuro_fuzzy_classify(assessment.rank),
                nn=assessment.decision,  # stand-in column for serialization tests
            )
        )
    return Report(rows=rows)


class TestReport:
    def test_csv_mirrors_comparison_table(self, fixture_report):
        text = write_report(fixture_report, format="csv")
        lines = text.strip().splitlines()
        assert lines[0] == "bushing_id,rank,fuzzy,neuro_fuzzy,nn"
        assert len(lines) == 12  # header + 10 rows + accuracy footer
        assert lines[1] == "200323106,51.666667,Reject,Reject,Reject"
        assert lines[-1].startswith("accuracy,")

    def test_accuracy_footer_values(self, fixture_report):
        footer = write_report(fixture_report, format="csv").strip().splitlines()[-1]
        assert footer == "accuracy,,100.0,100.0,100.0"

    def test_json_includes_decision_and_degrees(self, fixture_report):
        single = Report(rows=[r for r in fixture_report.rows if r.assessment.decision is Decision.ACCEPT][:1])
        doc = json.loads(write_report(single, format="json"))
        assert doc["rows"][0]["decision"] == "Accept"
        assert len(doc["rows"][0]["memberships"]) == 10
        assert doc["summary"]["rows"] == 1

    def test_json_round_trip_is_byte_identical(self, fixture_report):
        text = write_report(fixture_report, format="json")
        assert write_report(report_from_json(text), format="json") == text

    def test_empty_report_is_a_usage_error(self):
        with pytest.raises(ValueError, match="no rows"):
            write_report(Report(rows=[]), format="json")

    def test_unknown_format_rejected(self, fixture_report):
        with pytest.raises(ValueError, match="format"):
            write_report(fixture_report, format="xml")

    def test_summary_counts_match_rows(self, fixture_report):
        summary = fixture_report.summary()
        assert summary["rows"] == len(fixture_report.rows) == 10
        for value in summary["agreement"].values():
            assert 0.0 <= value <= 100.0

    def test_optional_columns_absent_without_classifiers(self, fixture_report):
        plain = Report(rows=[ReportRow(assessment=r.assessment) for r in fixture_report.rows])
        text = write_report(plain, format="csv")
        assert text.splitlines()[0] == "bushing_id,rank,fuzzy"
        doc = json.loads(write_report(plain, format="json"))
        assert "nn" not in doc["rows"][0]
        assert "agreement" in doc["summary"] and "nn" not in doc["summary"]["agreement"]
