"""Command-line surface for batch bushing diagnosis.

Subcommands: fuzzify, diagnose, rules check, rulecount, train, classify,
compare. Human-readable tables go to stdout; machine formats are written
only to paths given with --output/--format. Exit codes: 0 success, 1 usage
error, 2 data error.
"""

import argparse
import pathlib
import sys
from typing import List, Optional, Sequence

from bushingdx import mlp
from bushingdx.defuzz import Decision, assess
from bushingdx.figures import render_report_figures
from bushingdx.fuzzify import fuzzify_bushing
from bushingdx.ingest import Report, ReportRow, RowDiagnostic, load_dga_csv, write_report
from bushingdx.membership import GasId
from bushingdx.rules import RuleSyntaxError, default_ruleset, load_ruleset, rule_count

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bushingdx", description="DGA-based condition assessment of HV bushings")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_output_flags(p):
        p.add_argument("--output", type=pathlib.Path, help="write a machine-readable report to this path")
        p.add_argument("--format", choices=("json", "csv"), default="json", help="report format for --output")

    p = sub.add_parser("fuzzify", help="CSV readings to per-gas membership tables")
    p.add_argument("--input", type=pathlib.Path, required=True)
    add_output_flags(p)
    p.set_defaults(func=cmd_fuzzify)

    p = sub.add_parser("diagnose", help="CSV readings to rank/decision report")
    p.add_argument("--input", type=pathlib.Path, required=True)
    p.add_argument("--ruleset", type=pathlib.Path, help="rule-DSL file (default: shipped ruleset)")
    add_output_flags(p)
    p.add_argument("--figures", type=pathlib.Path, help="directory for rendered report figures")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("rules", help="rule-DSL utilities")
    rules_sub = p.add_subparsers(dest="rules_command", required=True, parser_class=_Parser)
    pc = rules_sub.add_parser("check", help="parse and validate a rule file")
    pc.add_argument("path", type=pathlib.Path)
    pc.set_defaults(func=cmd_rules_check)

    p = sub.add_parser("rulecount", help="theoretical rule-table size")
    p.add_argument("--categories", type=int, required=True)
    p.add_argument("--criteria", type=int, required=True)
    p.set_defaults(func=cmd_rulecount)

    p = sub.add_parser("train", help="train the network against fuzzy (or supplied) labels")
    p.add_argument("--input", type=pathlib.Path, required=True)
    p.add_argument("--labels", type=pathlib.Path, help="CSV of bushing_id,label overriding fuzzy-derived labels")
    p.add_argument("--ruleset", type=pathlib.Path)
    p.add_argument("--output", type=pathlib.Path, required=True, help="model file to write")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--epochs", type=int, default=3000)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify readings with a trained model")
    p.add_argument("--model", type=pathlib.Path, required=True)
    p.add_argument("--input", type=pathlib.Path, required=True)
    add_output_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="fuzzy vs neuro-fuzzy vs network comparison table")
    p.add_argument("--input", type=pathlib.Path, required=True)
    p.add_argument("--ruleset", type=pathlib.Path)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--epochs", type=int, default=3000)
    p.add_argument("--learning-rate", type=float, default=0.5)
    add_output_flags(p)
    p.add_argument("--figures", type=pathlib.Path, help="directory for rendered report figures")
    p.set_defaults(func=cmd_compare)

    return parser


def _print_diagnostics(diagnostics: Sequence[RowDiagnostic]) -> None:
    for diag in diagnostics:
        print(f"row {diag.row}: {diag.severity.value}: {diag.message}", file=sys.stderr)


def _load_readings(path: pathlib.Path):
    readings, diagnostics = load_dga_csv(path)
    _print_diagnostics(diagnostics)
    if not readings:
        raise ValueError(f"no valid readings in {path}")
    return readings


def _load_ruleset(path: Optional[pathlib.Path]):
    return load_ruleset(path) if path is not None else default_ruleset()


def _print_table(header: List[str], rows: List[List[str]]) -> None:
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(len(header))]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


def _write_output(report: Report, args) -> None:
    if args.output is not None:
        args.output.write_text(write_report(report, args.format), encoding="utf-8")
        print(f"wrote {args.format} report to {args.output}", file=sys.stderr)


def cmd_fuzzify(args) -> int:
    readings = _load_readings(args.input)
    rows = []
    for reading in readings:
        table = fuzzify_bushing(reading)
        for gas in GasId:
            n, e, d = table.degrees[gas]
            rows.append([reading.bushing_id, gas.value, f"{n:.4f}", f"{e:.4f}", f"{d:.4f}"])
    if args.output is not None:
        if args.format == "json":
            import json

            doc = [
                {"bushing_id": r.bushing_id, "tdcg_ppm": t.tdcg_ppm, "memberships": t.to_json_dict()}
                for r, t in ((reading, fuzzify_bushing(reading)) for reading in readings)
            ]
            args.output.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        else:
            lines = ["bushing_id,gas,normal,elevated,dangerous"]
            lines += [",".join(row) for row in rows]
            args.output.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {args.format} membership tables to {args.output}", file=sys.stderr)
    else:
        _print_table(["bushing_id", "gas", "normal", "elevated", "dangerous"], rows)
    return 0


def _diagnose_report(args) -> Report:
    readings = _load_readings(args.input)
    ruleset = _load_ruleset(args.ruleset)
    return Report(rows=[ReportRow(assessment=assess(r, ruleset)) for r in readings])


def cmd_diagnose(args) -> int:
    report = _diagnose_report(args)
    _write_output(report, args)
    if args.output is None:
        _print_table(
            ["bushing_id", "rank", "decision"],
            [[row.assessment.bushing_id, f"{row.assessment.rank:.6f}", row.assessment.decision.value] for row in report.rows],
        )
    if args.figures is not None:
        written = render_report_figures(report, args.figures)
        print(f"wrote {len(written)} figures to {args.figures}", file=sys.stderr)
    return 0


def cmd_rules_check(args) -> int:
    ruleset = load_ruleset(args.path)
    counts: dict = {}
    for rule in ruleset:
        counts[rule.consequent.value] = counts.get(rule.consequent.value, 0) + 1
    by_group = ", ".join(f"{name}: {count}" for name, count in sorted(counts.items()))
    print(f"OK: {len(ruleset)} rules ({by_group})")
    missing = ruleset.missing_groups()
    if missing:
        names = ", ".join(sorted(g.value for g in missing))
        print(f"warning: no rule concludes risk group(s): {names}", file=sys.stderr)
    return 0


def cmd_rulecount(args) -> int:
    print(rule_count(args.categories, args.criteria))
    return 0


def _read_labels(path: pathlib.Path) -> dict:
    labels = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != "bushing_id,label":
        raise ValueError("labels file must start with header 'bushing_id,label'")
    for line in lines[1:]:
        if not line.strip():
            continue
        bushing_id, _, label = line.partition(",")
        try:
            labels[bushing_id.strip()] = Decision(label.strip())
        except ValueError:
            raise ValueError(f"unknown label {label.strip()!r} for bushing {bushing_id.strip()!r}") from None
    return labels


def cmd_train(args) -> int:
    readings = _load_readings(args.input)
    if args.labels is not None:
        by_id = _read_labels(args.labels)
        missing = [r.bushing_id for r in readings if r.bushing_id not in by_id]
        if missing:
            raise ValueError(f"labels file is missing bushings: {', '.join(missing)}")
        decisions = [by_id[r.bushing_id] for r in readings]
    else:
        ruleset = _load_ruleset(args.ruleset)
        decisions = [assess(r, ruleset).decision for r in readings]
    dataset = mlp.build_dataset(readings, decisions)
    model = mlp.init_model(args.seed)
    model, losses = mlp.train(model, dataset, epochs=args.epochs, learning_rate=args.learning_rate)
    hits = sum(1 for r, d in zip(readings, decisions) if mlp.classify(model, r) == d)
    metadata = {
        "seed": args.seed,
        "epochs": args.epochs,
        "learning_rate": args.learning_rate,
        "final_loss": losses[-1],
    }
    mlp.save_model(model, args.output, metadata)
    print(f"trained {args.epochs} epochs, final loss {losses[-1]:.6f}, training agreement {hits}/{len(readings)}")
    print(f"wrote model to {args.output}", file=sys.stderr)
    return 0


def cmd_classify(args) -> int:
    model, _ = mlp.load_model(args.model)
    readings = _load_readings(args.input)
    rows = [[r.bushing_id, f"{mlp.score(model, r):.6f}", mlp.classify(model, r).value] for r in readings]
    if args.output is not None:
        if args.format == "json":
            import json

            doc = [{"bushing_id": i, "score": float(s), "decision": d} for i, s, d in rows]
            args.output.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        else:
            lines = ["bushing_id,score,decision"] + [",".join(row) for row in rows]
            args.output.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {args.format} decisions to {args.output}", file=sys.stderr)
    else:
        _print_table(["bushing_id", "score", "decision"], rows)
    return 0


def cmd_compare(args) -> int:
    readings = _load_readings(args.input)
    ruleset = _load_ruleset(args.ruleset)
    assessments = [assess(r, ruleset) for r in readings]
    decisions = [a.decision for a in assessments]
    dataset = mlp.build_dataset(readings, decisions)
    model = mlp.init_model(args.seed)
    mlp.train(model, dataset, epochs=args.epochs, learning_rate=args.learning_rate)
    report = Report(
        rows=[
            ReportRow(
                assessment=a,
                neuro_fuzzy=mlp.neuro_fuzzy_classify(a.rank),
                nn=mlp.classify(model, r),
            )
            for a, r in zip(assessments, readings)
        ]
    )
    _write_output(report, args)
    if args.output is None:
        _print_table(
            ["bushing_id", "rank", "fuzzy", "neuro_fuzzy", "nn"],
            [
                [
                    row.assessment.bushing_id,
                    f"{row.assessment.rank:.6f}",
                    row.assessment.decision.value,
                    row.neuro_fuzzy.value,
                    row.nn.value,
                ]
                for row in report.rows
            ],
        )
        agreement = report.summary()["agreement"]
        print(
            f"agreement vs fuzzy: neuro_fuzzy {agreement['neuro_fuzzy']:.1f}%, nn {agreement['nn']:.1f}%"
        )
    if args.figures is not None:
        written = render_report_figures(report, args.figures)
        print(f"wrote {len(written)} figures to {args.figures}", file=sys.stderr)
    return 0


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except RuleSyntaxError as exc:
        print(f"rule error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
