"""Report figures: membership-function curves and per-bushing risk summaries."""

import pathlib
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from bushingdx.defuzz import RiskAssessment, output_sets
from bushingdx.ingest import Report
from bushingdx.membership import GasId, gas_catalog

_LEVEL_STYLES = (("normal", "tab:green"), ("elevated", "tab:orange"), ("dangerous", "tab:red"))


def plot_catalog(path) -> pathlib.Path:
    """All ten gases' Normal/Elevated/Dangerous curves, one subplot per gas."""
    path = pathlib.Path(path)
    fig, axes = plt.subplots(5, 2, figsize=(9, 11))
    for ax, entry in zip(axes.flat, gas_catalog()):
        hi = entry.dangerous_onset * 1.25
        xs = np.linspace(0.0, hi, 400)
        for mf, (label, color) in zip((entry.normal, entry.elevated, entry.dangerous), _LEVEL_STYLES):
            ax.plot(xs, [mf.evaluate(x) for x in xs], color=color, label=label)
        ax.set_title(entry.gas.value.replace("_", " "), fontsize=9)
        ax.set_xlabel(entry.unit.value, fontsize=8)
        ax.set_ylim(-0.05, 1.05)
        ax.tick_params(labelsize=7)
    axes.flat[0].legend(fontsize=7, loc="center right")
    fig.suptitle("Gas membership functions")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_assessment(assessment: RiskAssessment, path) -> pathlib.Path:
    """Two panels: the 30 membership degrees, and the aggregated risk output
    with the crisp rank marked on the 0-100 axis."""
    path = pathlib.Path(path)
    fig, (ax_deg, ax_risk) = plt.subplots(1, 2, figsize=(11, 4), gridspec_kw={"width_ratios": [3, 2]})

    gases = list(GasId)
    positions = np.arange(len(gases))
    width = 0.28
    for offset, (level_idx, (label, color)) in zip((-width, 0.0, width), enumerate(_LEVEL_STYLES)):
        degrees = [assessment.table.degrees[gas][level_idx] for gas in gases]
        ax_deg.bar(positions + offset, degrees, width=width, color=color, label=label)
    ax_deg.set_xticks(positions)
    ax_deg.set_xticklabels([g.value.replace("_", "\n") for g in gases], fontsize=6)
    ax_deg.set_ylabel("degree of membership")
    ax_deg.set_ylim(0, 1.1)
    ax_deg.legend(fontsize=7)
    ax_deg.set_title("Fuzzified gas levels", fontsize=10)

    for out_set, (_, color) in zip(output_sets(), _LEVEL_STYLES):
        degree = assessment.memberships.degree(out_set.group)
        if out_set.peak_lo == out_set.peak_hi:
            ax_risk.plot([out_set.peak_lo], [degree], marker="o", color=color)
            ax_risk.vlines(out_set.peak_lo, 0, degree, color=color, alpha=0.6)
        else:
            ax_risk.hlines(degree, out_set.peak_lo, out_set.peak_hi, color=color, linewidth=3)
        ax_risk.annotate(
            f"{out_set.group.value}: {degree:.2f}",
            xy=(out_set.coefficient, degree),
            xytext=(0, 5),
            textcoords="offset points",
            ha="center",
            fontsize=7,
        )
    ax_risk.axvline(assessment.rank, color="black", linestyle="--", linewidth=1)
    ax_risk.annotate(
        f"rank {assessment.rank:.2f}\n{assessment.decision.value}",
        xy=(assessment.rank, 1.02),
        ha="center",
        fontsize=8,
    )
    ax_risk.set_xlim(0, 100)
    ax_risk.set_ylim(0, 1.15)
    ax_risk.set_xlabel("risk rank")
    ax_risk.set_ylabel("aggregated degree")
    ax_risk.set_title("Aggregated output", fontsize=10)

    fig.suptitle(f"Bushing {assessment.bushing_id}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_report_figures(report: Report, outdir) -> List[pathlib.Path]:
    """Write the catalog figure plus one risk figure per report row."""
    outdir = pathlib.Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = [plot_catalog(outdir / "membership_functions.png")]
    for row in report.rows:
        name = f"risk_{row.assessment.bushing_id}.png"
        written.append(plot_assessment(row.assessment, outdir / name))
    return written
