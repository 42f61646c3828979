"""Evaluation report rendering: a delimited summary plus matplotlib
figures (per-dimension scatter of predicted vs observed, and a bar chart
of the correlations), written side by side into one directory.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")  # render to files; no display required

import matplotlib.pyplot as plt
import numpy as np

from .learn import Dimension
from .stats import pearson

# dimension accent colors, same assignment the extension badges use
DIMENSION_COLORS = {
    Dimension.ACTIONABILITY: "#2e8b57",
    Dimension.KNOWLEDGE: "#1e6fd9",
    Dimension.EMOTION: "#d4a017",
}

REPORT_CSV_COLUMNS = ("dimension", "n", "pearson_r", "p_value")


@dataclass(frozen=True)
class ReportArtifacts:
    csv_path: Path
    scatter_paths: dict
    correlations_path: Path


def write_evaluation_report(pairs: Mapping[Dimension, tuple], out_dir) -> ReportArtifacts:
    """Write report.csv, one scatter PNG per dimension, and a correlation
    bar chart into out_dir. `pairs` maps dimension -> (predicted, observed).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    correlations = {}
    for dim in Dimension:
        if dim not in pairs:
            continue
        preds, truth = pairs[dim]
        preds = np.asarray(preds, dtype=np.float64)
        truth = np.asarray(truth, dtype=np.float64)
        r, p = pearson(preds, truth)
        correlations[dim] = r
        rows.append({"dimension": dim.value, "n": len(preds),
                     "pearson_r": repr(r), "p_value": repr(p)})

    csv_path = out / "report.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=REPORT_CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)

    scatter_paths = {}
    for dim in correlations:
        preds, truth = pairs[dim]
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.scatter(truth, preds, s=12, alpha=0.6, color=DIMENSION_COLORS[dim])
        ax.set_xlabel("observed rating")
        ax.set_ylabel("predicted score")
        ax.set_title(f"{dim.value} (r = {correlations[dim]:.3f})")
        fig.tight_layout()
        path = out / f"scatter_{dim.value}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        scatter_paths[dim] = path

    fig, ax = plt.subplots(figsize=(5, 4))
    names = [dim.value for dim in correlations]
    values = [correlations[dim] for dim in correlations]
    colors = [DIMENSION_COLORS[dim] for dim in correlations]
    ax.bar(names, values, color=colors)
    ax.set_ylabel("held-out Pearson r")
    ax.set_ylim(-1.0, 1.0)
    ax.axhline(0.0, color="black", linewidth=0.8)
    fig.tight_layout()
    correlations_path = out / "correlations.png"
    fig.savefig(correlations_path, dpi=120)
    plt.close(fig)

    return ReportArtifacts(csv_path=csv_path, scatter_paths=scatter_paths,
                           correlations_path=correlations_path)
