"""Learning-curve figures: mean line with a +-1 std shaded band.

Plots are pure views over aggregate data: each SVG gets a sibling CSV
holding exactly the rows drawn. SVG output is reproducible (fixed hash
salt, no embedded date).
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def learning_curves(svg_path, series, title, xlabel="labels used", ylabel="Pearson r"):
    """Overlay one curve per series entry.

    series maps name -> rows of (labels_used, mean, std, ...); insertion
    order fixes draw order and the legend.
    """
    svg_path = Path(svg_path)
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context({"svg.hashsalt": "perfal"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for name, rows in series.items():
            xs = [r[0] for r in rows]
            means = [r[1] for r in rows]
            stds = [r[2] for r in rows]
            ax.plot(xs, means, marker="o", markersize=3, label=name)
            ax.fill_between(
                xs,
                [m - s for m, s in zip(means, stds)],
                [m + s for m, s in zip(means, stds)],
                alpha=0.2,
            )
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        fig.savefig(svg_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    with open(svg_path.with_suffix(".csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "labels_used", "mean_pearson", "std_pearson"])
        for name, rows in series.items():
            for r in rows:
                writer.writerow([name, r[0], "%.10g" % r[1], "%.10g" % r[2]])
    return svg_path
