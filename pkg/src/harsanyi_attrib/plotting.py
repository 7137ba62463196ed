"""Bar-chart rendering for report ``bars`` arrays."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

POSITIVE = "#c0392b"
NEGATIVE = "#2c7fb8"


def render_bars(bars, path, title: str = "", ylabel: str = "attribution"):
    """Write a bar chart of ``[{"label", "value"}, ...]`` to ``path``.

    The format follows the file suffix (png, pdf, svg).
    """
    labels = [b["label"] for b in bars]
    values = [float(b["value"]) for b in bars]
    width = max(4.0, 0.45 * len(bars) + 1.5)
    fig, ax = plt.subplots(figsize=(width, 3.2))
    try:
        colors = [POSITIVE if x >= 0 else NEGATIVE for x in values]
        ax.bar(range(len(values)), values, color=colors, width=0.7)
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_xticks(range(len(values)))
        ax.set_xticklabels(labels, rotation=45 if len(labels) > 8 else 0, ha="right" if len(labels) > 8 else "center")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)
