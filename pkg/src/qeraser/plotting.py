"""Static figures of pattern tables, written next to the CSV/JSON output."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (5 ** 0.5 - 1) / 2

STYLES = ["-", "--", "-.", ":"]
LEGEND = {
    "p_total": "marginal",
    "p_alpha": r"$\alpha$",
    "p_beta": r"$\beta$",
    "p_gamma": r"$\gamma$",
    "p_up": r"$\uparrow$",
    "p_right": r"$\rightarrow$",
    "p_down": r"$\downarrow$",
}


def figure_size(width=6.0):
    return (width, width * GOLDEN)


def _save(fig, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)


def plot_table(table: dict, path, title: str | None = None, reference: dict | None = None):
    """Line plot of every pattern column against x.

    ``reference`` adds extra named curves (e.g. the coherent pattern) drawn
    in grey.
    """
    fig, ax = plt.subplots(figsize=figure_size())
    x = table["x"]
    cols = [k for k in table if k != "x"]
    for i, name in enumerate(cols):
        lw = 0.8 if name == "p_total" and len(cols) > 1 else 1.2
        ax.plot(x, table[name], STYLES[i % len(STYLES)], lw=lw, label=LEGEND.get(name, name))
    for name, values in (reference or {}).items():
        ax.plot(x, values, color="0.6", lw=0.8, ls=":", label=name)
    ax.set_xlabel("x")
    ax.set_ylabel("probability density")
    ax.set_xlim(x[0], x[-1])
    ax.set_ylim(bottom=0)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)
    return path


def plot_sweep(summary: dict, param: str, path):
    """Visibility per outcome against the swept parameter."""
    fig, ax = plt.subplots(figsize=figure_size())
    values = summary["value"]
    for i, name in enumerate(k for k in summary if k.startswith("V_")):
        ax.plot(values, summary[name], "o" + STYLES[i % len(STYLES)], label=name[2:])
    ax.set_xlabel(param)
    ax.set_ylabel("visibility")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)
    return path
