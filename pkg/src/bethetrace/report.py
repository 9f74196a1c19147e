"""Static figure renderers for the command-line report paths.

Each renderer writes one PNG next to the delimited data the commands emit.
The Agg backend keeps rendering headless and byte-deterministic for
identical inputs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (7.0, 4.2),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}


def density_figure(grid, path, level_energies=None, title=""):
    """Total and smooth densities over the grid, with optional level markers."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        if level_energies is not None and len(level_energies):
            levels = np.asarray(level_energies, dtype=float)
            ax.vlines(levels, 0.0, np.max(grid.values_total) * 1.02,
                      colors="0.55", linestyles="dashed", lw=0.7, label="exact levels")
        ax.plot(grid.energies, grid.values_total, lw=0.9, color="tab:blue", label="total")
        ax.plot(grid.energies, grid.values_smooth, lw=1.2, color="tab:red", label="smooth")
        ax.set_xlabel("energy")
        ax.set_ylabel("density of states")
        if title:
            ax.set_title(title)
        ax.legend(loc="upper right")
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)


def staircase_figure(table, path, title=""):
    """Counting-function step plot of an enumerated spectrum."""
    energies = table.energies
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        counts = np.arange(1, energies.size + 1)
        ax.step(energies, counts, where="post", lw=1.0, color="tab:blue")
        ax.set_xlabel("energy")
        ax.set_ylabel("levels below energy")
        if title:
            ax.set_title(title)
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)


def resurgence_figure(rows, path, title=""):
    """Mean oscillatory level vs the smooth background, per winding cutoff."""
    m_values = [row.m_max for row in rows]
    means = [row.mean_osc_between_levels for row in rows]
    weyl = rows[0].weyl_mean if rows else 0.0
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.axhline(-weyl, color="tab:red", lw=1.2, label="minus smooth background")
        ax.plot(m_values, means, "o-", color="tab:blue", label="mean oscillatory part")
        ax.set_xlabel("winding cutoff")
        ax.set_ylabel("density between levels")
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)
