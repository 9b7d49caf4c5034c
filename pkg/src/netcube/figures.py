"""Figure rendering for the report path (PNG files next to the CSV output)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_spectrum_fit(estimates, log_r: float, out_path: Path):
    """Level sums against k*log(r) with the fitted slope per q."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for est in estimates:
        xs = np.array(est.k_window) * log_r
        ax.plot(xs, est.log_sums, "o-", ms=4,
                label=f"q={est.q:g} (tau={est.tau_fit:.3f})")
    ax.set_xlabel("k log r")
    ax.set_ylabel("log level sum")
    ax.legend(fontsize=8)
    ax.set_title("Local L^q scaling")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)


def plot_dimension_fit(estimates, out_path: Path):
    """log ball mass against log radius for each sampled point."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for est in estimates:
        ax.plot(np.log(est.t_grid), est.log_ball_masses, "o-", ms=3, alpha=0.6)
    ax.set_xlabel("log t")
    ax.set_ylabel("log mass of B(x, t)")
    ax.set_title("Local dimension scaling")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)


def plot_mass_histogram(point_mass: np.ndarray, out_path: Path):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.hist(np.log10(point_mass), bins=40, color="#4878a8")
    ax.set_xlabel("log10 point mass")
    ax.set_ylabel("count")
    ax.set_title("Point mass distribution")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)


def plot_doubling_report(report, out_path: Path):
    """Worst observed ratios against their bounds."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    names = ["cube ratio", "ball ratio"]
    observed = [max(report.worst_ratio_cubes, 1e-12),
                max(report.worst_ratio_balls, 1e-12)]
    bounds = [max(report.bound_cubes, 1e-12), max(report.bound_balls, 1e-12)]
    x = np.arange(2)
    ax.bar(x - 0.18, observed, width=0.36, label="observed")
    ax.bar(x + 0.18, bounds, width=0.36, label="bound")
    ax.set_xticks(x, names)
    ax.set_yscale("log")
    ax.set_ylabel("ratio")
    ax.legend()
    ax.set_title("Doubling verification")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
