"""Figure rendering for CLI reports.

Figures are written straight to files (Agg backend); nothing here opens a
window. One-dimensional mixtures are drawn as density curves, two-dimensional
ones as filled contour panels.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DimError
from .mixture import GaussianMixture, density_at

__all__ = ["save_sweep_figure", "save_mixture_figure", "save_interpolation_figure"]


def save_sweep_figure(rows, path):
    """Plot the mixture metric and the Wasserstein oracle against separation."""
    deltas = [r.delta for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.plot(deltas, [r.d for r in rows], "o-", label="mixture metric d")
    ax.plot(deltas, [r.w2 for r in rows], "s-", label="Wasserstein oracle")
    ax.set_xlabel("separation")
    ax.set_ylabel("distance")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _axis_window(mixtures, pad_sigmas=4.0):
    los, his = [], []
    for mix in mixtures:
        for g in mix.components:
            std = np.sqrt(np.clip(np.diagonal(g.cov), 0.0, None))
            los.append(g.mean - pad_sigmas * std)
            his.append(g.mean + pad_sigmas * std)
    return np.min(los, axis=0), np.max(his, axis=0)


def _plot_1d(ax, mixtures, labels):
    lo, hi = _axis_window(mixtures)
    xs = np.linspace(lo[0], hi[0], 512)
    pts = xs[:, None]
    for mix, label in zip(mixtures, labels):
        ax.plot(xs, density_at(mix, pts), label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(frameon=False, fontsize=8)


def _plot_2d_panel(ax, mixture, title):
    lo, hi = _axis_window([mixture])
    xs = np.linspace(lo[0], hi[0], 120)
    ys = np.linspace(lo[1], hi[1], 120)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=-1)
    zz = density_at(mixture, pts).reshape(gx.shape)
    ax.contourf(gx, gy, zz, levels=24, cmap="viridis")
    ax.set_title(title, fontsize=9)
    ax.set_aspect("equal")


def save_mixture_figure(mixtures, labels, path, title=None):
    """Density plot of one or more mixtures; layout depends on dimension."""
    mixtures = list(mixtures)
    dim = mixtures[0].dim
    if dim == 1:
        fig, ax = plt.subplots(figsize=(5.5, 4.0))
        _plot_1d(ax, mixtures, labels)
        if title:
            ax.set_title(title)
    elif dim == 2:
        ncols = len(mixtures)
        fig, axes = plt.subplots(1, ncols, figsize=(3.2 * ncols, 3.2), squeeze=False)
        for ax, mix, label in zip(axes[0], mixtures, labels):
            _plot_2d_panel(ax, mix, label)
        if title:
            fig.suptitle(title)
    else:
        raise DimError(f"cannot plot mixtures of dimension {dim}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_interpolation_figure(path_points, path):
    """Plot a geodesic path: list of (t, mixture) pairs."""
    labels = [f"t = {t:g}" for t, _ in path_points]
    save_mixture_figure([m for _, m in path_points], labels, path)
