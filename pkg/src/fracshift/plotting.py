"""Figures for CLI runs, rendered off-screen to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "figure.figsize": (6.4, 4.2),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 120,
    "savefig.bbox": "tight",
}


def _save(fig, path):
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_evolution(xs, ts, psi, path, title=""):
    """Heat map of log10 |psi| over the (x, t) grid."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        mag = np.log10(np.maximum(np.abs(psi), np.finfo(float).tiny))
        mesh = ax.pcolormesh(xs, ts, mag.T, shading="auto", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label=r"$\log_{10}|\psi|$")
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        ax.grid(False)
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_supershift(z, values, target, path, title=""):
    """Real parts of the sequence and its limit, with the pointwise error."""
    order = np.argsort(z.real)
    z, values, target = z[order], values[order], target[order]
    with plt.rc_context(RC):
        fig, (top, bottom) = plt.subplots(2, 1, sharex=True)
        top.plot(z.real, values.real, "k-", label="Re F")
        top.plot(z.real, target.real, "r--", label="Re target")
        top.legend(loc="best")
        bottom.semilogy(z.real, np.abs(values - target), "b.-")
        bottom.set_xlabel("Re z")
        bottom.set_ylabel("|error|")
        if title:
            top.set_title(title)
        return _save(fig, path)


def plot_convergence(ns, errors, path, title=""):
    """Sup-grid error against n on log axes."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ax.loglog(ns, errors, "ko-", markerfacecolor="w")
        ax.set_xlabel("n")
        ax.set_ylabel("sup error")
        if title:
            ax.set_title(title)
        return _save(fig, path)
