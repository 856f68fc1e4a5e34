"""Figures rendered next to report files.

Everything goes through the Agg backend straight to disk; nothing here
opens a window.  Each helper takes the rows the CLI is already writing
and the path of the delimited output, and saves a PNG sibling.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

__all__ = ["sibling_path", "plot_verify_sde", "plot_eigen", "plot_pullback"]


def sibling_path(out_path, tag):
    base, _ = os.path.splitext(str(out_path))
    return f"{base}_{tag}.png"


def plot_verify_sde(reports, out_path):
    """Einstein residual and Weyl halves per grid index."""
    idx = [i for i, r in enumerate(reports) if r is not None]
    if not idx:
        return None
    ein = [reports[i].einstein_residual for i in idx]
    sd = [reports[i].weyl_sd_norm for i in idx]
    asd = [reports[i].weyl_asd_norm for i in idx]
    scal = [reports[i].scalar for i in idx]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.semilogy(idx, ein, "o-", label="Einstein residual", markersize=3)
    floor = 1e-18
    ax1.semilogy(idx, np.maximum(sd, floor), "s--", label="|W+|", markersize=3)
    ax1.semilogy(idx, np.maximum(asd, floor), "^--", label="|W-|", markersize=3)
    ax1.set_xlabel("grid index")
    ax1.legend(fontsize=8)
    ax1.set_title("residuals and Weyl halves")
    ax2.plot(idx, scal, "o-", markersize=3)
    ax2.set_xlabel("grid index")
    ax2.set_title("scalar curvature")
    fig.tight_layout()
    path = sibling_path(out_path, "report")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_eigen(rows, out_path):
    """Scatter of F over the half plane, colored by value."""
    if not rows:
        return None
    rho = np.array([r["rho"] for r in rows])
    eta = np.array([r["eta"] for r in rows])
    F = np.array([r["F"] for r in rows])
    res = np.array([r["laplace_residual"] for r in rows])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    sc = ax1.scatter(eta, rho, c=F, s=12, cmap="viridis")
    fig.colorbar(sc, ax=ax1, label="F")
    ax1.set_xlabel("eta")
    ax1.set_ylabel("rho")
    ax1.set_title("eigenfunction")
    sc2 = ax2.scatter(eta, rho, c=np.log10(np.maximum(res, 1e-18)),
                      s=12, cmap="magma")
    fig.colorbar(sc2, ax=ax2, label="log10 residual")
    ax2.set_xlabel("eta")
    ax2.set_title("eigen-equation residual")
    fig.tight_layout()
    path = sibling_path(out_path, "field")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_pullback(ratios, constant, out_path):
    """Per-sample pullback ratios around their mean."""
    if len(ratios) == 0:
        return None
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(len(ratios)), ratios, "o", markersize=4)
    ax.axhline(constant, color="k", linewidth=0.8)
    ax.set_xlabel("sample")
    ax.set_ylabel("lifted F / form")
    ax.set_title("pullback ratio constancy")
    fig.tight_layout()
    path = sibling_path(out_path, "ratios")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
