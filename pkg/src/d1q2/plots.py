"""Figure rendering for the CLI report paths.

Every function draws one figure from already-computed data and saves it next
to the corresponding delimited output.  The CSV files stay authoritative; the
figures are a convenience view.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_snapshots",
    "plot_boundary_series",
    "plot_convergence",
    "plot_spectrum",
    "plot_pseudospectrum",
    "plot_deviation",
    "plot_kinetic_roots",
    "plot_reflection",
]


def _unit_circle(ax):
    theta = np.linspace(0.0, 2.0 * np.pi, 512)
    ax.plot(np.cos(theta), np.sin(theta), color="0.6", lw=0.8, ls="--", zorder=1)


def plot_snapshots(x, snapshots, times, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for u, t in zip(snapshots, times):
        ax.plot(x, u, lw=1.2, label=f"t = {t:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_boundary_series(series, path, fit=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    n = np.arange(1, len(series))
    pos = series[1:] > 0
    ax.loglog(n[pos], series[1:][pos], lw=0.9)
    if fit is not None:
        exponent, n0, n1 = fit
        ref = np.array([max(n0, 1), n1])
        anchor = series[int(n1 - 1)] if series[int(n1 - 1)] > 0 else np.max(series)
        ax.loglog(ref, anchor * (ref / n1) ** exponent, "k--", lw=1.0,
                  label=f"slope {exponent:.2f}")
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("n")
    ax.set_ylabel("|u_0^n|")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_convergence(rows, path):
    fig, ax = plt.subplots(figsize=(5, 4))
    dx = np.array([r.dx for r in rows])
    err = np.array([r.l2_error for r in rows])
    ax.loglog(dx, err, "o-", ms=4)
    for slope, style in ((1.5, ":"), (2.0, "--")):
        ax.loglog(dx, err[0] * (dx / dx[0]) ** slope, "k" + style, lw=0.8,
                  label=f"slope {slope:g}")
    ax.set_xlabel("dx")
    ax.set_ylabel("L2 error")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_spectrum(eigenvalues, path, curve=None, isolated=None, title=None):
    fig, ax = plt.subplots(figsize=(5, 5))
    _unit_circle(ax)
    if curve is not None and len(curve):
        ax.plot(curve.real, curve.imag, ".", color="tab:orange", ms=1.0,
                label="asymptotic curve", zorder=2)
    ax.plot(eigenvalues.real, eigenvalues.imag, "o", color="tab:blue", ms=3.5,
            mfc="none", label="eigenvalues", zorder=3)
    if isolated is not None and len(isolated):
        ax.plot(isolated.real, isolated.imag, "x", color="tab:red", ms=7,
                label="isolated points", zorder=4)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    if title:
        ax.set_title(title, fontsize=9)
    ax.legend(loc="upper left", fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_pseudospectrum(field, path, eigenvalues=None,
                        levels=(-8, -7, -6, -5, -4, -3, -2, -1)):
    fig, ax = plt.subplots(figsize=(5.5, 5))
    _unit_circle(ax)
    X, Y = np.meshgrid(field.re, field.im)
    data = np.log10(np.maximum(field.sigma_min, 1e-300))
    cs = ax.contour(X, Y, data, levels=levels, cmap="viridis", linewidths=0.9)
    ax.clabel(cs, fontsize=6, fmt="%g")
    if eigenvalues is not None:
        ax.plot(eigenvalues.real, eigenvalues.imag, "k.", ms=3)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_deviation(rows, path):
    """rows: list of dicts with keys condition, J, eps_newton."""
    fig, ax = plt.subplots(figsize=(6, 4))
    by_label = {}
    for r in rows:
        by_label.setdefault(r["condition"], []).append((r["J"], r["eps_newton"]))
    for label, pts in by_label.items():
        pts.sort()
        js = np.array([p[0] for p in pts])
        eps = np.array([p[1] for p in pts])
        ax.semilogy(js, np.abs(eps), "o-", ms=3, lw=1.0, label=label)
    ax.set_xlabel("J")
    ax.set_ylabel("|epsilon|")
    ax.legend(loc="best", fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_kinetic_roots(rows, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    cs = np.array([r["courant"] for r in rows])
    for i in range(3):
        ax.plot(cs, [r["abs_z"][i] for r in rows], lw=1.2, label=f"|z_{i+1}|")
        ax.plot(cs, [r["abs_kappa"][i] for r in rows], lw=1.0, ls="--",
                label=f"|kappa(z_{i+1})|")
    ax.axhline(1.0, color="0.5", lw=0.8)
    ax.set_xlabel("C")
    ax.set_ylabel("modulus")
    ax.legend(loc="best", fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_reflection(radii, means, slope, path):
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(radii, means, "o-", ms=4)
    ax.loglog(radii, means[0] * (np.array(radii) / radii[0]) ** slope, "k--",
              lw=0.9, label=f"slope {slope:.2f}")
    ax.set_xlabel("|z - z0|")
    ax.set_ylabel("geometric mean |R|")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
