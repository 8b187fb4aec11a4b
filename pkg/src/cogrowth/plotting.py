"""Figure output: a standalone matplotlib script per run, optionally rendered."""
from __future__ import annotations

import os
import runpy
from pathlib import Path

SCRIPT_TEMPLATE = '''\
#!/usr/bin/env python3
# Plots for run {title!r}; regenerate with: python {script_name}
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
TITLE = {title!r}
ALPHA = {alpha!r}
# (beta, label) vertical markers
MARKERS = {markers!r}


def read(name):
    path = os.path.join(HERE, name)
    if not os.path.exists(path):
        return []
    with open(path) as fh:
        return list(csv.DictReader(l for l in fh if not l.startswith("#")))


rows = read({results!r})
exact = read({exact!r})
beta = [float(r["beta"]) for r in rows]
mean = [float(r["mean_length"]) for r in rows]
err = [float(r["err"]) for r in rows]

plt.rcParams.update({{"font.size": 9, "figure.figsize": (4.8, 3.2)}})

fig, ax = plt.subplots()
if exact:
    ax.plot([float(r["beta"]) for r in exact], [float(r["expected_length"]) for r in exact],
            "-", color="k", lw=1, label="exact")
ax.errorbar(beta, mean, yerr=err, fmt="x", color="C3", ms=5, capsize=2, label="sampled")
for b, label in MARKERS:
    ax.axvline(b, color="C0", lw=0.8, ls="--")
    ax.annotate(label, (b, 1.0), xycoords=("data", "axes fraction"), rotation=90,
                va="top", ha="right", fontsize=7, color="C0")
ax.set_xlabel(r"$\\beta$")
ax.set_ylabel(r"$\\langle n \\rangle$")
ax.set_title(f"{{TITLE}}, $\\\\alpha={{ALPHA:g}}$")
ax.spines["right"].set_visible(False)
ax.spines["top"].set_visible(False)
ax.legend(frameon=False, loc="upper left")
fig.savefig(os.path.join(HERE, "mean_length.png"), dpi=150, bbox_inches="tight")
plt.close(fig)

fig, ax = plt.subplots()
inv = [1.0 / e if e > 0 else float("nan") for e in err]
ax.plot(beta, inv, "o-", ms=3, color="C2")
for b, label in MARKERS:
    ax.axvline(b, color="C0", lw=0.8, ls="--")
ax.set_xlabel(r"$\\beta$")
ax.set_ylabel(r"err$^{{-1}}$")
ax.set_title(f"{{TITLE}}, $\\\\alpha={{ALPHA:g}}$")
ax.spines["right"].set_visible(False)
ax.spines["top"].set_visible(False)
fig.savefig(os.path.join(HERE, "inverse_err.png"), dpi=150, bbox_inches="tight")
plt.close(fig)
'''

FIGURES = ("mean_length.png", "inverse_err.png")


def write_plot_script(out_dir: str | Path, title: str, alpha: float, markers,
                      results: str = "results.csv", exact: str = "exact.csv",
                      script_name: str = "plot_results.py") -> Path:
    path = Path(out_dir) / script_name
    path.write_text(SCRIPT_TEMPLATE.format(
        title=title, alpha=float(alpha), markers=[(float(b), str(l)) for b, l in markers],
        results=results, exact=exact, script_name=script_name,
    ))
    os.chmod(path, 0o755)
    return path


def render(script: str | Path) -> list[Path]:
    """Execute an emitted plot script in-process; returns the figure paths."""
    script = Path(script)
    runpy.run_path(str(script), run_name="__main__")
    return [script.parent / f for f in FIGURES]
