"""Figures for scan reports, written next to the tabular output."""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

CASE_ORDER = ("Case1", "Case3", "Case4", "CaseMain")
CASE_COLORS = {"Case1": "#7f7f7f", "Case3": "#1f77b4", "Case4": "#ff7f0e", "CaseMain": "#d62728"}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_case_distribution(rows: Sequence[dict], path: Path) -> Path:
    counts = Counter(r["case"] for r in rows if r.get("case"))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    labels = [c for c in CASE_ORDER if counts.get(c)]
    ax.bar(labels, [counts[c] for c in labels], color=[CASE_COLORS[c] for c in labels])
    ax.set_ylabel("primes")
    ax.set_title("case distribution")
    return _save(fig, path)


def plot_symbol_exponents(rows: Sequence[dict], path: Path) -> Path:
    """Exponent of (w, p) at lambda against p, coloured by case."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for case in CASE_ORDER:
        pts = [(r["p"], r["symbols"]["w_p_at_lambda"]) for r in rows if r.get("case") == case and r.get("symbols")]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=14, label=case, color=CASE_COLORS[case])
    ax.set_yticks([0, 1, 2])
    ax.set_xlabel("p")
    ax.set_ylabel("exponent of (w, p) at lambda")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_class_numbers(rows: Sequence[dict], path: Path) -> Path | None:
    pts = [(r["p"], r["hF"], r["case"]) for r in rows if r.get("hF")]
    if not pts:
        return None
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for case in CASE_ORDER:
        sel = [(p, h) for p, h, c in pts if c == case]
        if sel:
            xs, ys = zip(*sel)
            ax.scatter(xs, ys, s=14, label=case, color=CASE_COLORS[case])
    ax.set_xlabel("p")
    ax.set_ylabel("h_F")
    ax.set_yscale("log", base=3)
    ax.legend(fontsize=8)
    return _save(fig, path)


def render_figures(rows: Sequence[dict], out_dir: Path, stem: str = "report") -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [
        plot_case_distribution(rows, out_dir / f"{stem}_cases.png"),
        plot_symbol_exponents(rows, out_dir / f"{stem}_symbols.png"),
    ]
    h = plot_class_numbers(rows, out_dir / f"{stem}_class_numbers.png")
    if h is not None:
        written.append(h)
    return written
