"""Write the three exponent curves as CSV and, if matplotlib is present, a plot.

    python scripts/export_curves.py --out curves.csv [--png curves.png] [--p 0.1]
"""

from __future__ import annotations

import argparse
import csv
import io
from dataclasses import dataclass
from pathlib import Path

from puebounds.cli import curves_csv, parse_grid


@dataclass
class CurveConfig:
    p: float = 0.1
    q: int = 4
    grid: str = "0:1:0.01"
    out: str = "curves.csv"
    png: str | None = None


def plot(text: str, path: str) -> None:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return
    rows = list(csv.DictReader(io.StringIO(text)))
    xs = [float(r["R_Q"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, style in (("existence", "-"), ("amrrw", "--"), ("hamming", ":")):
        pts = [(x, float(r[key])) for x, r in zip(xs, rows) if r[key]]
        ax.plot([a for a, _ in pts], [b for _, b in pts], style, label=key)
    ax.set_xlabel("R_Q")
    ax.set_ylabel("exponent")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    print(f"wrote {path}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(CurveConfig()).items():
        ap.add_argument(f"--{name}", type=type(default) if default is not None else str, default=default)
    cfg = CurveConfig(**vars(ap.parse_args()))
    text = curves_csv(cfg.q, cfg.p, parse_grid(cfg.grid))
    Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")
    print(f"wrote {cfg.out} ({text.count(chr(10))} lines)")
    if cfg.png:
        plot(text, cfg.png)


if __name__ == "__main__":
    main()
