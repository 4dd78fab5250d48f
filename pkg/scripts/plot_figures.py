"""Plot preset CSVs written by ``run_figures.py`` (needs the ``plot`` extra).

    python scripts/plot_figures.py data/ --out figures/
"""
from __future__ import annotations

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from qpointer.sweeps import read_csv  # noqa: E402

# column stem plotted per command; quadrature gets two panels
QUANTITIES = {
    "weak-value": ["weak_value_re", "weak_value_im", "weak_value_abs"],
    "photon-dist": ["probability"],
    "mandel": ["mandel_q"],
    "g2": ["g2_zero"],
    "quadrature": ["var_x", "var_p", "half_commutator"],
}


def _num(cell: str):
    return float(cell) if cell else float("nan")


def plot(path: Path, out: Path) -> Path:
    res = read_csv(path)
    meta = res.metadata
    axis = meta["axis"]
    series = meta["series"]
    obs = [o.lower() for o in meta["parameters"]["observables"]]
    col = {c: i for i, c in enumerate(res.columns)}
    stems = QUANTITIES[meta["command"]]
    fig, axes = plt.subplots(1, len(obs), figsize=(5 * len(obs), 3.6), squeeze=False)
    for ax, o in zip(axes[0], obs):
        groups = series["values"] if series else [None]
        for s in groups:
            rows = [r for r in res.rows if s is None or _num(r[col[series["key"]]]) == s]
            x = [_num(r[col[axis]]) for r in rows]
            for stem in stems:
                name = stem if meta["command"] == "photon-dist" else f"{stem}_{o}"
                if name not in col:
                    continue
                label = stem if s is None else f"{stem} {series['key']}={s:g}"
                ax.plot(x, [_num(r[col[name]]) for r in rows], marker="o" if axis == "n" else None, ms=3, label=label)
        if meta["command"] == "weak-value":
            ax.plot([_num(r[col[axis]]) for r in res.rows], [_num(r[col["eigenvalue"]]) for r in res.rows], "k--", label="eigenvalue")
        if meta["command"] == "g2":
            ax.axhline(1.0, color="0.6", lw=0.8)
        ax.set_xlabel(axis)
        ax.set_title(f"{meta['preset'] or meta['command']} ({o.upper()})")
        ax.legend(fontsize=6)
    fig.tight_layout()
    target = out / (path.stem + ".png")
    fig.savefig(target, dpi=120)
    plt.close(fig)
    return target


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("data", type=Path)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    files = sorted(args.data.glob("*.csv")) if args.data.is_dir() else [args.data]
    for f in files:
        print(plot(f, args.out))


if __name__ == "__main__":
    main()
