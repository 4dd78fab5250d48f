"""Rewrite tests/golden/<preset>.csv from the current code.

Run after an intentional numerical change, then review the diff.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from qpointer.presets import PRESET_COMMAND, PRESETS
from qpointer.sweeps import RUNNERS, SweepSpec, to_csv

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("presets", nargs="*", default=sorted(PRESETS))
    ap.add_argument("--dir", type=Path, default=GOLDEN)
    args = ap.parse_args()
    args.dir.mkdir(parents=True, exist_ok=True)
    for name in args.presets:
        result = RUNNERS[PRESET_COMMAND[name]](SweepSpec(preset=name))
        path = args.dir / f"{name}.csv"
        path.write_text(to_csv(result), encoding="utf-8", newline="\n")
        print(f"{path}  {len(result.rows)} rows")


if __name__ == "__main__":
    main()
