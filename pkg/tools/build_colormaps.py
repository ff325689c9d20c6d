"""Regenerates src/geode/data/colormaps.json: 256-entry RGB lookup tables
for the built-in colormap names. matplotlib is a tool-side dependency only;
the package ships the tables as data.

Run from the repo root: python3 tools/build_colormaps.py
"""

import json
from pathlib import Path

import matplotlib

NAMES = ["Greys", "Oranges", "Blues", "YlOrBr", "magma", "gray", "viridis"]


def main():
    tables = {}
    for name in NAMES:
        cmap = matplotlib.colormaps[name].resampled(256)
        rows = []
        for i in range(256):
            r, g, b, _ = cmap(i)
            rows.append([round(r * 255), round(g * 255), round(b * 255)])
        tables[name] = rows
    out = Path(__file__).resolve().parent.parent / "src" / "geode" / "data" / "colormaps.json"
    out.write_text(json.dumps(tables, separators=(",", ":")) + "\n")
    print(f"wrote {out} ({len(tables)} tables)")


if __name__ == "__main__":
    main()
