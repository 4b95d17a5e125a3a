"""Freeze exact-arithmetic OLS values for the Africa windows used in the tests.

Writes ``tests/golden/africa_ols.json``.  Only ``tests/_oracle.py`` and the
raw fixture CSV are used; the package's fitting code is not imported.

    python scripts/make_golden.py
"""

import csv
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import _oracle  # noqa: E402

FIXTURE = ROOT / "src" / "hypergrowth" / "data" / "africa_gdp.csv"
OUT = ROOT / "tests" / "golden" / "africa_ols.json"

# inclusive year windows
WINDOWS = {
    "1:1820": (1, 1820),
    "1:1913": (1, 1913),
    "1870:1913": (1870, 1913),
    "1820:1950": (1820, 1950),
    "1820:1900": (1820, 1900),
    "1913:1950": (1913, 1950),
    "1:2008": (1, 2008),
}

HYPOTHESES = {
    "galor-ldc": ([1900], ["stagnation", "unconstrained"]),
    "nielsen-africa": ([1820, 1950], ["hyperbolic", "hyperbolic", "unconstrained"]),
}


def main():
    with FIXTURE.open(encoding="utf-8") as fh:
        rows = [(int(r["year"]), float(r["value"])) for r in csv.DictReader(fh)]
    recips = _oracle.recip_pairs(rows)
    out = {"fixture": FIXTURE.name, "windows": {}, "hypotheses": {}}
    for key, (lo, hi) in WINDOWS.items():
        pts = [(x, y) for x, y in recips if lo <= x <= hi]
        a, k, sse = _oracle.ols(pts)
        out["windows"][key] = {"n": len(pts), "a": a, "k": k, "sse": sse}
    out["windows"]["1:1820"]["t_stat"] = _oracle.slope_t_stat(
        [(x, y) for x, y in recips if 1 <= x <= 1820]
    )
    for name, (bounds, kinds) in HYPOTHESES.items():
        out["hypotheses"][name] = {"sse": _oracle.hypothesis_sse(recips, bounds, kinds)}
    best = _oracle.brute_force_breaks([(x, y) for x, y in recips if x <= 1913], 1)
    out["break_search_1_1913"] = {"breakpoints": list(best[0]), "sse": best[1]}
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
