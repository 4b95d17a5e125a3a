"""Regenerate ``src/hypergrowth/data/africa_gdp.csv``.

The Africa GDP row of Maddison's 2010 horizontal table (million 1990
International Geary-Khamis dollars) is transcribed below as benchmark
anchors.  Years the fixture needs but that are not anchors are filled by
log-linear interpolation between the neighbouring anchors; see
``src/hypergrowth/data/PROVENANCE.md`` for the status of every value.

Run from the repository root::

    python scripts/build_africa_fixture.py
"""

import math
from pathlib import Path

# year -> (million 1990 GK$, status)
ANCHORS = {
    1: (7_013, "benchmark"),
    1000: (13_723, "benchmark"),
    1500: (18_400, "benchmark"),
    1600: (22_000, "benchmark"),
    1700: (24_400, "benchmark"),
    1820: (31_161, "benchmark"),
    1870: (45_234, "benchmark"),
    1913: (79_486, "benchmark"),
    1950: (203_131, "benchmark"),
    1973: (549_993, "benchmark"),
    1990: (905_738, "unverified"),
    2001: (1_222_577, "benchmark"),
    2008: (1_734_918, "unverified"),
}

# Years between 1870 and 1950 the fixture carries besides the anchors.
EXTRA_YEARS = [1900, 1940]

OUT = Path(__file__).resolve().parents[1] / "src" / "hypergrowth" / "data" / "africa_gdp.csv"


def log_interp(year, lo, hi):
    v_lo, v_hi = ANCHORS[lo][0], ANCHORS[hi][0]
    frac = (year - lo) / (hi - lo)
    return v_lo * math.exp(math.log(v_hi / v_lo) * frac)


def build():
    values = {y: float(v) for y, (v, _) in ANCHORS.items()}
    anchors = sorted(ANCHORS)
    wanted = set(EXTRA_YEARS) | set(range(1950, 2009))
    for year in sorted(wanted - set(anchors)):
        lo = max(a for a in anchors if a < year)
        hi = min(a for a in anchors if a > year)
        values[year] = log_interp(year, lo, hi)
    return values


def main():
    values = build()
    lines = ["year,value"]
    for year in sorted(values):
        # billions, three decimals = the source's million-dollar resolution
        lines.append(f"{year},{values[year] / 1000:.3f}")
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(values)} rows to {OUT}")


if __name__ == "__main__":
    main()
