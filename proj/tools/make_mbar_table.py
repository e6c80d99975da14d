#!/usr/bin/env python3
"""Regenerate data/mbar_table.json from the oracle subcommand.

Usage: tools/make_mbar_table.py [path-to-bbatlas-binary]

Each entry is the Poincare polynomial of the moduli of m-marked genus-0
stable curves (coefficients of t^0, t^2, t^4, ...), interpolated from
finite-field point counts by `bbatlas oracle mbar`.  The Euler number is the
coefficient sum.  Rerun after any change to the counting code and diff.
"""
import json
import pathlib
import subprocess
import sys


def main() -> None:
    binary = sys.argv[1] if len(sys.argv) > 1 else "bbatlas"
    entries = []
    for m in range(3, 9):
        out = subprocess.run([binary, "oracle", "mbar", "--m", str(m)],
                             check=True, capture_output=True, text=True)
        poly = json.loads(out.stdout)["poly"]
        entries.append({"m": m, "poly": poly, "euler": sum(poly)})
    doc = {"generated_by": "tools/make_mbar_table.py", "poincare": entries}
    target = pathlib.Path(__file__).resolve().parent.parent / "data" / "mbar_table.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {target}", file=sys.stderr)


if __name__ == "__main__":
    main()
