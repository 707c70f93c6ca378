#!/usr/bin/env python3
"""Solve an exported escape LP and emit a fractional solution.

Reads the LP text the `escape lp-export` subcommand produces, solves it with
scipy's HiGHS backend, and writes "i dir value" lines plus an "objective"
line. Values are fixed to nano precision; tiny solver residues are repaired
so the emitted solution is feasible under exact integer-nano checks:
per-rectangle mass is topped up to 1, and the objective is recomputed as the
exact maximum cell load.
"""

import argparse
import re
import sys

from scipy.optimize import linprog

NANO = 10**9

TERM = re.compile(r"r_(\d+)_([lrdu])")


def parse_lp(text):
    esc = {}    # rect index -> [var names]
    cells = []  # list of [var names]
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper in ("MINIMIZE", "SUBJECT TO", "BOUNDS", "END"):
            section = upper
            continue
        if section != "SUBJECT TO":
            continue
        name, _, rest = line.partition(":")
        terms = TERM.findall(rest)
        if name.startswith("esc_"):
            esc[int(name[4:])] = [(int(i), d) for i, d in terms]
        elif name.startswith("cell_"):
            cells.append([(int(i), d) for i, d in terms])
        else:
            raise SystemExit(f"unrecognized constraint {name!r}")
    return esc, cells


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lp", help="LP file from lp-export")
    ap.add_argument("-o", "--out", default="-", help="output fractional file")
    args = ap.parse_args()

    with open(args.lp) as fh:
        esc, cells = parse_lp(fh.read())

    n = (max(esc) + 1) if esc else 0
    dirs = "lrdu"
    var = {(i, d): i * 4 + dirs.index(d) for i in range(n) for d in dirs}
    nvars = 4 * n + 1  # + k
    k_col = nvars - 1

    a_ub, b_ub = [], []
    for i in range(n):
        row = [0.0] * nvars
        for t in esc[i]:
            row[var[t]] = -1.0
        a_ub.append(row)
        b_ub.append(-1.0)
    for members in cells:
        row = [0.0] * nvars
        for t in members:
            row[var[t]] = 1.0
        row[k_col] = -1.0
        a_ub.append(row)
        b_ub.append(0.0)

    c = [0.0] * nvars
    c[k_col] = 1.0
    bounds = [(0.0, 1.0)] * (nvars - 1) + [(0.0, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise SystemExit(f"solver failed: {res.message}")

    vals = [max(0, min(NANO, round(res.x[var[(i, d)]] * NANO))) for i in range(n) for d in dirs]

    def get(i, d):
        return vals[i * 4 + dirs.index(d)]

    def put(i, d, v):
        vals[i * 4 + dirs.index(d)] = v

    for i in range(n):
        mass = sum(get(i, d) for d in dirs)
        if mass < NANO:
            top = max(dirs, key=lambda d: get(i, d))
            put(i, top, get(i, top) + NANO - mass)

    k_f = max((sum(get(*t) for t in members) for members in cells), default=0)

    lines = []
    for i in range(n):
        for d in dirs:
            v = get(i, d)
            lines.append(f"{i} {d} {v // NANO}.{v % NANO:09d}")
    lines.append(f"objective {k_f // NANO}.{k_f % NANO:09d}")
    out = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(out)
    else:
        with open(args.out, "w") as fh:
            fh.write(out)


if __name__ == "__main__":
    main()
