#!/usr/bin/env python3
"""External MILP solver: `external_solver_scipy.py model.mps solution.txt`.

Reads the fixed-form MPS file written by the planner, solves it with
scipy's HiGHS backend, and writes one `<column> <value>` line per nonzero
plus `=obj=` / `=bound=` records.
"""
import sys

import numpy as np
from scipy import optimize, sparse

INF = float("inf")


def parse_mps(path):
    rows = []            # (name, sense) excluding objective
    row_index = {}
    obj_name = None
    cols = {}            # name -> {row: coef}
    col_order = []
    integrality = {}
    obj = {}
    rhs = {}
    obj_offset = 0.0
    lb, ub = {}, {}
    maximize = False

    section = None
    in_int = False
    with open(path) as f:
        for raw in f:
            line = raw.rstrip("\n")
            if not line or line.startswith("*"):
                continue
            if not line[0].isspace():
                head = line.split()[0]
                if head in ("NAME", "ENDATA"):
                    section = head
                elif head in ("ROWS", "COLUMNS", "RHS", "BOUNDS", "RANGES",
                              "OBJSENSE"):
                    section = head
                else:
                    raise ValueError(f"unknown MPS section {head}")
                continue
            t = line.split()
            if section == "OBJSENSE":
                maximize = t[0] == "MAX"
            elif section == "ROWS":
                sense, name = t[0], t[1]
                if sense == "N":
                    obj_name = name
                else:
                    row_index[name] = len(rows)
                    rows.append((name, sense))
            elif section == "COLUMNS":
                if len(t) >= 3 and t[1] == "'MARKER'":
                    in_int = t[2] == "'INTORG'"
                    continue
                name = t[0]
                if name not in cols:
                    cols[name] = {}
                    col_order.append(name)
                    integrality[name] = in_int
                for rname, val in zip(t[1::2], t[2::2]):
                    if rname == obj_name:
                        obj[name] = obj.get(name, 0.0) + float(val)
                    else:
                        cols[name][rname] = cols[name].get(rname, 0.0) + float(val)
            elif section == "RHS":
                for rname, val in zip(t[1::2], t[2::2]):
                    if rname == obj_name:
                        obj_offset = -float(val)
                    else:
                        rhs[rname] = float(val)
            elif section == "BOUNDS":
                kind, _, name = t[0], t[1], t[2]
                val = float(t[3]) if len(t) > 3 else 0.0
                if kind == "LO":
                    lb[name] = val
                elif kind == "UP":
                    ub[name] = val
                elif kind == "FX":
                    lb[name] = ub[name] = val
                elif kind == "MI":
                    lb[name] = -INF
                elif kind == "PL":
                    ub[name] = INF
                elif kind == "BV":
                    lb[name], ub[name] = 0.0, 1.0
                else:
                    raise ValueError(f"unsupported bound type {kind}")
            elif section == "RANGES":
                raise ValueError("RANGES section not supported")
    return (rows, row_index, col_order, cols, integrality, obj, rhs,
            obj_offset, lb, ub, maximize)


def main():
    if len(sys.argv) != 3:
        print("usage: external_solver_scipy.py model.mps solution.txt",
              file=sys.stderr)
        return 1
    (rows, row_index, col_order, cols, integrality, obj, rhs, obj_offset,
     lb, ub, maximize) = parse_mps(sys.argv[1])

    n, m = len(col_order), len(rows)
    col_pos = {name: j for j, name in enumerate(col_order)}
    c = np.array([obj.get(name, 0.0) for name in col_order])
    if maximize:
        c = -c

    data, ri, ci = [], [], []
    for name in col_order:
        j = col_pos[name]
        for rname, val in cols[name].items():
            ri.append(row_index[rname])
            ci.append(j)
            data.append(val)
    A = sparse.csr_matrix((data, (ri, ci)), shape=(m, n))

    b_lo = np.empty(m)
    b_up = np.empty(m)
    for i, (name, sense) in enumerate(rows):
        b = rhs.get(name, 0.0)
        if sense == "G":
            b_lo[i], b_up[i] = b, INF
        elif sense == "L":
            b_lo[i], b_up[i] = -INF, b
        else:
            b_lo[i] = b_up[i] = b

    bounds = optimize.Bounds(
        np.array([lb.get(name, 0.0) for name in col_order]),
        np.array([ub.get(name, INF) for name in col_order]))
    res = optimize.milp(
        c,
        constraints=optimize.LinearConstraint(A, b_lo, b_up),
        integrality=np.array([1 if integrality[name] else 0
                              for name in col_order]),
        bounds=bounds,
        options={"mip_rel_gap": 0.0, "presolve": True})
    if not res.success:
        print(f"solver failed: {res.message}", file=sys.stderr)
        return 1

    sign = -1.0 if maximize else 1.0
    objective = sign * res.fun + obj_offset
    bound = sign * res.mip_dual_bound + obj_offset \
        if res.mip_dual_bound is not None else objective
    with open(sys.argv[2], "w") as out:
        out.write(f"=obj= {objective:.17g}\n")
        out.write(f"=bound= {bound:.17g}\n")
        for name in col_order:
            v = res.x[col_pos[name]]
            if v != 0.0:
                out.write(f"{name} {v:.17g}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
