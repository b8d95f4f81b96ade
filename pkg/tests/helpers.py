"""Shared test oracles, independent of the bundled solver.

LP references go through scipy (HiGHS) or plain linear algebra (vertex
enumeration); MILP references enumerate binary assignments exhaustively and
complete each with a scipy LP solve.
"""

import itertools

import numpy as np
from scipy.optimize import linprog

from mprobust.milp import GE, LE, EQ, MilpModel


def scipy_lp(model: MilpModel, lower=None, upper=None):
    """Solve the LP relaxation with scipy; returns (status, objective)."""
    lo = model.lower if lower is None else lower
    up = model.upper if upper is None else upper
    c = -model.objective if model.maximize else model.objective
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i in range(model.num_rows):
        row = model.row_coeffs[i]
        if model.row_senses[i] == LE:
            A_ub.append(row); b_ub.append(model.row_rhs[i])
        elif model.row_senses[i] == GE:
            A_ub.append(-row); b_ub.append(-model.row_rhs[i])
        else:
            A_eq.append(row); b_eq.append(model.row_rhs[i])
    res = linprog(
        c,
        A_ub=np.array(A_ub) if A_ub else None, b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None, b_eq=np.array(b_eq) if b_eq else None,
        bounds=list(zip(lo, up)), method="highs")
    if res.status == 2:
        return "infeasible", None
    if res.status == 3:
        return "unbounded", None
    assert res.status == 0, res.message
    obj = -res.fun if model.maximize else res.fun
    return "optimal", float(obj)


def enum_milp(model: MilpModel):
    """Exhaustive enumeration over binary assignments, scipy-completed."""
    bin_idx = np.flatnonzero(model.is_binary)
    assert bin_idx.size <= 14, "oracle guard"
    best = None
    for bits in itertools.product((0.0, 1.0), repeat=bin_idx.size):
        lo = model.lower.copy(); up = model.upper.copy()
        lo[bin_idx] = bits; up[bin_idx] = bits
        status, obj = scipy_lp(model, lo, up)
        if status != "optimal":
            continue
        if best is None or (obj < best if not model.maximize else obj > best):
            best = obj
    if best is None:
        return "infeasible", None
    return "optimal", best


def vertex_lp(model: MilpModel):
    """Vertex enumeration for tiny LPs with finite bounds on every variable.

    Candidate vertices are intersections of n active constraints chosen from
    the rows (as equalities) and the bound planes.
    """
    n = model.num_vars
    rows = [(model.row_coeffs[i], model.row_rhs[i], int(model.row_senses[i]))
            for i in range(model.num_rows)]
    planes = [(row, rhs) for row, rhs, _ in rows]
    for j in range(n):
        e = np.zeros(n); e[j] = 1.0
        planes.append((e, model.lower[j]))
        planes.append((e.copy(), model.upper[j]))
    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        A = np.array([planes[k][0] for k in combo])
        b = np.array([planes[k][1] for k in combo])
        if abs(np.linalg.det(A)) < 1e-10:
            continue
        x = np.linalg.solve(A, b)
        if np.any(x < model.lower - 1e-8) or np.any(x > model.upper + 1e-8):
            continue
        ok = True
        for row, rhs, sense in rows:
            v = row @ x
            if sense == LE and v > rhs + 1e-8:
                ok = False; break
            if sense == GE and v < rhs - 1e-8:
                ok = False; break
            if sense == EQ and abs(v - rhs) > 1e-8:
                ok = False; break
        if not ok:
            continue
        obj = float(model.objective @ x)
        if best is None or (obj > best if model.maximize else obj < best):
            best = obj
    return best


def random_lp(rng, n=5, m=4, bounded=True) -> MilpModel:
    A = rng.normal(size=(m, n)).round(3)
    x0 = rng.uniform(0, 3, size=n)
    senses = rng.integers(-1, 2, size=m).astype(np.int8)
    rhs = A @ x0 + np.where(senses == LE, rng.uniform(0, 2, m),
                            np.where(senses == GE, -rng.uniform(0, 2, m), 0.0))
    lo = np.zeros(n)
    up = np.full(n, 10.0) if bounded else np.full(n, np.inf)
    return MilpModel(
        objective=rng.normal(size=n).round(3), maximize=False,
        lower=lo, upper=up,
        is_binary=np.zeros(n, dtype=bool),
        row_coeffs=A, row_senses=senses, row_rhs=rhs)


def random_milp(rng, n_bin=8, n_cont=2, m=6) -> MilpModel:
    n = n_bin + n_cont
    A = rng.normal(size=(m, n)).round(3)
    xb = rng.integers(0, 2, size=n_bin).astype(float)
    xc = rng.uniform(0, 2, size=n_cont)
    x0 = np.concatenate([xb, xc])
    senses = rng.integers(-1, 2, size=m).astype(np.int8)
    rhs = A @ x0 + np.where(senses == LE, rng.uniform(0, 1.5, m),
                            np.where(senses == GE, -rng.uniform(0, 1.5, m), 0.0))
    lower = np.concatenate([np.zeros(n_bin), np.zeros(n_cont)])
    upper = np.concatenate([np.ones(n_bin), np.full(n_cont, 4.0)])
    return MilpModel(
        objective=rng.normal(size=n).round(3),
        maximize=bool(rng.integers(0, 2)),
        lower=lower, upper=upper,
        is_binary=np.concatenate([np.ones(n_bin, dtype=bool), np.zeros(n_cont, dtype=bool)]),
        row_coeffs=A, row_senses=senses, row_rhs=rhs)


def random_instance(rng, n=6, K=2, cover_all=True):
    """Small CUSTOM instance: random costs/deviations, random group partition,
    X = one cardinality band so enumeration stays nontrivial."""
    from mprobust.uncertainty import Instance

    c = rng.uniform(1.0, 10.0, size=n).round(3)
    d = rng.uniform(0.0, 5.0, size=n).round(3)
    labels = rng.integers(0, K, size=n)
    labels[rng.integers(0, n)] = 0  # keep group 0 nonempty
    groups = [tuple(int(j) for j in np.flatnonzero(labels == k)) for k in range(K)]
    groups = [g for g in groups if g]
    if not cover_all:
        j = groups[0][0]
        if len(groups[0]) > 1:
            groups[0] = tuple(x for x in groups[0] if x != j)
            d[j] = 0.0
    lo_cnt = 1
    hi_cnt = max(2, n // 2)
    A = np.ones((2, n))
    senses = np.array([1, -1], dtype=np.int8)
    rhs = np.array([float(lo_cnt), float(hi_cnt)])
    return Instance(c_lower=c, deviations=d, groups=tuple(groups),
                    x_coeffs=A, x_senses=senses, x_rhs=rhs,
                    metadata={"kind": "CUSTOM"})


def primal_dual_pair(rng, n=6, m=4):
    """Random min c'x, Ax >= b, x >= 0 with c >= 0 plus its explicit dual."""
    A = rng.normal(size=(m, n)).round(3)
    x0 = rng.uniform(0, 2, size=n)
    b = A @ x0 - rng.uniform(0, 1, size=m)
    c = rng.uniform(0.1, 3.0, size=n).round(3)
    primal = MilpModel(
        objective=c, maximize=False,
        lower=np.zeros(n), upper=np.full(n, np.inf),
        is_binary=np.zeros(n, dtype=bool),
        row_coeffs=A, row_senses=np.full(m, GE, dtype=np.int8), row_rhs=b)
    dual = MilpModel(
        objective=b, maximize=True,
        lower=np.zeros(m), upper=np.full(m, np.inf),
        is_binary=np.zeros(m, dtype=bool),
        row_coeffs=A.T, row_senses=np.full(n, LE, dtype=np.int8), row_rhs=c)
    return primal, dual
