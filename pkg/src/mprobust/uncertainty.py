"""Locally budgeted uncertainty sets and worst-case cost evaluation.

An :class:`Instance` couples a 0-1 feasible set X (linear rows over the
decision vector) with a nominal cost vector, per-component deviations, and a
partition of the deviating components into budget groups.  For a budget
vector ``gamma`` (one entry per group) the uncertain cost vector ranges over

    standard:  c = c_nom + lam,        0 <= lam_j <= dev_j,  sum_{P_k} lam_j <= gamma_k
    variant:   c_j = c_nom_j + lam_j * dev_j,  lam in [0,1]^n, sum_{P_k} lam_j <= gamma_k

Worst-case cost of a fixed solution has a closed form in both cases (group
cap / fractional knapsack); the LP forms are kept only as cross-checks.

Budget vectors are plain numpy arrays of length K (no wrapper class).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Optional

import numpy as np

from .milp import EQ, GE, LE, MilpModel, ModelBuilder, SolverConfig, solve_milp

MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Instance:
    """Nominal 0-1 problem plus deviation data and budget groups.

    ``groups`` must be disjoint, nonempty, and cover every index with a
    positive deviation; indices outside all groups carry no uncertainty.
    """

    c_lower: np.ndarray                 # (n,) nominal costs, >= 0
    deviations: np.ndarray              # (n,) deviations, >= 0
    groups: tuple                       # K tuples of indices into [n]
    x_coeffs: np.ndarray                # (m, n) rows describing X
    x_senses: np.ndarray                # (m,)
    x_rhs: np.ndarray                   # (m,)
    metadata: dict = field(default_factory=dict)
    var_names: Optional[tuple] = None

    def __post_init__(self):
        c = np.asarray(self.c_lower, dtype=float)
        d = np.asarray(self.deviations, dtype=float)
        object.__setattr__(self, "c_lower", c)
        object.__setattr__(self, "deviations", d)
        n = c.shape[0]
        if d.shape != (n,):
            raise ValueError("c_lower and deviations must have equal length")
        if np.any(c < 0) or np.any(d < 0):
            raise ValueError("nominal costs and deviations must be nonnegative")
        groups = tuple(tuple(int(j) for j in g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        seen = set()
        for g in groups:
            if not g:
                raise ValueError("empty budget group")
            for j in g:
                if not 0 <= j < n:
                    raise ValueError(f"group index {j} out of range")
                if j in seen:
                    raise ValueError(f"index {j} appears in two groups")
                seen.add(j)
        uncovered = [j for j in range(n) if j not in seen and d[j] > 0]
        if uncovered:
            raise ValueError(f"deviating indices outside every group: {uncovered}")
        if self.x_coeffs.shape[1] != n:
            raise ValueError("feasible-set rows must match the variable count")

    @property
    def n(self) -> int:
        return self.c_lower.shape[0]

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    @property
    def covered(self) -> np.ndarray:
        return np.asarray(sorted(j for g in self.groups for j in g), dtype=int)

    @property
    def kind(self) -> str:
        return self.metadata.get("kind", "CUSTOM")

    def group_of(self) -> np.ndarray:
        """Per-index group id, -1 outside every group."""
        out = np.full(self.n, -1, dtype=int)
        for k, g in enumerate(self.groups):
            out[list(g)] = k
        return out

    def with_groups(self, groups) -> "Instance":
        return replace(self, groups=tuple(tuple(g) for g in groups))

    def feasible_model(self, objective: Optional[np.ndarray] = None,
                       maximize: bool = False) -> MilpModel:
        """X as a standalone all-binary model with the given objective."""
        obj = np.zeros(self.n) if objective is None else np.asarray(objective, dtype=float)
        return MilpModel(
            objective=obj, maximize=maximize,
            lower=np.zeros(self.n), upper=np.ones(self.n),
            is_binary=np.ones(self.n, dtype=bool),
            row_coeffs=self.x_coeffs, row_senses=self.x_senses, row_rhs=self.x_rhs,
            var_names=self.var_names, name=self.metadata.get("kind", "instance"))


def verify_feasible(inst: Instance, config: Optional[SolverConfig] = None) -> None:
    """One-off feasibility solve of X; raises ValueError when X is empty."""
    sol = solve_milp(inst.feasible_model(), config)
    if sol.status != "optimal":
        raise ValueError(f"instance feasible set is empty (solver: {sol.status})")


def solution_signature(inst: Instance, x) -> tuple:
    """Decision-maker identity of a solution.

    For facility instances two solutions with the same open medians count
    once (assignments are trivial to redo in real time); elsewhere the
    signature is the full 0-1 vector.
    """
    x = np.asarray(x)
    if inst.kind == "PLM":
        off = int(inst.metadata["y_offset"])
        return tuple(int(j) for j in range(off, inst.n) if x[j] > 0.5)
    return tuple(int(round(v)) for v in x)


@dataclass(frozen=True, eq=False)
class OmegaSpec:
    """Budget-vector domain: interval box, line segment, or budgeted polytope."""

    kind: str
    lower: Optional[np.ndarray] = None        # interval
    upper: Optional[np.ndarray] = None
    gamma0: Optional[np.ndarray] = None       # segment: alpha * gamma0
    alpha_lo: float = 0.0
    alpha_hi: float = 1.0
    gamma_base: Optional[np.ndarray] = None   # budgeted: base + beta
    spread: Optional[np.ndarray] = None       # per-group beta caps
    budget: float = 0.0                       # total beta cap

    def __post_init__(self):
        if self.kind == "interval":
            lo, hi = np.asarray(self.lower, float), np.asarray(self.upper, float)
            if lo.shape != hi.shape or np.any(lo < 0) or np.any(lo > hi):
                raise ValueError("interval needs 0 <= lower <= upper")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)
        elif self.kind == "segment":
            g0 = np.asarray(self.gamma0, float)
            if np.any(g0 < 0) or not (0 <= self.alpha_lo <= self.alpha_hi <= 1):
                raise ValueError("segment needs gamma0 >= 0 and 0 <= alpha_lo <= alpha_hi <= 1")
            object.__setattr__(self, "gamma0", g0)
        elif self.kind == "budgeted":
            base, spread = np.asarray(self.gamma_base, float), np.asarray(self.spread, float)
            if base.shape != spread.shape or np.any(base < 0) or np.any(spread < 0) or self.budget < 0:
                raise ValueError("budgeted needs base, spread >= 0 and budget >= 0")
            object.__setattr__(self, "gamma_base", base)
            object.__setattr__(self, "spread", spread)
        else:
            raise ValueError(f"unknown omega kind {self.kind!r}")

    @staticmethod
    def interval(lower, upper) -> "OmegaSpec":
        return OmegaSpec("interval", lower=np.asarray(lower, float),
                         upper=np.asarray(upper, float))

    @staticmethod
    def segment(gamma0, alpha_lo: float = 0.0, alpha_hi: float = 1.0) -> "OmegaSpec":
        return OmegaSpec("segment", gamma0=np.asarray(gamma0, float),
                         alpha_lo=float(alpha_lo), alpha_hi=float(alpha_hi))

    @staticmethod
    def budgeted(gamma_base, spread, budget) -> "OmegaSpec":
        return OmegaSpec("budgeted", gamma_base=np.asarray(gamma_base, float),
                         spread=np.asarray(spread, float), budget=float(budget))

    @property
    def num_groups(self) -> int:
        if self.kind == "interval":
            return self.lower.shape[0]
        if self.kind == "segment":
            return self.gamma0.shape[0]
        return self.gamma_base.shape[0]

    @property
    def upper_bound(self) -> np.ndarray:
        """Componentwise upper bound on every gamma in the set."""
        if self.kind == "interval":
            return self.upper
        if self.kind == "segment":
            return self.alpha_hi * self.gamma0
        return self.gamma_base + self.spread

    @property
    def start_gamma(self) -> np.ndarray:
        """Initial budget vector used to seed the multiparametric loop."""
        if self.kind == "interval":
            return self.lower
        if self.kind == "segment":
            return np.zeros(self.num_groups)
        return self.gamma_base


def _check_x(inst: Instance, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,):
        raise ValueError(f"x has shape {x.shape}, expected ({inst.n},)")
    return x


def _check_gamma(inst: Instance, gamma) -> np.ndarray:
    g = np.asarray(gamma, dtype=float)
    if g.shape != (inst.num_groups,):
        raise ValueError(f"gamma has shape {g.shape}, expected ({inst.num_groups},)")
    return g


def robustness_value(inst: Instance, x, gamma) -> float:
    """Worst-case cost of x: group deviations capped by the budgets."""
    x = _check_x(inst, x)
    gamma = _check_gamma(inst, gamma)
    total = float(inst.c_lower @ x)
    for k, g in enumerate(inst.groups):
        idx = list(g)
        room = float(inst.deviations[idx] @ x[idx])
        total += min(gamma[k], room)
    return total


def robustness_value_variant(inst: Instance, x, gamma) -> float:
    """Worst-case cost under the fractional variant (unit budgets per item)."""
    x = _check_x(inst, x)
    gamma = _check_gamma(inst, gamma)
    total = float(inst.c_lower @ x)
    for k, g in enumerate(inst.groups):
        idx = np.asarray(g, dtype=int)
        devs = np.sort(inst.deviations[idx] * x[idx])[::-1]
        devs = devs[devs > 0]
        if devs.size == 0:
            continue
        take = np.clip(gamma[k] - np.arange(devs.size), 0.0, 1.0)
        total += float(devs @ take)
    return total


def worst_case_cost_vector(inst: Instance, x, gamma, variant: bool = False) -> np.ndarray:
    """A cost vector in the uncertainty set attaining the worst case for x."""
    x = _check_x(inst, x)
    gamma = _check_gamma(inst, gamma)
    lam = np.zeros(inst.n)
    for k, g in enumerate(inst.groups):
        rem = gamma[k]
        if variant:
            active = sorted((j for j in g if x[j] > 0.5),
                            key=lambda j: -inst.deviations[j])
            for j in active:
                take = min(1.0, rem)
                lam[j] = take
                rem -= take
                if rem <= 0:
                    break
        else:
            for j in g:
                if x[j] > 0.5:
                    take = min(inst.deviations[j], rem)
                    lam[j] = take
                    rem -= take
                    if rem <= 0:
                        break
    if variant:
        return inst.c_lower + lam * inst.deviations
    return inst.c_lower + lam


def contains(omega: OmegaSpec, gamma, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership test with scaled tolerance on equalities and bounds."""
    g = np.asarray(gamma, dtype=float)
    if g.shape != (omega.num_groups,):
        raise ValueError("gamma dimension does not match omega")
    scale = np.maximum(1.0, omega.upper_bound)
    eps = tol * scale
    if np.any(g < -eps):
        return False
    if omega.kind == "interval":
        return bool(np.all(g >= omega.lower - eps) and np.all(g <= omega.upper + eps))
    if omega.kind == "segment":
        g0 = omega.gamma0
        if np.all(g0 <= 0):
            return bool(np.all(np.abs(g) <= eps))
        k = int(np.argmax(g0))
        alpha = g[k] / g0[k]
        if not (omega.alpha_lo - tol <= alpha <= omega.alpha_hi + tol):
            return False
        return bool(np.all(np.abs(g - alpha * g0) <= eps))
    beta = g - omega.gamma_base
    if np.any(beta < -eps) or np.any(beta > omega.spread + eps):
        return False
    return bool(np.sum(np.clip(beta, 0.0, None)) <= omega.budget + tol * max(1.0, omega.budget))


def _box_grid(lo: np.ndarray, hi: np.ndarray, m: int) -> np.ndarray:
    axes = [np.linspace(lo[k], hi[k], m) for k in range(lo.shape[0])]
    return np.array(list(product(*axes)))


def sample_gamma(omega: OmegaSpec, mode: str, m: int = 5,
                 seed: int = 0, count: int = 100) -> np.ndarray:
    """Sample budget vectors from omega; returns an array of shape (N, K).

    Modes: ``grid`` (m points per axis, endpoints included), ``uniform``
    (seeded), ``vertices`` (box corners / budgeted extreme points; refused
    for segments and for K > 20).
    """
    K = omega.num_groups
    if mode == "grid":
        if m < 2:
            raise ValueError("grid needs m >= 2")
        if omega.kind == "segment":
            alphas = np.linspace(omega.alpha_lo, omega.alpha_hi, m)
            return np.array([a * omega.gamma0 for a in alphas])
        if m ** K > 2_000_000:
            raise ValueError("grid would be too large")
        if omega.kind == "interval":
            return _box_grid(omega.lower, omega.upper, m)
        pts = _box_grid(omega.gamma_base, omega.gamma_base + omega.spread, m)
        keep = [p for p in pts if contains(omega, p)]
        verts = sample_gamma(omega, "vertices") if K <= 20 else [omega.gamma_base]
        out = np.array(list(keep) + list(verts))
        return np.unique(out, axis=0)
    if mode == "uniform":
        rng = np.random.default_rng(seed)
        if omega.kind == "interval":
            u = rng.random((count, K))
            return omega.lower + u * (omega.upper - omega.lower)
        if omega.kind == "segment":
            a = omega.alpha_lo + rng.random(count) * (omega.alpha_hi - omega.alpha_lo)
            return a[:, None] * omega.gamma0[None, :]
        beta = rng.random((count, K)) * omega.spread
        tot = beta.sum(axis=1)
        over = tot > omega.budget
        if np.any(over):
            with np.errstate(invalid="ignore", divide="ignore"):
                f = np.where(tot > 0, omega.budget / tot, 0.0)
            beta[over] *= f[over, None]
        return omega.gamma_base + beta
    if mode == "vertices":
        if K > 20:
            raise ValueError("vertex enumeration refused for K > 20")
        if omega.kind == "interval":
            return np.array(list(product(*[(omega.lower[k], omega.upper[k]) for k in range(K)])))
        if omega.kind == "budgeted":
            pts = [omega.gamma_base.copy()]
            for k in range(K):
                p = omega.gamma_base.copy()
                p[k] += min(omega.budget, omega.spread[k])
                pts.append(p)
            return np.unique(np.array(pts), axis=0)
        raise ValueError("vertices mode applies to interval/budgeted domains only")
    raise ValueError(f"unknown sampling mode {mode!r}")


# ---------------------------------------------------------------------------
# LP cross-check forms (test oracles; closed forms above are the evaluators)
# ---------------------------------------------------------------------------

def build_w_lp(inst: Instance, x, gamma, variant: bool = False) -> MilpModel:
    """Primal worst-case LP in the deviation variables.

    Objective value of the solved LP plus ``c_lower @ x`` equals the
    robustness of x.
    """
    x = _check_x(inst, x)
    gamma = _check_gamma(inst, gamma)
    b = ModelBuilder("w_lp")
    lam = {}
    for j in range(inst.n):
        hi = 1.0 if variant else inst.deviations[j]
        coef = inst.deviations[j] * x[j] if variant else x[j]
        lam[j] = b.add_continuous(f"lam{j}", 0.0, hi, obj=coef)
    for k, g in enumerate(inst.groups):
        b.add_row({lam[j]: 1.0 for j in g}, "<=", gamma[k])
    return b.build(maximize=True)


def build_dw_lp(inst: Instance, x, gamma, variant: bool = False) -> MilpModel:
    """Dual worst-case LP in (pi, rho); value + ``c_lower @ x`` = robustness."""
    x = _check_x(inst, x)
    gamma = _check_gamma(inst, gamma)
    b = ModelBuilder("dw_lp")
    pi = [b.add_continuous(f"pi{k}", 0.0, np.inf, obj=gamma[k])
          for k in range(inst.num_groups)]
    rho = {}
    for k, g in enumerate(inst.groups):
        for j in g:
            cost = 1.0 if variant else inst.deviations[j]
            rho[j] = b.add_continuous(f"rho{j}", 0.0, np.inf, obj=cost)
            rhs = inst.deviations[j] * x[j] if variant else x[j]
            b.add_row({pi[k]: 1.0, rho[j]: 1.0}, ">=", rhs)
    return b.build(maximize=False)
