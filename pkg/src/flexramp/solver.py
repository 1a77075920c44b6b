"""Solver backend abstraction.

Backends consume a :class:`~flexramp.model.LinearModel` by value (named
variables and constraints in, named results out) so that any MILP/LP engine
can be adapted without engine objects crossing the boundary.  The bundled
backend wraps HiGHS through scipy.optimize.

Dual sign convention (used everywhere downstream): the reported dual of an
inequality row is the nonnegative Lagrange multiplier of the row *as
registered* (``<=`` or ``>=``), and the dual of an equality row is the
sensitivity of the objective to its right-hand side.  With minimization
this makes every binding-constraint payment term nonnegative.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from .errors import InfeasibleError, SolveError
from .model import EQ, GE, LE, LinearModel

# statuses reported by solve_milp
OPTIMAL = "optimal-within-gap"
INCUMBENT = "feasible-incumbent"
INFEASIBLE = "infeasible"
TIME_LIMIT = "time-limit"


@dataclass
class SolveOptions:
    mip_gap: float = 1e-3
    time_limit: float = 600.0
    require_basic_duals: bool = True
    threads: int = 1          # hint only; the scipy backend is single-threaded
    deterministic: bool = True

    def __post_init__(self):
        if self.mip_gap < 0:
            raise ValueError("mip_gap must be >= 0")
        if self.time_limit <= 0:
            raise ValueError("time_limit must be > 0")


@dataclass
class MilpResult:
    status: str
    x: np.ndarray | None
    objective: float | None
    mip_gap: float | None
    message: str = ""

    @property
    def feasible(self) -> bool:
        return self.x is not None


@dataclass
class LpDualResult:
    x: np.ndarray
    objective: float
    duals: np.ndarray          # per registered constraint, sign per module docstring
    reduced_costs: np.ndarray  # per variable
    degenerate: bool
    message: str = ""
    con_names: list = field(default_factory=list)

    def dual(self, name: str) -> float:
        return float(self.duals[self.con_names.index(name)])

    def duals_by_name(self) -> dict:
        return {n: float(d) for n, d in zip(self.con_names, self.duals)}


class ScipyHighsBackend:
    """HiGHS via scipy.optimize: branch-and-bound MILP + dual-simplex LP."""

    name = "scipy"

    def solve_milp(self, model: LinearModel, options: SolveOptions | None = None) -> MilpResult:
        options = options or SolveOptions()
        arr = model.to_arrays()
        lo = np.where(arr.senses == GE, arr.rhs, np.where(arr.senses == EQ, arr.rhs, -np.inf))
        hi = np.where(arr.senses == LE, arr.rhs, np.where(arr.senses == EQ, arr.rhs, np.inf))
        constraints = LinearConstraint(arr.a, lo, hi) if model.ncons else ()
        res = milp(
            arr.obj,
            constraints=constraints,
            integrality=arr.integer.astype(np.uint8),
            bounds=Bounds(arr.lb, arr.ub),
            options={
                "mip_rel_gap": options.mip_gap,
                "time_limit": options.time_limit,
                "presolve": True,
                "disp": False,
            },
        )
        if res.status == 2:
            return MilpResult(INFEASIBLE, None, None, None, res.message)
        if res.status == 3:
            raise SolveError(f"model {model.name!r} is unbounded: {res.message}")
        if res.status == 1:  # a limit was hit; an incumbent may or may not exist
            if res.x is None:
                return MilpResult(TIME_LIMIT, None, None, None, res.message)
            return MilpResult(INCUMBENT, np.asarray(res.x), float(res.fun),
                              _gap_of(res), res.message)
        if res.status != 0 or res.x is None:
            raise SolveError(f"backend failure on {model.name!r}: {res.message}")
        return MilpResult(OPTIMAL, np.asarray(res.x), float(res.fun), _gap_of(res), res.message)

    def solve_lp_duals(self, model: LinearModel, options: SolveOptions | None = None) -> LpDualResult:
        options = options or SolveOptions()
        arr = model.to_arrays()
        free = arr.integer & (arr.lb != arr.ub)
        if free.any():
            bad = model.var_names[int(np.flatnonzero(free)[0])]
            raise SolveError(f"solve_lp_duals requires all integer variables fixed; {bad!r} is free")

        is_le = arr.senses == LE
        is_ge = arr.senses == GE
        is_eq = arr.senses == EQ
        # >= rows are negated into the <= block; the multiplier mapping below undoes it
        a_ub = None
        b_ub = None
        ub_rows = np.flatnonzero(is_le | is_ge)
        if ub_rows.size:
            sign = np.where(is_le[ub_rows], 1.0, -1.0)
            a_ub = arr.a[ub_rows].multiply(sign[:, None]).tocsr()
            b_ub = arr.rhs[ub_rows] * sign
        eq_rows = np.flatnonzero(is_eq)
        a_eq = arr.a[eq_rows] if eq_rows.size else None
        b_eq = arr.rhs[eq_rows] if eq_rows.size else None

        method = "highs-ds" if options.require_basic_duals else "highs"
        res = linprog(
            arr.obj, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
            bounds=np.column_stack([arr.lb, arr.ub]),
            method=method,
            options={"presolve": True, "time_limit": options.time_limit},
        )
        if res.status == 2:
            raise InfeasibleError(f"LP {model.name!r} infeasible: {res.message}")
        if res.status != 0:
            raise SolveError(f"LP failure on {model.name!r}: {res.message}")

        duals = np.zeros(model.ncons)
        if ub_rows.size:
            # nonnegative multiplier of the row as registered
            duals[ub_rows] = -np.asarray(res.ineqlin.marginals)
        if eq_rows.size:
            duals[eq_rows] = np.asarray(res.eqlin.marginals)
        reduced = np.asarray(res.lower.marginals) + np.asarray(res.upper.marginals)

        degenerate = False
        if ub_rows.size:
            slack = np.abs(np.asarray(res.ineqlin.residual))
            mult = np.abs(duals[ub_rows])
            degenerate = bool(np.any((slack <= 1e-9) & (mult <= 1e-9)))

        return LpDualResult(
            x=np.asarray(res.x),
            objective=float(res.fun),
            duals=duals,
            reduced_costs=reduced,
            degenerate=degenerate,
            message=res.message,
            con_names=model.con_names,
        )


def _gap_of(res) -> float | None:
    gap = getattr(res, "mip_gap", None)
    return float(gap) if gap is not None and math.isfinite(gap) else None


def check_complementary_slackness(model: LinearModel, x: np.ndarray,
                                  duals: np.ndarray, tol: float = 1e-6) -> list:
    """Return the names of rows where dual * slack exceeds tol.

    Complementary slackness must hold for any optimal primal/dual pair, so a
    nonempty result means the pair is not jointly optimal (or tolerances are
    violated).
    """
    bad = []
    activity = model.row_activity(x)
    for i, name in enumerate(model.con_names):
        sense = model.con_sense(i)
        if sense == EQ:
            continue
        slack = model.con_rhs(i) - activity[i] if sense == LE else activity[i] - model.con_rhs(i)
        if abs(duals[i] * slack) > tol * max(1.0, abs(model.con_rhs(i))):
            bad.append(name)
    return bad


_REGISTRY = {"scipy": ScipyHighsBackend}


def register_backend(key: str, factory) -> None:
    _REGISTRY[key] = factory


def get_backend(key: str | None = None):
    """Instantiate a backend by key, env var FLEXRAMP_BACKEND, or default."""
    key = key or os.environ.get("FLEXRAMP_BACKEND", "scipy")
    try:
        return _REGISTRY[key]()
    except KeyError:
        raise SolveError(f"unknown solver backend {key!r}; registered: {sorted(_REGISTRY)}")
