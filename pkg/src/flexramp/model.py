"""Value-based container for mixed-integer linear programs.

A :class:`LinearModel` is a plain registry of named variables and named
linear constraints plus a linear objective.  Nothing engine-specific is
stored here; solver backends consume the registry through
:meth:`LinearModel.to_arrays`.

Constraint names are stable identifiers of the form ``tag[indices]``
(e.g. ``"1d[G07,5]"``).  Feasibility checkers and dual extraction key on
these names, so builders must keep them unique and descriptive of the row
they tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ModelBuildError

LE = "<="
GE = ">="
EQ = "=="

_SENSES = (LE, GE, EQ)


@dataclass
class ModelArrays:
    """Standard-form view of a model, ready for a numerical backend.

    Rows keep the registry order: constraint i of the model is row i of
    ``a`` with sense ``senses[i]`` and right-hand side ``rhs[i]``.
    """

    obj: np.ndarray          # (nvars,)
    lb: np.ndarray           # (nvars,)
    ub: np.ndarray           # (nvars,)
    integer: np.ndarray      # (nvars,) bool
    a: sp.csr_matrix         # (ncons, nvars)
    senses: np.ndarray       # (ncons,) of "<=", ">=", "=="
    rhs: np.ndarray          # (ncons,)


@dataclass
class LinearModel:
    name: str = ""
    mode: str = ""

    var_names: list = field(default_factory=list)
    con_names: list = field(default_factory=list)

    _var_by_name: dict = field(default_factory=dict)
    _con_by_name: dict = field(default_factory=dict)

    _lb: list = field(default_factory=list)
    _ub: list = field(default_factory=list)
    _integer: list = field(default_factory=list)
    _obj: list = field(default_factory=list)

    _rows_cols: list = field(default_factory=list)   # per-row int arrays
    _rows_coefs: list = field(default_factory=list)  # per-row float arrays
    _senses: list = field(default_factory=list)
    _rhs: list = field(default_factory=list)

    # -- variables ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    @property
    def ncons(self) -> int:
        return len(self.con_names)

    def add_var(self, name: str, lb: float = 0.0, ub: float = math.inf,
                integer: bool = False, obj: float = 0.0) -> int:
        if name in self._var_by_name:
            raise ModelBuildError(f"duplicate variable name {name!r}")
        idx = len(self.var_names)
        self.var_names.append(name)
        self._var_by_name[name] = idx
        self._lb.append(float(lb))
        self._ub.append(float(ub))
        self._integer.append(bool(integer))
        self._obj.append(float(obj))
        return idx

    def var_index(self, name: str) -> int:
        return self._var_by_name[name]

    def set_obj(self, idx: int, coef: float) -> None:
        self._obj[idx] = float(coef)

    def fix_var(self, idx: int, value: float) -> None:
        self._lb[idx] = float(value)
        self._ub[idx] = float(value)

    def var_bounds(self, idx: int) -> tuple:
        return self._lb[idx], self._ub[idx]

    def is_integer(self, idx: int) -> bool:
        return self._integer[idx]

    # -- constraints -------------------------------------------------------

    def add_constr(self, name: str, cols, coefs, sense: str, rhs: float) -> int:
        if name in self._con_by_name:
            raise ModelBuildError(f"duplicate constraint name {name!r}")
        if sense not in _SENSES:
            raise ModelBuildError(f"bad sense {sense!r} for constraint {name!r}")
        cols = np.asarray(cols, dtype=np.int64)
        coefs = np.asarray(coefs, dtype=np.float64)
        if cols.shape != coefs.shape or cols.ndim != 1:
            raise ModelBuildError(f"coefficient shape mismatch in constraint {name!r}")
        if cols.size and (cols.min() < 0 or cols.max() >= self.nvars):
            raise ModelBuildError(f"constraint {name!r} references an unregistered variable")
        idx = len(self.con_names)
        self.con_names.append(name)
        self._con_by_name[name] = idx
        self._rows_cols.append(cols)
        self._rows_coefs.append(coefs)
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        return idx

    def con_index(self, name: str) -> int:
        return self._con_by_name[name]

    def has_con(self, name: str) -> bool:
        return name in self._con_by_name

    def con_sense(self, idx: int) -> str:
        return self._senses[idx]

    def con_rhs(self, idx: int) -> float:
        return self._rhs[idx]

    def row(self, idx: int) -> tuple:
        return self._rows_cols[idx], self._rows_coefs[idx]

    # -- export ------------------------------------------------------------

    def to_arrays(self) -> ModelArrays:
        n = self.nvars
        m = self.ncons
        if m:
            lengths = np.fromiter((c.size for c in self._rows_cols), dtype=np.int64, count=m)
            rows = np.repeat(np.arange(m, dtype=np.int64), lengths)
            cols = np.concatenate(self._rows_cols) if lengths.sum() else np.empty(0, np.int64)
            data = np.concatenate(self._rows_coefs) if lengths.sum() else np.empty(0, np.float64)
            a = sp.coo_matrix((data, (rows, cols)), shape=(m, n)).tocsr()
        else:
            a = sp.csr_matrix((0, n))
        return ModelArrays(
            obj=np.asarray(self._obj, dtype=np.float64),
            lb=np.asarray(self._lb, dtype=np.float64),
            ub=np.asarray(self._ub, dtype=np.float64),
            integer=np.asarray(self._integer, dtype=bool),
            a=a,
            senses=np.asarray(self._senses, dtype=object),
            rhs=np.asarray(self._rhs, dtype=np.float64),
        )

    def copy(self) -> "LinearModel":
        clone = LinearModel(name=self.name, mode=self.mode)
        clone.var_names = list(self.var_names)
        clone.con_names = list(self.con_names)
        clone._var_by_name = dict(self._var_by_name)
        clone._con_by_name = dict(self._con_by_name)
        clone._lb = list(self._lb)
        clone._ub = list(self._ub)
        clone._integer = list(self._integer)
        clone._obj = list(self._obj)
        clone._rows_cols = list(self._rows_cols)    # rows themselves are immutable
        clone._rows_coefs = list(self._rows_coefs)
        clone._senses = list(self._senses)
        clone._rhs = list(self._rhs)
        return clone

    def objective_value(self, x: np.ndarray) -> float:
        return float(np.dot(np.asarray(self._obj), x))

    def row_activity(self, x: np.ndarray) -> np.ndarray:
        """A·x for every registered row, in registry order."""
        out = np.empty(self.ncons)
        for i in range(self.ncons):
            out[i] = float(np.dot(self._rows_coefs[i], x[self._rows_cols[i]]))
        return out

    # -- debugging aid -----------------------------------------------------

    def lp_text(self) -> str:
        """Human-readable LP-format dump.

        Names are sanitized (``c_``/``x_`` prefixes, brackets and commas
        replaced) because LP format forbids names that start with a digit.
        Intended for debugging only; not a round-trip format.
        """
        def vn(i):
            return "x_" + self.var_names[i].replace("[", "_").replace("]", "").replace(",", "_")

        def cn(i):
            return "c_" + self.con_names[i].replace("[", "_").replace("]", "").replace(",", "_")

        lines = ["Minimize", " obj:"]
        terms = [f" {c:+.12g} {vn(i)}" for i, c in enumerate(self._obj) if c]
        lines.extend(terms or [" 0 " + (vn(0) if self.nvars else "x_none")])
        lines.append("Subject To")
        for i in range(self.ncons):
            cols, coefs = self._rows_cols[i], self._rows_coefs[i]
            body = " ".join(f"{c:+.12g} {vn(j)}" for j, c in zip(cols, coefs))
            op = {LE: "<=", GE: ">=", EQ: "="}[self._senses[i]]
            lines.append(f" {cn(i)}: {body} {op} {self._rhs[i]:.12g}")
        lines.append("Bounds")
        for i in range(self.nvars):
            lo, hi = self._lb[i], self._ub[i]
            lo_s = "-inf" if lo == -math.inf else f"{lo:.12g}"
            hi_s = "+inf" if hi == math.inf else f"{hi:.12g}"
            lines.append(f" {lo_s} <= {vn(i)} <= {hi_s}")
        ints = [vn(i) for i in range(self.nvars) if self._integer[i]]
        if ints:
            lines.append("General")
            lines.append(" " + " ".join(ints))
        lines.append("End")
        return "\n".join(lines) + "\n"

    def dump_lp(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.lp_text())
