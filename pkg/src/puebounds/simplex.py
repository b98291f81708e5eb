"""Dense two-phase simplex with an exact rational re-check of the final basis.

Problems are ``min c.x`` subject to equality rows, ``>=`` rows and ``x >= 0``.
Data is kept as exact ``Fraction`` values; the solver runs on a scaled
float64 tableau and, when asked, re-solves the final basis in rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = ["LpProblem", "LpSolution", "NumericFailure", "solve_lp", "to_lp_format"]

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11
DEGENERATE_SWITCH = 50


class NumericFailure(RuntimeError):
    pass


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass
class LpProblem:
    c: list[Fraction]
    A_eq: list[list[Fraction]] = field(default_factory=list)
    b_eq: list[Fraction] = field(default_factory=list)
    A_ge: list[list[Fraction]] = field(default_factory=list)
    b_ge: list[Fraction] = field(default_factory=list)
    col_names: list[str] | None = None
    row_names: list[str] | None = None
    # optional per-row divisors applied before the float solve (eq rows first)
    row_scale: list[float] | None = None

    def __post_init__(self) -> None:
        self.c = [_frac(v) for v in self.c]
        self.A_eq = [[_frac(v) for v in r] for r in self.A_eq]
        self.b_eq = [_frac(v) for v in self.b_eq]
        self.A_ge = [[_frac(v) for v in r] for r in self.A_ge]
        self.b_ge = [_frac(v) for v in self.b_ge]
        nv = len(self.c)
        for r in self.A_eq + self.A_ge:
            if len(r) != nv:
                raise ValueError(f"row of length {len(r)} in a problem with {nv} variables")
        if len(self.A_eq) != len(self.b_eq) or len(self.A_ge) != len(self.b_ge):
            raise ValueError("constraint/right-hand-side count mismatch")
        if self.col_names is None:
            self.col_names = [f"x{j + 1}" for j in range(nv)]
        if self.row_names is None:
            self.row_names = [f"e{i + 1}" for i in range(len(self.A_eq))] + [
                f"g{i + 1}" for i in range(len(self.A_ge))
            ]

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_constraints(self) -> int:
        return len(self.A_eq) + len(self.A_ge)

    def objective(self, x: Sequence) -> Fraction | float:
        return sum(ci * xi for ci, xi in zip(self.c, x))

    def max_violation(self, x: Sequence[float]) -> float:
        """Largest constraint violation of a float point, relative to row scale."""
        worst = 0.0
        xf = np.asarray([float(v) for v in x])
        worst = max(worst, float(np.max(-xf, initial=0.0)))
        for row, b in zip(self.A_eq, self.b_eq):
            r = np.array([float(v) for v in row])
            scale = max(1.0, float(np.max(np.abs(r) * np.maximum(np.abs(xf), 1.0))), abs(float(b)))
            worst = max(worst, abs(r @ xf - float(b)) / scale)
        for row, b in zip(self.A_ge, self.b_ge):
            r = np.array([float(v) for v in row])
            scale = max(1.0, float(np.max(np.abs(r) * np.maximum(np.abs(xf), 1.0))), abs(float(b)))
            worst = max(worst, (float(b) - r @ xf) / scale)
        return worst


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    value: float | None = None
    point: list[float] | None = None
    dual_eq: list[float] | None = None
    dual_ge: list[float] | None = None
    certified: bool = False
    exact_value: Fraction | None = None
    exact_point: list[Fraction] | None = None
    exact_dual_eq: list[Fraction] | None = None
    exact_dual_ge: list[Fraction] | None = None
    basis: list[int] | None = None
    iterations: int = 0


def _standard_form(prob: LpProblem):
    """Exact standard form A x = b over [x, surplus] columns."""
    m_eq, m_ge, nv = len(prob.A_eq), len(prob.A_ge), prob.num_vars
    ncols = nv + m_ge
    A = []
    b = []
    for row, rhs in zip(prob.A_eq, prob.b_eq):
        A.append(list(row) + [Fraction(0)] * m_ge)
        b.append(rhs)
    for i, (row, rhs) in enumerate(zip(prob.A_ge, prob.b_ge)):
        surplus = [Fraction(0)] * m_ge
        surplus[i] = Fraction(-1)
        A.append(list(row) + surplus)
        b.append(rhs)
    c = list(prob.c) + [Fraction(0)] * m_ge
    return A, b, c, ncols, m_eq + m_ge


def _equilibrate(A: np.ndarray, passes: int = 4):
    """Geometric-mean row/column scaling; returns (row_factors, col_factors)."""
    m, n = A.shape
    r = np.ones(m)
    s = np.ones(n)
    M = np.abs(A)
    for _ in range(passes):
        S = M * r[:, None] * s[None, :]
        with np.errstate(divide="ignore"):
            mx = np.where(S > 0, S, 0).max(axis=1)
            mn = np.where(S > 0, S, np.inf).min(axis=1)
        f = np.where(mx > 0, 1.0 / np.sqrt(mx * np.where(np.isfinite(mn), mn, mx)), 1.0)
        r *= f
        S = M * r[:, None] * s[None, :]
        mx = np.where(S > 0, S, 0).max(axis=0)
        mn = np.where(S > 0, S, np.inf).min(axis=0)
        g = np.where(mx > 0, 1.0 / np.sqrt(mx * np.where(np.isfinite(mn), mn, mx)), 1.0)
        s *= g
    return r, s


def _run_simplex(T: np.ndarray, basis: list[int], allowed: np.ndarray, max_iter: int) -> tuple[str, int]:
    """Minimize the objective stored in the last row of T; in-place pivoting.

    T has shape (m+1, ncols+1): constraint rows then the reduced-cost row;
    last column is the right-hand side (objective row holds -value).
    """
    m = T.shape[0] - 1
    degenerate = 0
    for it in range(max_iter):
        rc = T[-1, :-1]
        cand = np.flatnonzero((rc < -FEAS_TOL) & allowed)
        if cand.size == 0:
            return "optimal", it
        if degenerate >= DEGENERATE_SWITCH:
            col = int(cand[0])  # Bland
        else:
            col = int(cand[np.argmin(rc[cand])])
        colv = T[:m, col]
        pos = colv > PIVOT_TOL
        if not pos.any():
            return "unbounded", it
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / colv[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, abs(best)))
        row = int(min(ties, key=lambda i: basis[i]))
        degenerate = degenerate + 1 if best <= FEAS_TOL else 0
        T[row] /= T[row, col]
        for i in range(m + 1):
            if i != row and T[i, col] != 0.0:
                T[i] -= T[i, col] * T[row]
        basis[row] = col
    raise NumericFailure(f"simplex iteration cap {max_iter} exceeded")


def _exact_solve(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over the rationals; None if singular."""
    n = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [aug[i][n] for i in range(n)]


def _certify(prob: LpProblem, basis_cols: list[int], rows: list[int]):
    """Exact primal/dual feasibility check of a basis. Returns exact data or None."""
    A, b, c, ncols, m = _standard_form(prob)
    B = [[A[i][j] for j in basis_cols] for i in rows]
    xB = _exact_solve(B, [b[i] for i in rows])
    if xB is None or any(v < 0 for v in xB):
        return None
    x = [Fraction(0)] * ncols
    for j, v in zip(basis_cols, xB):
        x[j] = v
    # every original row, including any dropped as redundant, must hold exactly
    for i in range(m):
        if sum(A[i][j] * x[j] for j in basis_cols) != b[i]:
            return None
    BT = [[A[i][j] for i in rows] for j in basis_cols]
    yr = _exact_solve(BT, [c[j] for j in basis_cols])
    if yr is None:
        return None
    y = [Fraction(0)] * m
    for i, v in zip(rows, yr):
        y[i] = v
    for j in range(ncols):
        if c[j] - sum(y[i] * A[i][j] for i in rows) < 0:
            return None
    value = sum(c[j] * x[j] for j in range(ncols))
    return value, x[: prob.num_vars], y


def solve_lp(prob: LpProblem, certify: bool | None = None, max_iter: int = 20000) -> LpSolution:
    """Solve ``prob``; ``certify`` defaults to True for up to 41 variables."""
    A, b, c, ncols, m = _standard_form(prob)
    if certify is None:
        certify = prob.num_vars <= 41
    Af = np.array([[float(v) for v in row] for row in A], dtype=float).reshape(m, ncols)
    bf = np.array([float(v) for v in b])
    cf = np.array([float(v) for v in c])
    if prob.row_scale is not None:
        hint = np.asarray(prob.row_scale, dtype=float)
        Af /= hint[:, None]
        bf /= hint
    else:
        hint = np.ones(m)
    rf, sf = _equilibrate(Af)
    As = Af * rf[:, None] * sf[None, :]
    bs = bf * rf
    cs = cf * sf
    sign = np.where(bs < 0, -1.0, 1.0)
    As *= sign[:, None]
    bs *= sign

    # phase I with one artificial per row
    T = np.zeros((m + 1, ncols + m + 1))
    T[:m, :ncols] = As
    T[:m, ncols : ncols + m] = np.eye(m)
    T[:m, -1] = bs
    T[-1, :ncols] = -As.sum(axis=0)
    T[-1, -1] = -bs.sum()
    basis = list(range(ncols, ncols + m))
    allowed = np.ones(ncols + m, dtype=bool)
    status, it1 = _run_simplex(T, basis, allowed, max_iter)
    if -T[-1, -1] > FEAS_TOL * max(1.0, np.abs(bs).max(initial=0.0)):
        return LpSolution("infeasible", iterations=it1)
    # drive remaining artificials out; rows with no structural entry are redundant
    keep_rows = list(range(m))
    for r in range(m):
        if basis[r] >= ncols:
            nz = np.flatnonzero(np.abs(T[r, :ncols]) > 1e-9)
            if nz.size:
                col = int(nz[0])
                T[r] /= T[r, col]
                for i in range(m + 1):
                    if i != r and T[i, col] != 0.0:
                        T[i] -= T[i, col] * T[r]
                basis[r] = col
            else:
                keep_rows.remove(r)
    # phase II
    T2 = np.zeros((len(keep_rows) + 1, ncols + 1))
    T2[:-1, :ncols] = T[keep_rows, :ncols]
    T2[:-1, -1] = T[keep_rows, -1]
    basis2 = [basis[r] for r in keep_rows]
    T2[-1, :ncols] = cs
    for i, j in enumerate(basis2):
        if T2[-1, j] != 0.0:
            T2[-1] -= T2[-1, j] * T2[i]
    status, it2 = _run_simplex(T2, basis2, np.ones(ncols, dtype=bool), max_iter)
    if status == "unbounded":
        return LpSolution("unbounded", iterations=it1 + it2)

    xs = np.zeros(ncols)
    for i, j in enumerate(basis2):
        xs[j] = T2[i, -1]
    x = xs * sf
    # duals for the original (unscaled) rows from B^T y = c_B
    Bm = Af[np.ix_(keep_rows, basis2)]
    yk = np.linalg.solve(Bm.T, cf[basis2])
    y = np.zeros(m)
    y[keep_rows] = yk
    y = y / hint
    sol = LpSolution(
        "optimal",
        value=float(cf @ x),
        point=[float(v) for v in x[: prob.num_vars]],
        dual_eq=[float(v) for v in y[: len(prob.A_eq)]],
        dual_ge=[float(v) for v in y[len(prob.A_eq) :]],
        basis=list(basis2),
        iterations=it1 + it2,
    )
    if certify:
        res = _certify(prob, basis2, keep_rows)
        if res is not None:
            val, xe, ye = res
            sol.certified = True
            sol.exact_value = val
            sol.exact_point = xe
            sol.exact_dual_eq = ye[: len(prob.A_eq)]
            sol.exact_dual_ge = ye[len(prob.A_eq) :]
            sol.value = float(val)
            sol.point = [float(v) for v in xe]
            sol.dual_eq = [float(v) for v in sol.exact_dual_eq]
            sol.dual_ge = [float(v) for v in sol.exact_dual_ge]
    return sol


def _lp_num(v: Fraction) -> str:
    return repr(float(v))


def to_lp_format(prob: LpProblem, name: str = "lp") -> str:
    """Serialize in CPLEX LP text format (objective sense MIN)."""

    def expr(row: Sequence[Fraction]) -> str:
        parts = []
        for coef, nm in zip(row, prob.col_names):
            if coef == 0:
                continue
            f = float(coef)
            parts.append(f"{'-' if f < 0 else '+'} {abs(f)!r} {nm}")
        if not parts:
            return "0 " + prob.col_names[0]
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]

    lines = [f"\\ {name}", "Minimize", f" obj: {expr(prob.c)}", "Subject To"]
    names = prob.row_names
    for k, (row, rhs) in enumerate(zip(prob.A_eq, prob.b_eq)):
        lines.append(f" {names[k]}: {expr(row)} = {_lp_num(rhs)}")
    off = len(prob.A_eq)
    for k, (row, rhs) in enumerate(zip(prob.A_ge, prob.b_ge)):
        lines.append(f" {names[off + k]}: {expr(row)} >= {_lp_num(rhs)}")
    lines.append("Bounds")
    for nm in prob.col_names:
        lines.append(f" {nm} >= 0")
    lines.append("End")
    return "\n".join(lines) + "\n"
