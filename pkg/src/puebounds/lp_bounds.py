"""Finite-length LP lower bounds on the probability of undetected error.

Two LP families are built: one in the dual-code spectrum B^perp (``perp``)
and one in the code spectrum B (``direct``). Their duals are checked as
polynomial certificates Z, Y in the Krawtchouk basis. The cone bound and
the finite-n polynomials behind the asymptotic bounds live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .asymptote import tau0
from .code_lab import WeightEnum
from .kraw_core import (
    F_e_closed,
    ParameterError,
    binom,
    coef_transform,
    kraw_table,
    krawtchouk_int,
    smallest_root,
)
from .simplex import LpProblem, LpSolution, solve_lp

__all__ = [
    "KrawPoly",
    "CertificateResult",
    "ConeResult",
    "DegenerateScaling",
    "LpBoundReport",
    "size_from_rate",
    "build_primal",
    "pue_lower_bound",
    "lp_bound_report",
    "certificate_from_solution",
    "dual_certificate_perp",
    "dual_certificate_B",
    "cone_bound",
    "pue_weights",
    "AmrrwPoly",
    "build_amrrw_poly",
    "build_hamming_poly",
]

Form = Literal["perp", "direct"]


class DegenerateScaling(ArithmeticError):
    """Normalizing value is zero, so the polynomial cannot be rescaled."""


@dataclass(frozen=True)
class KrawPoly:
    """Z(x) = sum_i coeffs[i] K_i(q; x)."""

    q: int
    n: int
    coeffs: tuple

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.n + 1:
            raise ParameterError(f"need {self.n + 1} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def zero(cls, q: int, n: int) -> "KrawPoly":
        return cls(q, n, (0,) * (n + 1))

    @classmethod
    def constant(cls, q: int, n: int, c) -> "KrawPoly":
        return cls(q, n, (c,) + (0,) * n)

    @classmethod
    def from_values(cls, q: int, n: int, values: Sequence) -> "KrawPoly":
        return cls(q, n, tuple(coef_transform(q, n, values)))

    def __call__(self, x: int):
        tab = kraw_table(self.q, self.n)
        return sum(c * tab.values[i][x] for i, c in enumerate(self.coeffs) if c)

    def values(self) -> list:
        return [self(x) for x in range(self.n + 1)]

    def __getitem__(self, i: int):
        return self.coeffs[i]


def size_from_rate(q: int, n: int, rate: float):
    """q^(n*rate), exact int when n*rate is integral."""
    e = n * rate
    if abs(e - round(e)) < 1e-12:
        return q ** int(round(e))
    return float(q) ** e


def _g(q: int, p, j: int):
    """((q-1-qp)/(q-1))^j."""
    gam = q - 1
    return ((gam - q * p) / gam) ** j


def _h(q: int, n: int, p, j: int):
    """(p/(q-1))^j (1-p)^(n-j)."""
    return (p / (q - 1)) ** j * (1 - p) ** (n - j)


def build_primal(n: int, q: int, sizeCperp, p: float, form: Form = "perp") -> LpProblem:
    """LP over B_1..B_n of the dual (``perp``) or direct (``direct``) spectrum.

    perp: min sum_j x_j [S h(j) - g(j)], S = |C^perp|, subject to
    sum x_j = S - 1, sum_j x_j K_i(j) >= -K_i(0), S x_j - sum_i x_i K_j(i) >= K_j(0).

    direct: min sum_j x_j [g(j) - |C| h(j)] with |C| = q^n / S, subject to
    sum x_j = |C| - 1, sum_j x_j K_i(j) >= -K_i(0), sum_i x_i K_j(i) - |C| x_j >= -K_j(0).
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    gam = q - 1
    if not 0 <= p < gam / q:
        raise ParameterError(f"p={p} outside [0, {gam}/{q})")
    S = Fraction(sizeCperp)
    if S <= 1:
        raise ParameterError("|C^perp| must exceed 1")
    P = Fraction(p)
    tab = kraw_table(q, n)
    K = tab.values
    k0 = [binom(n, i) * gam**i for i in range(n + 1)]
    idx = range(1, n + 1)
    rows_a = [[K[i][j] for j in idx] for i in idx]
    if form == "perp":
        size = S
        c = [S * _h(q, n, P, j) - _g(q, P, j) for j in idx]
        rows_b = [[(S if i == j else 0) - K[j][i] for i in idx] for j in idx]
        rhs_b = [k0[j] for j in idx]
    elif form == "direct":
        size = Fraction(q**n) / S
        c = [_g(q, P, j) - size * _h(q, n, P, j) for j in idx]
        rows_b = [[K[j][i] - (size if i == j else 0) for i in idx] for j in idx]
        rhs_b = [-k0[j] for j in idx]
    else:
        raise ParameterError(f"unknown form {form!r}")
    return LpProblem(
        c=c,
        A_eq=[[1] * n],
        b_eq=[size - 1],
        A_ge=rows_a + rows_b,
        b_ge=[-k0[i] for i in idx] + rhs_b,
        col_names=[f"B{j}" for j in idx],
        row_names=["size"] + [f"nonneg{i}" for i in idx] + [f"dominate{j}" for j in idx],
        row_scale=[1.0] + [float(k0[i]) for i in idx] + [float(k0[j]) for j in idx],
    )


@dataclass
class CertificateResult:
    feasible: bool
    bound: float | None = None
    witness: int | None = None
    reason: str = ""


@dataclass
class LpBoundReport:
    n: int
    q: int
    R_Q: float
    p: float
    form: str
    size: float
    solution: LpSolution
    bound: float | None
    certificate: CertificateResult | None


def _assemble(form: Form, q: int, n: int, p: float, size, opt) -> float:
    if isinstance(opt, Fraction) and isinstance(size, (int, Fraction)):
        s, base = Fraction(size), 1 - Fraction(p)
    else:
        s, base, opt = float(size), 1 - p, float(opt)
    if form == "perp":
        return float(opt / s + base**n - 1 / s)
    return float(opt / s - base**n + 1 / s)


def _form_size(form: Form, q: int, n: int, R_Q: float):
    if not 0.0 <= R_Q <= 1.0:
        raise ParameterError(f"R_Q={R_Q} outside [0, 1]")
    sp = size_from_rate(q, n, 0.5 * (1 + R_Q))
    return sp, (sp if form == "perp" else Fraction(q**n) / Fraction(sp))


def certificate_from_solution(sol: LpSolution, q: int, n: int) -> tuple[KrawPoly, KrawPoly]:
    """Read Z, Y off the LP duals (y_0 set to 0)."""
    eq = sol.exact_dual_eq if sol.certified else sol.dual_eq
    ge = sol.exact_dual_ge if sol.certified else sol.dual_ge
    conv = Fraction if sol.certified else float
    z = [conv(eq[0])] + [conv(v) for v in ge[:n]]
    y = [conv(0)] + [conv(v) for v in ge[n:]]
    return KrawPoly(q, n, tuple(z)), KrawPoly(q, n, tuple(y))


def lp_bound_report(n: int, q: int, R_Q: float, p: float, form: Form = "perp") -> LpBoundReport:
    sizeCperp, size = _form_size(form, q, n, R_Q)
    if size <= 1:
        # |C| = 1: the only spectrum is B = (1, 0, ..., 0); LP is empty
        raise ParameterError("code size must exceed 1 for the LP in this form")
    prob = build_primal(n, q, sizeCperp, p, form)
    sol = solve_lp(prob, certify=n <= 20)
    bound = None
    cert = None
    if sol.status == "optimal":
        opt = sol.exact_value if sol.certified else sol.value
        bound = _assemble(form, q, n, p, size, opt)
        Z, Y = certificate_from_solution(sol, q, n)
        rate = 0.5 * (1 + R_Q) if form == "perp" else 0.5 * (1 - R_Q)
        check = dual_certificate_perp if form == "perp" else dual_certificate_B
        cert = check(Z, Y, n, q, rate, p)
    return LpBoundReport(n, q, R_Q, p, form, float(size), sol, bound, cert)


def pue_lower_bound(n: int, q: int, R_Q: float, p: float) -> float:
    """LP lower bound on P_ue over all codes of length n and rate R_Q."""
    rep = lp_bound_report(n, q, R_Q, p, "perp")
    if rep.solution.status != "optimal":
        raise ArithmeticError(f"LP status {rep.solution.status}")
    return rep.bound


def _check_signs(Z: KrawPoly, Y: KrawPoly) -> tuple[int, str] | None:
    for j in range(1, Z.n + 1):
        if Z[j] < 0:
            return j, f"z_{j} < 0"
        if Y[j] < 0:
            return j, f"y_{j} < 0"
    return None


def _tolerance(val, tol: float) -> float:
    return tol * max(1.0, abs(float(val)))


def _dual_check(Z, Y, n, q, rate, p, tol, sign):
    if Z.n != n or Y.n != n or Z.q != q or Y.q != q:
        raise ParameterError("certificate polynomials must match (q, n)")
    bad = _check_signs(Z, Y)
    if bad:
        return CertificateResult(False, witness=bad[0], reason=bad[1])
    exact = all(isinstance(v, (int, Fraction)) for v in Z.coeffs + Y.coeffs)
    S = size_from_rate(q, n, rate)
    if exact and isinstance(S, int):
        P = Fraction(p)
        tol = 0.0
    else:
        S, P = float(S), float(p)
    for j in range(1, n + 1):
        if sign > 0:
            lhs = Z(j) - Y(j) + Y[0] + Y[j] * S
            rhs = S * _h(q, n, P, j) - _g(q, P, j)
        else:
            lhs = Z(j) + Y(j) - Y[0] - Y[j] * S
            rhs = _g(q, P, j) - S * _h(q, n, P, j)
        if lhs > rhs + _tolerance(rhs, tol) if tol else lhs > rhs:
            return CertificateResult(False, witness=j, reason=f"constraint {j} violated")
    if sign > 0:
        val = Z[0] * S - Z(0) + Y(0) - Y[0]
    else:
        val = Z[0] * S - Z(0) - Y(0) + Y[0]
    return CertificateResult(True, bound=_assemble("perp" if sign > 0 else "direct", q, n, P, S, val))


def dual_certificate_perp(Z: KrawPoly, Y: KrawPoly, n: int, q: int, Rperp: float, p: float,
                          tol: float = 1e-9) -> CertificateResult:
    """Check a dual certificate for the B^perp program; return its bound.

    Exact when coefficients are rational and q^(n Rperp) is an integer,
    otherwise constraints are checked with relative tolerance ``tol``.
    """
    return _dual_check(Z, Y, n, q, Rperp, p, tol, +1)


def dual_certificate_B(Z: KrawPoly, Y: KrawPoly, n: int, q: int, R: float, p: float,
                       tol: float = 1e-9) -> CertificateResult:
    """Mirror of :func:`dual_certificate_perp` for the program in B."""
    return _dual_check(Z, Y, n, q, R, p, tol, -1)


@dataclass
class ConeResult:
    feasible: bool
    bound: float | None = None
    failed_condition: str | None = None  # "i" or "ii"
    witness: int | None = None
    violations_i: list[int] | None = None
    violations_ii: list[int] | None = None


def pue_weights(q: int, n: int, p: float) -> list[float]:
    """h(i) = (p/(q-1))^i (1-p)^(n-i) for i = 0..n."""
    return [_h(q, n, p, i) for i in range(n + 1)]


def cone_bound(Z: KrawPoly, h: Sequence[float], sizeCperp, variant: Form = "perp",
               values: Sequence | None = None, tol: float = 1e-12) -> ConeResult:
    """Lower bound on sum_i (B_i^perp - B_i) h(i) from a cone-feasible Z.

    Conditions for 1 <= i <= n: (i) Z(i) <= h(i); (ii) z_i |C^perp| - Z(i) >= 0
    (``perp``) or Z(i) - |C| z_i >= 0 (``direct``). ``values`` may supply
    precomputed Z(0..n). Valid for spectrum pairs with B^perp >= B.
    """
    n, q = Z.n, Z.q
    if len(h) != n + 1:
        raise ParameterError("h must have n+1 entries")
    vals = list(values) if values is not None else Z.values()
    S = float(sizeCperp)
    size_c = float(q) ** n / S
    viol_i, viol_ii = [], []
    for i in range(1, n + 1):
        zi, Zi = float(Z[i]), float(vals[i])
        if Zi > h[i] + tol * max(abs(h[i]), abs(Zi), 1e-300):
            viol_i.append(i)
        cond = zi * S - Zi if variant == "perp" else Zi - size_c * zi
        scale = max(abs(zi * (S if variant == "perp" else size_c)), abs(Zi))
        if cond < -tol * scale:
            viol_ii.append(i)
    if viol_i or viol_ii:
        first = min(viol_i + viol_ii)
        which = "i" if first in viol_i else "ii"
        return ConeResult(False, failed_condition=which, witness=first,
                          violations_i=viol_i, violations_ii=viol_ii)
    Z0, z0 = float(vals[0]), float(Z[0])
    bound = z0 * S - Z0 if variant == "perp" else Z0 - size_c * z0
    return ConeResult(True, bound=bound, violations_i=[], violations_ii=[])


@dataclass
class AmrrwPoly:
    n: int
    q: int
    t: int
    a: float
    x_star: int
    values: list[float]
    z0: float
    Z0: float

    def poly(self) -> KrawPoly:
        return KrawPoly.from_values(self.q, self.n, self.values)


def build_amrrw_poly(n: int, q: int, p: float, x_star: int) -> AmrrwPoly:
    """Rescaled (K_t + K_{t+1})^2 / (a - x) matching h at x_star.

    t = floor(n * tau0(x_star / n)), a the smallest zero of K_t + K_{t+1}.
    Also returns the closed forms of z_0 and Z(0).
    """
    gam = q - 1
    if not 0 < x_star < n:
        raise ParameterError("need 0 < x_star < n")
    xi = x_star / n
    if xi > gam / q:
        raise ParameterError(f"x_star/n = {xi} exceeds (q-1)/q")
    t = math.floor(n * tau0(xi, q))
    if t + 1 > n:
        raise ParameterError("degree t+1 exceeds n")
    a = smallest_root(q, n, {t: 1, t + 1: 1})
    kt_star = krawtchouk_int(q, n, t, x_star)
    if kt_star == 0:
        raise DegenerateScaling(f"K_{t}(x*={x_star}) = 0")
    if any(abs(a - j) < 1e-9 for j in range(n + 1)):
        raise DegenerateScaling("root a coincides with an integer point")
    hstar = _h(q, n, p, x_star)
    vals = []
    for j in range(n + 1):
        s = krawtchouk_int(q, n, t, j) + krawtchouk_int(q, n, t + 1, j)
        vals.append(hstar * float(Fraction(s * s, kt_star * kt_star)) / (a - j))
    ratio = float(Fraction(gam**t * binom(n, t), kt_star * kt_star))
    z0 = q * hstar * ratio / (t + 1)
    Z0 = hstar * float(Fraction(gam ** (2 * t) * binom(n, t) ** 2, kt_star * kt_star)) * (
        (t + 1 + gam * (n - t)) / (t + 1)
    ) ** 2 / a
    return AmrrwPoly(n, q, t, a, x_star, vals, z0, Z0)


def build_hamming_poly(n: int, q: int, p: float, e: int, x_star: int) -> tuple[KrawPoly, list[float]]:
    """Z = h(x*) F_e / F_e(x*), returned as (coefficients, point values).

    Coefficients are z_i = h(x*) K_e(q; i)^2 / F_e(x*) >= 0.
    """
    Fs = F_e_closed(q, n, e, x_star)
    if Fs == 0:
        raise DegenerateScaling(f"F_{e}({x_star}) = 0")
    hstar = _h(q, n, p, x_star)
    coeffs = tuple(hstar * float(Fraction(krawtchouk_int(q, n, e, i) ** 2, Fs)) for i in range(n + 1))
    values = [hstar * float(Fraction(F_e_closed(q, n, e, x), Fs)) for x in range(n + 1)]
    return KrawPoly(q, n, coeffs), values
