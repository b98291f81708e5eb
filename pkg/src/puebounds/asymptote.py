"""Asymptotic error exponents for undetected error.

Entropy utilities, the tau0 map and the LP rate curve, the Krawtchouk
exponent integral, and the three exponent curves (random-code existence,
A-MRRW and the Hamming-type bound) together with their critical constants.
All exponents are base q and per unit length; R_Q is the quantum rate and
R = (1 - R_Q)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

from .kraw_core import ParameterError

__all__ = [
    "CURVED",
    "FLAT",
    "NA",
    "NotApplicable",
    "Exponent",
    "ChannelParams",
    "HammingParams",
    "BoundConstants",
    "BoundCurve",
    "ALPHA1",
    "bisect",
    "adaptive_simpson",
    "hq",
    "tq",
    "hq_inv",
    "tau0",
    "r_lp",
    "delta_lp",
    "kraw_exponent",
    "existence_exponent",
    "amrrw_exponent",
    "tau_of_xi_binary",
    "phi_binary",
    "hamming_exponent_binary",
    "sigma0",
    "tau_general",
    "phi_general",
    "alpha_residual",
    "sigma_opt",
    "Phi",
    "tau_at",
    "hamming_params",
    "hamming_exponent",
    "tau2_closed",
    "bound_constants",
    "maximum_check",
    "curve_sweep",
]

CURVED = "curved-branch"
FLAT = "flat-branch"
NA = "not-applicable"

# smallest R_Q covered by the A-MRRW argument; no closed form is known
ALPHA1 = {4: 0.0028}

ROOT_TOL = 1e-12


class NotApplicable(ArithmeticError):
    """Point lies outside the validity window of a bound."""


class Exponent(NamedTuple):
    value: float | None
    status: str


@dataclass(frozen=True)
class ChannelParams:
    """q-ary symmetric channel with total error probability p."""

    q: int = 4
    p: float = 0.1

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ParameterError("q must be >= 2")
        if not 0 <= self.p < self.gamma / self.q:
            raise ParameterError(f"p={self.p} outside [0, {self.gamma}/{self.q})")

    @property
    def gamma(self) -> int:
        return self.q - 1

    def h(self, x: int, n: int) -> float:
        """Probability of one fixed error pattern of weight x."""
        return (self.p / self.gamma) ** x * (1 - self.p) ** (n - x)


@dataclass(frozen=True)
class HammingParams:
    xi_star: float
    sigma0: float
    tau: float
    e_frac: float


@dataclass(frozen=True)
class BoundConstants:
    q: int
    tau1: float | None
    tau2: float
    tau_cr: float
    p_cr: float
    alpha1: float | None


@dataclass
class BoundCurve:
    name: str
    points: list = field(default_factory=list)  # (R_Q, E or None, status)

    def values(self) -> list:
        return [e for _, e, _ in self.points]


# --------------------------------------------------------------------------
# numerics


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = ROOT_TOL,
           max_iter: int = 200) -> float:
    """Root of f on [lo, hi] by bisection; f(lo), f(hi) must differ in sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise NotApplicable(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with absolute tolerance ``tol``."""
    if a == b:
        return 0.0
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a0, b0, fa0, fm0, fb0, s0, eps, depth = stack.pop()
        m = 0.5 * (a0 + b0)
        fl, fr = f(0.5 * (a0 + m)), f(0.5 * (m + b0))
        left = (m - a0) / 6 * (fa0 + 4 * fl + fm0)
        right = (b0 - m) / 6 * (fm0 + 4 * fr + fb0)
        diff = left + right - s0
        if depth >= max_depth or abs(diff) <= 15 * eps:
            total += left + right + diff / 15
        else:
            stack.append((a0, m, fa0, fl, fm0, left, eps / 2, depth + 1))
            stack.append((m, b0, fm0, fr, fb0, right, eps / 2, depth + 1))
    return total


def _log(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


# --------------------------------------------------------------------------
# entropy


def hq(x: float, q: int) -> float:
    """q-ary entropy H_q(x)."""
    if not 0 <= x <= 1:
        raise ParameterError(f"x={x} outside [0, 1]")
    return (x * math.log(q - 1) - _xlogx(x) - _xlogx(1 - x)) / math.log(q)


def tq(x: float, y: float, q: int) -> float:
    """T_q(x, y) = x log_q(q-1) - x log_q y - (1-x) log_q(1-y)."""
    if not 0 <= x <= 1:
        raise ParameterError(f"x={x} outside [0, 1]")
    if not 0 <= y < 1:
        raise ParameterError(f"y={y} outside [0, 1)")
    if y == 0:
        return 0.0 if x == 0 else math.inf
    return x * _log(q - 1, q) - x * _log(y, q) - (1 - x) * _log(1 - y, q)


def hq_inv(v: float, q: int) -> float:
    """Inverse of H_q on [0, (q-1)/q]."""
    if not 0 <= v <= 1:
        raise ParameterError(f"v={v} outside [0, 1]")
    top = (q - 1) / q
    if v == 0:
        return 0.0
    if v >= 1:
        return top
    return bisect(lambda x: hq(x, q) - v, 0.0, top)


def tau0(z: float, q: int) -> float:
    """gamma/q - ((gamma-1)/q) z - (2/q) sqrt(gamma z (1-z))."""
    g = q - 1
    if not -1e-15 <= z <= g / q + 1e-15:
        raise ParameterError(f"z={z} outside [0, {g}/{q}]")
    z = min(max(z, 0.0), g / q)
    return max(0.0, g / q - (g - 1) / q * z - 2 / q * math.sqrt(g * z * (1 - z)))


def r_lp(delta: float, q: int) -> float:
    """LP upper bound on the rate at relative distance delta."""
    return hq(tau0(delta, q), q)


def delta_lp(R: float, q: int) -> float:
    """Largest relative distance allowed by the LP bound at rate R."""
    return tau0(hq_inv(R, q), q)


# --------------------------------------------------------------------------
# Krawtchouk exponent


def _kraw_integrand(sigma: float, q: int) -> Callable[[float], float]:
    g = q - 1
    lq = math.log(q)

    def f(y: float) -> float:
        b = (1 - y) * g + y - q * sigma
        d = b * b - 4 * g * y * (1 - y)
        if d < 0:
            if d < -1e-14:
                raise ParameterError(f"integrand complex at y={y}")
            d = 0.0
        return math.log((b + math.sqrt(d)) / (2 * g * (1 - y))) / lq

    return f


def kraw_exponent(sigma: float, xi: float, q: int, tol: float = 1e-10) -> float:
    """lim (1/n) log_q |K_{sigma n}(q; xi n)| for 0 <= xi <= tau0(sigma)."""
    if not 0 <= sigma <= (q - 1) / q:
        raise ParameterError(f"sigma={sigma} outside [0, {q - 1}/{q}]")
    top = tau0(sigma, q)
    if xi < 0 or xi > top + 1e-12:
        raise ParameterError(f"xi={xi} outside [0, tau0(sigma)={top}]")
    xi = min(xi, top)
    return hq(sigma, q) + adaptive_simpson(_kraw_integrand(sigma, q), 0.0, xi, tol)


def _kraw_exponent_grid(sigma: float, xs: Sequence[float], q: int) -> list[float]:
    """kraw_exponent at increasing points xs, integrating piecewise."""
    f = _kraw_integrand(sigma, q)
    out, acc, prev = [], hq(sigma, q), 0.0
    for x in xs:
        acc += adaptive_simpson(f, prev, x, 1e-11)
        prev = x
        out.append(acc)
    return out


# --------------------------------------------------------------------------
# existence and A-MRRW


def _check_rate(R_Q: float) -> float:
    if not 0 <= R_Q <= 1:
        raise ParameterError(f"R_Q={R_Q} outside [0, 1]")
    return 0.5 * (1 - R_Q)


def existence_exponent(R_Q: float, p: float) -> Exponent:
    """Exponent attained by random even quaternary codes (q = 4)."""
    R = _check_rate(R_Q)
    if not 0 <= p < 0.75:
        raise ParameterError(f"p={p} outside [0, 3/4)")
    if R_Q <= 1 - 2 * hq(p, 4):
        return Exponent(tq(hq_inv(R, 4), p, 4), CURVED)
    return Exponent(R, FLAT)


def amrrw_exponent(R_Q: float, p: float, q: int = 4, strict: bool = False) -> Exponent:
    """Upper bound on the exponent from the LP polynomial of MRRW type.

    With ``strict`` the curved branch is reported not-applicable below
    ALPHA1[q] (and for q missing from that table); by default the formula
    is evaluated on the whole curved range.
    """
    R = _check_rate(R_Q)
    g = q - 1
    if not 0 <= p < g / q:
        raise ParameterError(f"p={p} outside [0, {g}/{q})")
    if R_Q > 2 * r_lp(p, q) - 1:
        return Exponent(R, FLAT)
    if strict and (q not in ALPHA1 or R_Q < ALPHA1[q]):
        return Exponent(None, NA)
    d = delta_lp(1 - R, q)
    return Exponent(R - hq(d, q) + tq(d, p, q), CURVED)


# --------------------------------------------------------------------------
# Hamming-type bound, binary


def tau_of_xi_binary(xi_star: float, p: float) -> float:
    if not 0 <= p < 0.5:
        raise ParameterError(f"p={p} outside [0, 1/2)")
    if not 0 <= xi_star <= 1:
        raise ParameterError(f"xi_star={xi_star} outside [0, 1]")
    return 0.5 * (1 - math.sqrt(1 - 2 * p) * (1 - xi_star) / (1 - p))


def phi_binary(tau: float, xi: float) -> float:
    """Exponent of the binary F_e at x = xi n, e = tau n."""
    if not 0 <= xi <= 2 * tau + 1e-15 or 2 * tau > 1 + 1e-15:
        raise ParameterError("need 0 <= xi <= 2 tau <= 1")
    if xi >= 1:
        return 2.0
    arg = min(max((2 * tau - xi) / (2 - 2 * xi), 0.0), 1.0)
    return 1 + xi + (1 - xi) * hq(arg, 2)


def hamming_exponent_binary(R_Q: float, p: float) -> Exponent:
    R = _check_rate(R_Q)
    c = bound_constants(2)
    if not 0 <= p <= c.p_cr:
        return Exponent(None, NA)
    tp = tau_of_xi_binary(p, p)
    if R <= hq(tp, 2):
        return Exponent(R, FLAT)
    if R_Q < 1 - 2 * hq(c.tau_cr, 2):
        return Exponent(None, NA)
    tau = hq_inv(R, 2)
    xi = bisect(lambda x: tau_of_xi_binary(x, p) - tau, p, 1.0)
    return Exponent(-1 - R + tq(xi, p, 2) + phi_binary(tau, xi), CURVED)


# --------------------------------------------------------------------------
# Hamming-type bound, q >= 3


def _check_q3(q: int) -> None:
    if q < 3:
        raise ParameterError("general-q formulas need q >= 3; use the binary path")


def _v_opt(q: int, p: float) -> float:
    g = q - 1
    return (2 * g - q * p - 2 * math.sqrt(g * (g - q * p))) / (q * q * (1 - p))


def sigma0(xi_star: float, q: int, p: float) -> float:
    """Optimal sigma at the tangency point xi_star.

    Equals (1 - xi*) (2q - 2 - qp - 2 sqrt((q-1)(q-1-qp))) / (q^2 (1-p)).
    """
    _check_q3(q)
    if not 0 <= p < (q - 1) / q:
        raise ParameterError(f"p={p} outside [0, {q - 1}/{q})")
    if not 0 <= xi_star < 1:
        raise ParameterError(f"xi_star={xi_star} outside [0, 1)")
    return (1 - xi_star) * _v_opt(q, p)


def _u_tangent(v: float, q: int, p: float) -> float:
    """Positive root u of c (q-2) u^2 + 4 (1-v) u - 4 (1-v) = 0, c = p/((q-1)(1-p))."""
    a = p / ((q - 1) * (1 - p)) * (q - 2)
    b = 4 * (1 - v)
    if a == 0:
        return 1.0
    disc = b * b + 4 * a * b
    if disc < 0:
        raise NotApplicable("negative discriminant")
    # stable form of (-b + sqrt(disc)) / (2a)
    return 2 * b / (b + math.sqrt(disc))


def tau_general(xi_star: float, sigma0_val: float, q: int, p: float) -> float:
    """tau for which (sigma0_val, xi_star) is the tangency point of phi + T_q(., p)."""
    _check_q3(q)
    if not 0 <= xi_star < 1:
        raise ParameterError(f"xi_star={xi_star} outside [0, 1)")
    v = sigma0_val / (1 - xi_star)
    if not 0 <= v < 1:
        raise NotApplicable(f"sigma/(1-xi)={v} outside [0, 1)")
    u = _u_tangent(v, q, p)
    return xi_star + sigma0_val - 0.5 * u * xi_star


def phi_general(tau: float, sigma: float, xi: float, q: int) -> float:
    """Exponent of the s = sigma n term of F_e(xi n), e = tau n, plus one."""
    _check_q3(q)
    if not 0 <= xi < 1:
        raise ParameterError(f"xi={xi} outside [0, 1)")
    v = sigma / (1 - xi)
    if not -1e-12 <= v <= 1 + 1e-12:
        raise ParameterError(f"sigma/(1-xi)={v} outside [0, 1]")
    v = min(max(v, 0.0), 1.0)
    w = 2 * xi + 2 * sigma - 2 * tau
    out = 1 + (1 - xi) * hq(v, q)
    if xi > 0:
        u = w / xi
        if not -1e-12 <= u <= 1 + 1e-12:
            raise ParameterError(f"(2xi+2sigma-2tau)/xi={u} outside [0, 1]")
        out += xi * hq(min(max(u, 0.0), 1.0), 2) * _log(2, q)
    elif abs(w) > 1e-12:
        raise ParameterError("at xi = 0 need sigma = tau")
    out += w * _log(2, q) + (2 * tau - 2 * sigma - xi) * _log(q - 2, q)
    return out


def _dphi_dsigma(tau: float, sigma: float, xi: float, q: int) -> float:
    """d phi / d sigma (natural log scale); decreasing in sigma."""
    v = sigma / (1 - xi)
    u = (2 * xi + 2 * sigma - 2 * tau) / xi
    if v <= 0 or u <= 0:
        return math.inf
    if v >= 1 or u >= 1:
        return -math.inf
    return (math.log((q - 1) * (1 - v) / v) + 2 * math.log((1 - u) / u)
            + 2 * math.log(2) - 2 * math.log(q - 2))


def alpha_residual(tau: float, sigma: float, xi: float, q: int) -> float:
    """Stationarity of phi in sigma, as a base-q log; zero at the optimum."""
    _check_q3(q)
    return _dphi_dsigma(tau, sigma, xi, q) / math.log(q)


def sigma_opt(tau: float, xi: float, q: int) -> float:
    """Maximizer of phi(tau, ., xi) on (max(0, tau - xi), tau - xi/2)."""
    _check_q3(q)
    if not 0 < xi < 2 * tau:
        raise ParameterError("need 0 < xi < 2 tau")
    lo, hi = max(0.0, tau - xi), tau - xi / 2
    if hi > 1 - xi:
        raise ParameterError("tau too large for this xi")
    return bisect(lambda s: _dphi_dsigma(tau, s, xi, q), lo, hi, tol=1e-15)


def Phi(tau: float, xi: float, q: int) -> float:
    """Exponent of F_e(xi n) with e = tau n: phi maximized over sigma."""
    if xi > 2 * tau:
        return -math.inf  # F_e(x) = q^n p^x_{ee} vanishes for x > 2e
    if q == 2:
        return phi_binary(tau, xi)
    if xi <= 0:
        return 1 + hq(tau, q)
    if xi == 2 * tau:
        return 1 + 2 * tau * _log(2, q)
    return phi_general(tau, sigma_opt(tau, xi, q), xi, q)


def tau_at(xi_star: float, q: int, p: float) -> float:
    """tau(xi*) of the tangency point, any q."""
    if q == 2:
        return tau_of_xi_binary(xi_star, p)
    return tau_general(xi_star, sigma0(xi_star, q, p), q, p)


def hamming_params(R_Q: float, p: float, q: int) -> HammingParams:
    """Parameters (xi*, sigma0, tau) of the curved branch at rate R_Q."""
    R = _check_rate(R_Q)
    tau = hq_inv(R, q)
    hi = 1.0 if q == 2 else 1 - 1e-9
    xi = bisect(lambda x: tau_at(x, q, p) - tau, p, hi)
    s0 = (2 * tau - xi) / 2 if q == 2 else sigma0(xi, q, p)
    return HammingParams(xi, s0, tau, tau)


def hamming_exponent(R_Q: float, p: float, q: int = 4) -> Exponent:
    """Upper bound on the exponent from the squared-Krawtchouk polynomial."""
    if q == 2:
        return hamming_exponent_binary(R_Q, p)
    R = _check_rate(R_Q)
    if not 0 <= p < (q - 1) / q:
        raise ParameterError(f"p={p} outside [0, {q - 1}/{q})")
    c = bound_constants(q)
    if p > c.p_cr:
        return Exponent(None, NA)
    if R <= hq(tau_at(p, q, p), q):
        return Exponent(R, FLAT)
    if R_Q < 1 - 2 * hq(c.tau_cr, q):
        return Exponent(None, NA)
    hp = hamming_params(R_Q, p, q)
    val = -1 - R + tq(hp.xi_star, p, q) + phi_general(hp.tau, hp.sigma0, hp.xi_star, q)
    return Exponent(val, CURVED)


# --------------------------------------------------------------------------
# critical constants


def tau2_closed(q: int) -> float:
    """(3 sqrt q - 2 sqrt 2)(q-1) / (sqrt q (9q - 8))."""
    return (3 * math.sqrt(q) - 2 * math.sqrt(2)) * (q - 1) / (math.sqrt(q) * (9 * q - 8))


def _mc_value(tau: float, xi: float, q: int, kexp: float) -> float:
    return Phi(tau, xi, q) - 2 * kexp


def maximum_check(tau: float, q: int, grid_size: int = 200) -> tuple[float, bool]:
    """Is xi = 0 the maximizer of Phi(tau, xi) - 2 kraw_exponent(tau, xi)?

    The scan covers [0, min(2 tau, tau0(tau))]. Returns (argmax, holds).
    """
    if not 0 <= tau <= (q - 1) / q:
        raise ParameterError(f"tau={tau} outside [0, {q - 1}/{q}]")
    if tau == 0:
        return 0.0, True
    top = min(2 * tau, tau0(tau, q))
    xs = [top * k / grid_size for k in range(1, grid_size + 1)]
    kex = _kraw_exponent_grid(tau, xs, q)
    v0 = 1 - hq(tau, q)
    best, arg = v0, 0.0
    for x, k in zip(xs, kex):
        v = _mc_value(tau, x, q, k)
        if v > best + 1e-12:
            best, arg = v, x
    return arg, arg == 0.0


def _find_tau1(q: int, hi: float, step: float = 0.005, grid_size: int = 100) -> float | None:
    prev = 0.0
    t = step
    while t <= hi + 1e-15:
        if not maximum_check(t, q, grid_size)[1]:
            lo, up = prev, t
            while up - lo > 1e-5:
                mid = 0.5 * (lo + up)
                if maximum_check(mid, q, grid_size)[1]:
                    lo = mid
                else:
                    up = mid
            return 0.5 * (lo + up)
        prev = t
        t += step
    return None


@lru_cache(maxsize=None)
def bound_constants(q: int) -> BoundConstants:
    """tau1, tau2, tau_cr, p_cr and alpha1 for alphabet size q.

    tau2 solves 2 tau = tau0(tau); tau1 is the first tau where
    :func:`maximum_check` fails (searched up to min(2 tau2, (q-1)/q)); p_cr
    solves tau(p) = tau_cr with tau(.) taken at xi* = p.
    """
    if q < 2:
        raise ParameterError("q must be >= 2")
    g = q - 1
    tau2 = bisect(lambda t: 2 * t - tau0(t, q), 0.0, 0.5 * g / q, tol=0.0)
    tau1 = _find_tau1(q, min(2 * tau2, g / q))
    tau_cr = min(tau1, tau2) if tau1 is not None else tau2
    p_top = 0.5 if q == 2 else g / q
    p_cr = bisect(lambda p: tau_at(p, q, p) - tau_cr, 0.0, p_top - 1e-12, tol=0.0)
    return BoundConstants(q, tau1, tau2, tau_cr, p_cr, ALPHA1.get(q))


# --------------------------------------------------------------------------
# sweeps


def curve_sweep(p: float, q: int, grid: Sequence[float]) -> tuple[BoundCurve, BoundCurve, BoundCurve]:
    """Existence (q = 4 only), A-MRRW and Hamming curves on a rate grid."""
    ex, am, hm = BoundCurve("existence"), BoundCurve("amrrw"), BoundCurve("hamming")
    for r in grid:
        if q == 4:
            ex.points.append((r, *existence_exponent(r, p)))
        else:
            ex.points.append((r, None, NA))
        am.points.append((r, *amrrw_exponent(r, p, q)))
        hm.points.append((r, *hamming_exponent(r, p, q)))
    return ex, am, hm
