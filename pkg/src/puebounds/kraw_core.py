"""Exact combinatorics on the q-ary Hamming scheme.

Everything here that is an identity is computed in Python integers or
``fractions.Fraction``; floats appear only for real-argument Krawtchouk
values and root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

__all__ = [
    "ParameterError",
    "NoRoot",
    "KrawTable",
    "binom",
    "krawtchouk_int",
    "krawtchouk_real",
    "kraw_table",
    "smallest_root",
    "coef_transform",
    "evaluate_kraw_series",
    "intersection_number",
    "F_e_closed",
    "even_sum_identity",
]


class ParameterError(ValueError):
    """Argument outside the documented domain."""


class NoRoot(ArithmeticError):
    """No sign change was found on the scan grid."""


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def _check_kraw_args(q: int, n: int, k: int) -> None:
    if q < 2:
        raise ParameterError(f"alphabet size q={q} must be >= 2")
    if n < 0:
        raise ParameterError(f"length n={n} must be nonnegative")
    if not 0 <= k <= n:
        raise ParameterError(f"degree k={k} outside [0, {n}]")


@lru_cache(maxsize=65536)
def krawtchouk_int(q: int, n: int, k: int, x: int) -> int:
    """Exact K_k(q; x) from the defining alternating sum."""
    _check_kraw_args(q, n, k)
    if not 0 <= x <= n:
        raise ParameterError(f"argument x={x} outside [0, {n}]")
    g = q - 1
    total = 0
    for l in range(min(k, x) + 1):
        total += (-1) ** l * binom(x, l) * binom(n - x, k - l) * g ** (k - l)
    return total


def krawtchouk_real(q: int, n: int, k: int, x: float) -> float:
    """K_k(q; x) at real ``x`` via the falling-factorial form of the sum.

    ``x`` is converted to its exact dyadic value and the sum is formed in
    integers over the common denominator ``D**k * k!``, so the only rounding
    is the final conversion to float.
    """
    _check_kraw_args(q, n, k)
    fx = Fraction(x)
    if fx < 0 or fx > n:
        raise ParameterError(f"argument x={x} outside [0, {n}]")
    X, D = fx.numerator, fx.denominator
    Y = n * D - X  # (n - x) * D
    g = q - 1
    # a[l] = D^l * x(x-1)...(x-l+1), b[m] = D^m * (n-x)(n-x-1)...(n-x-m+1)
    a = [1] * (k + 1)
    b = [1] * (k + 1)
    for i in range(k):
        a[i + 1] = a[i] * (X - i * D)
        b[i + 1] = b[i] * (Y - i * D)
    num = 0
    for l in range(k + 1):
        term = math.comb(k, l) * a[l] * b[k - l] * g ** (k - l)
        num += -term if l & 1 else term
    return float(Fraction(num, D**k * math.factorial(k)))


@dataclass(frozen=True)
class KrawTable:
    """values[k][x] = K_k(q; x) for 0 <= k, x <= n."""

    q: int
    n: int
    values: tuple[tuple[int, ...], ...]

    def __getitem__(self, kx: tuple[int, int]) -> int:
        k, x = kx
        return self.values[k][x]

    def row(self, k: int) -> tuple[int, ...]:
        return self.values[k]


@lru_cache(maxsize=256)
def kraw_table(q: int, n: int) -> KrawTable:
    _check_kraw_args(q, n, 0)
    vals = tuple(
        tuple(krawtchouk_int(q, n, k, x) for x in range(n + 1)) for k in range(n + 1)
    )
    return KrawTable(q, n, vals)


def evaluate_kraw_series(q: int, n: int, coeffs: Sequence, x: int):
    """Sum_i coeffs[i] * K_i(q; x) at an integer point, exact if coeffs are."""
    tab = kraw_table(q, n)
    return sum(c * tab.values[i][x] for i, c in enumerate(coeffs) if c)


def coef_transform(q: int, n: int, point_values: Sequence) -> list:
    """Krawtchouk-basis coefficients f_i = q^-n sum_j f(j) K_j(q; i).

    Exact (``Fraction``) when every input is an int or Fraction, float
    otherwise.
    """
    if len(point_values) != n + 1:
        raise ParameterError(f"expected {n + 1} point values, got {len(point_values)}")
    tab = kraw_table(q, n)
    exact = all(isinstance(v, (int, Fraction)) for v in point_values)
    qn = q**n
    out = []
    for i in range(n + 1):
        s = sum(point_values[j] * tab.values[j][i] for j in range(n + 1))
        out.append(Fraction(s, qn) if exact else s / qn)
    return out


def smallest_root(q: int, n: int, poly, points_per_unit: int = 10, tol: float = 1e-9) -> float:
    """Smallest zero in (0, n) of a real combination of Krawtchouk polynomials.

    ``poly`` is either a sequence of Krawtchouk-basis coefficients (length
    n+1, zeros allowed) or a mapping ``{degree: coefficient}``; a bare int
    ``k`` means K_k itself. The scan uses ``points_per_unit * n`` grid
    points, followed by bisection to ``tol``.
    """
    if isinstance(poly, int):
        terms = {poly: 1.0}
    elif isinstance(poly, dict):
        terms = dict(poly)
    else:
        terms = {i: c for i, c in enumerate(poly) if c}
    if not terms:
        raise NoRoot("zero polynomial")

    def f(x: float) -> float:
        return sum(float(c) * krawtchouk_real(q, n, k, x) for k, c in terms.items())

    steps = points_per_unit * n
    xprev, fprev = 0.0, f(0.0)
    for m in range(1, steps):
        x = m * n / steps
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) != (fprev < 0):
            lo, hi, flo = xprev, x, fprev
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0.0:
                    return mid
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        xprev, fprev = x, fx
    raise NoRoot(f"no sign change of {terms} on (0, {n}) for q={q}")


def intersection_number(q: int, n: int, i: int, j: int, k: int) -> int:
    """p_ij^k of the Hamming scheme H(n, q)."""
    for v in (i, j, k):
        if not 0 <= v <= n:
            raise ParameterError(f"index {v} outside [0, {n}]")
    total = 0
    for s in range(n - k + 1):
        m = 2 * k + 2 * s - i - j
        e = i + j - 2 * s - k
        if m < 0 or e < 0:
            continue
        c = binom(k, m) * binom(n - k, s) * binom(m, k + s - j)
        if c:
            total += c * (q - 2) ** e * (q - 1) ** s
    return total


def F_e_closed(q: int, n: int, e: int, x: int) -> int:
    """Point value at x of F_e = sum_i K_e(q;i)^2 K_i(q;x), in closed form."""
    if not (0 <= e <= n and 0 <= x <= n):
        raise ParameterError("need 0 <= e, x <= n")
    if q == 2:
        if x % 2:
            return 0
        return 2**n * binom(x, x // 2) * binom(n - x, e - x // 2)
    total = 0
    for s in range(max(0, e - x), (2 * e - x) // 2 + 1):
        m = 2 * x + 2 * s - 2 * e
        c = binom(x, m) * binom(n - x, s) * binom(m, x + s - e)
        if c:
            total += c * (q - 2) ** (2 * e - 2 * s - x) * (q - 1) ** s
    return q**n * total


def even_sum_identity(n: int, t: int) -> tuple[int, int]:
    """Both sides of sum_i C(n,2i) 9^i K_t(4;2i) = 2^(n-1) C(n,t) (-3)^t.

    Equality is only claimed for t >= 1; at t = 0 the left side also picks up
    the (4+12yz)^n generating-function term.
    """
    if n % 2:
        raise ParameterError(f"n={n} must be even")
    if not 0 <= t <= n:
        raise ParameterError(f"t={t} outside [0, {n}]")
    lhs = sum(binom(n, 2 * i) * 9**i * krawtchouk_int(4, n, t, 2 * i) for i in range(n // 2 + 1))
    rhs = 2 ** (n - 1) * binom(n, t) * (-3) ** t
    return lhs, rhs
