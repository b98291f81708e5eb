"""Named invariant suites run by ``puebounds verify``.

Each check returns ``(ok, detail)``; :func:`run_suite` collects them.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import asymptote as asy
from .code_lab import (
    dual_code,
    enumerate_even_codes,
    even_dual_count,
    even_nonzero_count,
    family_stats,
    macwilliams,
    trace_ip,
    weight_distribution,
)
from .kraw_core import even_sum_identity, kraw_table
from .lp_bounds import lp_bound_report

LEVELS = {
    "fast": {"kraw_n": 8, "even_sum_n": 8, "code_n": 4, "lp_n": (2, 4)},
    "full": {"kraw_n": 12, "even_sum_n": 12, "code_n": 5, "lp_n": (2, 4, 6, 8)},
}


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _orthogonality(nmax: int):
    for q in (2, 3, 4):
        for n in range(nmax + 1):
            K = kraw_table(q, n).values
            for r in range(n + 1):
                for s in range(n + 1):
                    tot = sum(K[r][i] * K[i][s] for i in range(n + 1))
                    if tot != (q**n if r == s else 0):
                        return False, f"q={q} n={n} r={r} s={s}: {tot}"
    return True, f"q in 2,3,4, n <= {nmax}"


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _generating_function(nmax: int):
    for q in (2, 3, 4):
        for n in range(nmax + 1):
            K = kraw_table(q, n).values
            for x in range(n + 1):
                poly = [1]
                for _ in range(n - x):
                    poly = _poly_mul(poly, [1, q - 1])
                for _ in range(x):
                    poly = _poly_mul(poly, [1, -1])
                if poly != [K[k][x] for k in range(n + 1)]:
                    return False, f"q={q} n={n} x={x}"
    return True, f"q in 2,3,4, n <= {nmax}"


def _even_sum(nmax: int):
    for n in range(2, nmax + 1, 2):
        for t in range(1, n + 1):
            lhs, rhs = even_sum_identity(n, t)
            if lhs != rhs:
                return False, f"n={n} t={t}: {lhs} != {rhs}"
    return True, f"even n <= {nmax}, t >= 1"


def _codes(nmax: int):
    for n in range(2, nmax + 1):
        for k in (1, 2):
            if 2 * k > n:
                continue
            yield n, k, enumerate_even_codes(n, k)


def _macwilliams_involution(nmax: int):
    count = 0
    for n, k, codes in _codes(nmax):
        for C in codes:
            B = weight_distribution(C)
            Bp = macwilliams(B, C.size)
            if Bp.B != weight_distribution(dual_code(C)).B:
                return False, f"dual spectrum mismatch n={n} k={k}"
            if macwilliams(Bp, 4**n // C.size).B != B.B:
                return False, f"involution fails n={n} k={k}"
            count += 1
    return True, f"{count} codes"


def _trace_self_orth(nmax: int):
    for n, k, codes in _codes(nmax):
        for C in codes:
            words = C.codewords()
            for a, b in itertools.combinations_with_replacement(words, 2):
                if trace_ip(a, b):
                    return False, f"n={n} k={k}"
    return True, "even codes are trace self-orthogonal"


def _dual_counts_parity(nmax: int):
    for n, k, codes in _codes(nmax):
        for C in codes:
            D = dual_code(C, "trace").codewords()
            wts = np.count_nonzero(D, axis=1)
            if int(np.sum(wts % 2 == 0)) != even_dual_count(n, k):
                return False, f"even count n={n} k={k}"
            words = C.codewords()
            for a in D:
                coset = np.bitwise_xor(words, a[None, :])
                par = np.count_nonzero(coset, axis=1) % 2
                if np.any(par != np.count_nonzero(a) % 2):
                    return False, f"coset parity n={n} k={k}"
    return True, "dual even counts and coset parity"


def _incidence_family(nmax: int):
    for n, k, _ in _codes(nmax):
        st = family_stats(n, k)
        if st.N * (4**k - 1) != st.L * even_nonzero_count(n):
            return False, f"double counting n={n} k={k}"
        if st.avgB != st.direct_avgB or st.avgBperp != st.direct_avgBperp:
            return False, f"averages n={n} k={k}"
    return True, "constant incidence, formula = direct averages"


def _tau0_involution():
    for q in (2, 3, 4):
        top = (q - 1) / q
        for i in range(1000):
            z = top * i / 999
            if abs(asy.tau0(asy.tau0(z, q), q) - z) > 1e-12:
                return False, f"q={q} z={z}"
    return True, "1000 points, q in 2,3,4"


def _binary_constants():
    c = asy.bound_constants(2)
    ok = abs(c.tau2 - 0.1) < 1e-9 and abs(c.p_cr - 0.18) < 1e-12 and 0.10 <= c.tau1 <= 0.11
    return ok, f"tau1={c.tau1:.5f} tau2={c.tau2:.12f} p_cr={c.p_cr:.12f}"


def _q4_constants():
    c = asy.bound_constants(4)
    ok = abs(c.p_cr - 0.301) <= 2e-3 and c.tau_cr == c.tau2
    return ok, f"tau2={c.tau2:.5f} p_cr={c.p_cr:.5f}"


def _flat_rows():
    for r in (0.7, 0.8, 0.9, 1.0):
        want = (1 - r) / 2
        for f in (lambda: asy.existence_exponent(r, 0.1), lambda: asy.amrrw_exponent(r, 0.1, 4),
                  lambda: asy.hamming_exponent(r, 0.1, 4)):
            e = f()
            if e.status != asy.FLAT or abs(e.value - want) > 1e-12:
                return False, f"R_Q={r}: {e}"
    return True, "R_Q >= 0.7"


def _lp_duality(ns):
    for n in ns:
        for R_Q in (0.0, 0.5):
            rep = lp_bound_report(n, 4, R_Q, 0.1)
            if rep.solution.status != "optimal" or not rep.certificate.feasible:
                return False, f"n={n} R_Q={R_Q}: {rep.solution.status}"
            if abs(rep.certificate.bound - rep.bound) > 1e-7:
                return False, f"n={n} R_Q={R_Q}: gap {rep.certificate.bound - rep.bound}"
    return True, f"n in {tuple(ns)}"


def suite(level: str) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    cfg = LEVELS[level]
    return [
        ("krawtchouk-orthogonality", lambda: _orthogonality(cfg["kraw_n"])),
        ("generating-function", lambda: _generating_function(cfg["kraw_n"])),
        ("even-sum-identity", lambda: _even_sum(cfg["even_sum_n"])),
        ("macwilliams-involution", lambda: _macwilliams_involution(cfg["code_n"])),
        ("trace-self-orthogonality", lambda: _trace_self_orth(cfg["code_n"])),
        ("dual-counts-coset-parity", lambda: _dual_counts_parity(cfg["code_n"])),
        ("incidence-and-averages", lambda: _incidence_family(cfg["code_n"])),
        ("tau0-involution", _tau0_involution),
        ("binary-constants", _binary_constants),
        ("q4-constants", _q4_constants),
        ("flat-branch", _flat_rows),
        ("lp-strong-duality", lambda: _lp_duality(cfg["lp_n"])),
    ]


def run_suite(level: str = "fast") -> list[CheckResult]:
    out = []
    for name, fn in suite(level):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed invariant
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, ok, detail, time.perf_counter() - t0))
    return out
