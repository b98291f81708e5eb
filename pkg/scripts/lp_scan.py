"""Finite-length LP lower bounds on P_ue against the best enumerated code.

    python scripts/lp_scan.py [--nmax 6] [--p 0.1]

For each (n, k) the LP bound at R_Q = 1 - 2k/n is printed next to the
smallest P_ue over all even [n, k] codes (when enumeration is feasible) and
the normalized exponent -log_4(bound)/n.
"""

from __future__ import annotations

import argparse
import math
import time
from dataclasses import dataclass

from puebounds.code_lab import MAX_FAMILY_N, dual_code, enumerate_even_codes, pue_eval, weight_distribution
from puebounds.lp_bounds import lp_bound_report


@dataclass
class ScanConfig:
    nmax: int = 6
    p: float = 0.1


def best_code(n: int, k: int, p: float) -> float | None:
    if n > MAX_FAMILY_N or k > 2:
        return None
    codes = enumerate_even_codes(n, k)
    return min(pue_eval(weight_distribution(C), weight_distribution(dual_code(C, "trace")), p)
               for C in codes)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=ScanConfig.nmax)
    ap.add_argument("--p", type=float, default=ScanConfig.p)
    cfg = ScanConfig(**vars(ap.parse_args()))
    print(f"{'n':>3} {'k':>2} {'R_Q':>6} {'LP bound':>12} {'best code':>12} {'exponent':>9} {'time':>7}")
    for n in range(2, cfg.nmax + 1):
        for k in range(1, n // 2 + 1):
            R_Q = 1 - 2 * k / n
            t0 = time.perf_counter()
            rep = lp_bound_report(n, 4, R_Q, cfg.p)
            lb = float(rep.bound)
            best = best_code(n, k, cfg.p)
            expo = -math.log(lb, 4) / n if lb > 0 else math.inf
            best_s = f"{best:12.4e}" if best is not None else f"{'-':>12}"
            print(f"{n:3d} {k:2d} {R_Q:6.3f} {lb:12.4e} {best_s} {expo:9.4f} {time.perf_counter() - t0:6.2f}s")


if __name__ == "__main__":
    main()
