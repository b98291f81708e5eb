"""GF(4) linear codes, weight enumerators and undetected-error probability.

Field elements are encoded as ints 0, 1, 2, 3 standing for 0, 1, w, w^2
(w^2 = w + 1). Addition is XOR on this encoding.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Literal, Sequence

import numpy as np

from .kraw_core import ParameterError, binom, kraw_table

__all__ = [
    "GF4_MUL",
    "GF4_INV",
    "GF4_SQ",
    "ResourceError",
    "NoCodes",
    "InconsistentSpectrum",
    "SpectrumWarning",
    "WeightEnum",
    "LinearCodeF4",
    "RateProfile",
    "CodeFamilyStats",
    "trace_ip",
    "weight_distribution",
    "macwilliams",
    "dual_code",
    "pue_eval",
    "enumerate_even_codes",
    "even_dual_count",
    "even_nonzero_count",
    "family_stats",
    "existence_profile",
    "load_weight_enum",
    "dump_weight_enum",
]

GF4_MUL = np.array(
    [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]], dtype=np.uint8
)
GF4_INV = (0, 1, 3, 2)  # index 0 unused
GF4_SQ = np.array([0, 1, 3, 2], dtype=np.uint8)  # Frobenius x -> x^2

# Practical enumeration limits; the per-code spectrum enumerates 4^k words.
MAX_ENUM_K = 12
MAX_FAMILY_N = 6
MAX_FAMILY_K = 2


class ResourceError(RuntimeError):
    """Requested enumeration is beyond the supported scale."""


class NoCodes(LookupError):
    """The requested code family is empty."""


class InconsistentSpectrum(ValueError):
    """A transformed spectrum came out negative."""


class SpectrumWarning(UserWarning):
    """B^perp >= B fails componentwise; the value is still returned."""


def _as_exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


@dataclass(frozen=True)
class WeightEnum:
    """Weight distribution B_0..B_n over an alphabet of size q."""

    q: int
    B: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "B", tuple(_as_exact(b) for b in self.B))
        if self.q < 2:
            raise ParameterError(f"q={self.q} must be >= 2")
        if not self.B:
            raise ParameterError("empty weight distribution")

    @property
    def n(self) -> int:
        return len(self.B) - 1

    @property
    def size(self) -> Fraction:
        return sum(self.B, Fraction(0))

    def __getitem__(self, i: int) -> Fraction:
        return self.B[i]

    def __len__(self) -> int:
        return len(self.B)

    def is_nonnegative(self) -> bool:
        return all(b >= 0 for b in self.B)


def _reduce_rows(rows: np.ndarray) -> np.ndarray:
    """Reduced row-echelon form over GF(4), zero rows dropped."""
    m = np.array(rows, dtype=np.uint8).copy()
    if m.ndim == 1:
        m = m[None, :]
    nrows, ncols = m.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = GF4_MUL[GF4_INV[m[r, c]], m[r]]
        for i in range(nrows):
            if i != r and m[i, c]:
                m[i] ^= GF4_MUL[m[i, c], m[r]]
        r += 1
    return m[:r]


@dataclass(frozen=True)
class LinearCodeF4:
    """A GF(4)-linear code of length n, stored by its RREF generator matrix."""

    n: int
    generators: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, n: int, rows: Iterable[Sequence[int]]) -> "LinearCodeF4":
        rows = [list(r) for r in rows]
        for r in rows:
            if len(r) != n:
                raise ParameterError(f"row {r} does not have length {n}")
            if any(not 0 <= v <= 3 for v in r):
                raise ParameterError(f"row {r} has entries outside GF(4)")
        if not rows:
            return cls(n, ())
        red = _reduce_rows(np.array(rows, dtype=np.uint8))
        return cls(n, tuple(tuple(int(v) for v in row) for row in red))

    @classmethod
    def full_space(cls, n: int) -> "LinearCodeF4":
        return cls.from_rows(n, np.eye(n, dtype=np.uint8).tolist())

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return 4**self.k

    def matrix(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((0, self.n), dtype=np.uint8)
        return np.array(self.generators, dtype=np.uint8)

    def codewords(self) -> np.ndarray:
        """All 4^k codewords as a (4^k, n) array."""
        if self.k > MAX_ENUM_K:
            raise ResourceError(f"k={self.k} exceeds enumeration limit {MAX_ENUM_K}")
        G = self.matrix()
        words = np.zeros((1, self.n), dtype=np.uint8)
        for row in G:
            # each new generator multiplies the word list by 4
            words = np.concatenate([words ^ GF4_MUL[a][row] for a in range(4)])
        return words

    def contains(self, v: Sequence[int]) -> bool:
        if self.k == 0:
            return not any(v)
        return _reduce_rows(np.vstack([self.matrix(), np.array(v, dtype=np.uint8)])).shape[0] == self.k


@dataclass(frozen=True)
class RateProfile:
    """Rates of a quantum code and its two classical companions.

    ``R_Q = 2 R_perp - 1 = 1 - 2 R`` with all logarithms base q.
    """

    n: int
    q: int
    R_Q: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.R_Q <= 1.0:
            raise ParameterError(f"R_Q={self.R_Q} outside [0, 1]")

    @property
    def R(self) -> float:
        return 0.5 * (1.0 - self.R_Q)

    @property
    def R_perp(self) -> float:
        return 0.5 * (1.0 + self.R_Q)

    @property
    def log_size_C(self) -> float:
        """log_q |C| = n R."""
        return self.n * self.R

    @property
    def log_size_Cperp(self) -> float:
        return self.n * self.R_perp

    @property
    def size_Cperp(self) -> float:
        return float(self.q) ** self.log_size_Cperp

    @property
    def size_C(self) -> float:
        return float(self.q) ** self.log_size_C


@dataclass(frozen=True)
class CodeFamilyStats:
    n: int
    k: int
    N: int
    L: int
    avgB: tuple[Fraction, ...]
    avgBperp: tuple[Fraction, ...]
    # direct averages over the enumerated family, for cross-checking
    direct_avgB: tuple[Fraction, ...] = field(default=(), compare=False)
    direct_avgBperp: tuple[Fraction, ...] = field(default=(), compare=False)


def trace_ip(a: Sequence[int], b: Sequence[int]) -> int:
    """a * b = sum a_i b_i^2 + a_i^2 b_i, returned as 0 or 1 (it lies in GF(2))."""
    if len(a) != len(b):
        raise ParameterError(f"length mismatch {len(a)} != {len(b)}")
    acc = 0
    for x, y in zip(a, b):
        acc ^= int(GF4_MUL[x, GF4_SQ[y]]) ^ int(GF4_MUL[GF4_SQ[x], y])
    if acc not in (0, 1):  # pragma: no cover - algebraically impossible
        raise ArithmeticError("trace form left GF(2)")
    return acc


def weight_distribution(C: LinearCodeF4) -> WeightEnum:
    words = C.codewords()
    w = np.count_nonzero(words, axis=1)
    counts = np.bincount(w, minlength=C.n + 1)
    return WeightEnum(4, tuple(int(c) for c in counts))


def macwilliams(B: WeightEnum, sizeC) -> WeightEnum:
    """Dual spectrum B_t^perp = |C|^-1 sum_i B_i K_t(q; i), exact."""
    sizeC = _as_exact(sizeC)
    if B.size != sizeC:
        raise ParameterError(f"sum of B ({B.size}) differs from |C| = {sizeC}")
    if sizeC == 0:
        raise ParameterError("|C| must be nonzero")
    tab = kraw_table(B.q, B.n)
    out = []
    for t in range(B.n + 1):
        row = tab.values[t]
        out.append(sum((B.B[i] * row[i] for i in range(B.n + 1)), Fraction(0)) / sizeC)
    if any(v < 0 for v in out):
        raise InconsistentSpectrum(f"transform produced negative entries: {out}")
    return WeightEnum(B.q, tuple(out))


def _nullspace(G: np.ndarray, n: int) -> list[list[int]]:
    """Basis of {x : G x^T = 0} over GF(4)."""
    if G.shape[0] == 0:
        return np.eye(n, dtype=np.uint8).tolist()
    R = _reduce_rows(G)
    pivots = [int(np.flatnonzero(row)[0]) for row in R]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for row, pc in zip(R, pivots):
            # row . v = 0 with row[pc] = 1 gives v[pc] = row[f] (char 2)
            v[pc] = row[f]
        basis.append(v.tolist())
    return basis


def dual_code(C: LinearCodeF4, form: Literal["dot", "trace"] = "dot") -> LinearCodeF4:
    """Dual under the dot product, or under the trace form a * b.

    The trace-form dual is additive but for a GF(4)-linear code coincides with
    the Hermitian dual, which is again linear.
    """
    G = C.matrix()
    if form == "dot":
        return LinearCodeF4.from_rows(C.n, _nullspace(G, C.n))
    if form == "trace":
        # a * b = Tr(a . conj(b)); for linear C this is zero for all of C iff
        # conj(b) is dot-orthogonal to C.
        conj_basis = _nullspace(G, C.n)
        return LinearCodeF4.from_rows(C.n, [GF4_SQ[np.array(v, dtype=np.uint8)].tolist() for v in conj_basis])
    raise ParameterError(f"unknown form {form!r}")


def pue_eval(B: WeightEnum, Bperp: WeightEnum, p: float) -> float:
    """sum_{j>=1} (B_j^perp - B_j) (p/(q-1))^j (1-p)^(n-j).

    Emits ``SpectrumWarning`` (value still returned) if B^perp < B somewhere.
    """
    if B.q != Bperp.q or B.n != Bperp.n:
        raise ParameterError("spectra must share q and n")
    q, n = B.q, B.n
    g = q - 1
    if not 0.0 <= p < g / q:
        raise ParameterError(f"p={p} outside [0, {g}/{q})")
    if any(bp < b for b, bp in zip(B.B, Bperp.B)):
        warnings.warn("B_perp < B in some component", SpectrumWarning, stacklevel=2)
    total = 0.0
    for j in range(1, n + 1):
        d = Bperp.B[j] - B.B[j]
        if d:
            total += float(d) * (p / g) ** j * (1.0 - p) ** (n - j)
    return total


def _is_even_code(words: np.ndarray) -> bool:
    return not np.any(np.count_nonzero(words, axis=1) & 1)


def _rref_matrices(n: int, k: int) -> Iterable[np.ndarray]:
    """Every k x n RREF matrix over GF(4) with k nonzero rows, once each."""
    for pivots in itertools.combinations(range(n), k):
        # free positions: row r, columns after pivot r that are not pivots
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
        base = np.zeros((k, n), dtype=np.uint8)
        for r, pc in enumerate(pivots):
            base[r, pc] = 1
        for vals in itertools.product(range(4), repeat=len(slots)):
            M = base.copy()
            for (r, c), v in zip(slots, vals):
                M[r, c] = v
            yield M


def enumerate_even_codes(n: int, k: int) -> list[LinearCodeF4]:
    """All even [n, k] GF(4)-linear codes, each exactly once."""
    if n < 1 or k < 0 or k > n:
        raise ParameterError(f"bad (n, k) = ({n}, {k})")
    if n > MAX_FAMILY_N or k > MAX_FAMILY_K:
        raise ResourceError(f"(n, k) = ({n}, {k}) beyond desk scale (n <= {MAX_FAMILY_N}, k <= {MAX_FAMILY_K})")
    out = []
    for M in _rref_matrices(n, k):
        # cheap row filter before enumerating the span
        if np.any(np.count_nonzero(M, axis=1) & 1):
            continue
        code = LinearCodeF4(n, tuple(tuple(int(v) for v in row) for row in M))
        if _is_even_code(code.codewords()):
            out.append(code)
    return out


def even_nonzero_count(n: int) -> int:
    """Number of nonzero even-weight vectors in GF(4)^n."""
    return (4**n + (-2) ** n) // 2 - 1


def even_dual_count(n: int, k: int) -> int:
    """Even-weight vectors in the dot dual of an even [n, k] code."""
    return (4 ** (n - k) + (-2) ** n) // 2


def family_stats(n: int, k: int) -> CodeFamilyStats:
    """Incidence counts and average spectra over the family of even [n,k] codes.

    Formula values use the total count of nonzero even vectors,
    (4^n + (-2)^n)/2 - 1, as the double-counting normalization, and the
    parity sign (-1)^(n-t) in the dual average (reduces to (-1)^t for even n).
    Both are cross-checked against direct averaging.
    """
    if k < 1:
        raise ParameterError("family averages need k >= 1")
    codes = enumerate_even_codes(n, k)
    if not codes:
        raise NoCodes(f"no even [{n},{k}] codes")
    N = len(codes)
    incidence: dict[bytes, int] = {}
    sumB = [0] * (n + 1)
    sumBp = [Fraction(0)] * (n + 1)
    for C in codes:
        words = C.codewords()
        for w in words:
            if w.any():
                key = w.tobytes()
                incidence[key] = incidence.get(key, 0) + 1
        wd = weight_distribution(C)
        wdp = weight_distribution(dual_code(C))
        for i in range(n + 1):
            sumB[i] += wd.B[i]
            sumBp[i] += wdp.B[i]
    Ls = set(incidence.values())
    if len(incidence) != even_nonzero_count(n) or len(Ls) != 1:
        # constant incidence over all even vectors fails
        raise ArithmeticError(f"incidence not constant over even vectors: {sorted(Ls)}")
    L = Ls.pop()
    ratio = Fraction(L, N)
    avgB = [Fraction(1)] + [
        ratio * binom(n, i) * 3**i if i % 2 == 0 else Fraction(0) for i in range(1, n + 1)
    ]
    avgBp = [Fraction(1)] + [
        Fraction(binom(n, t) * 3**t, 4**k) * (1 + ((-1) ** (n - t) * 2 ** (n - 1) - 1) * ratio)
        for t in range(1, n + 1)
    ]
    return CodeFamilyStats(
        n,
        k,
        N,
        L,
        tuple(avgB),
        tuple(avgBp),
        tuple(Fraction(s, N) for s in sumB),
        tuple(s / N for s in sumBp),
    )


def existence_profile(n: int, k_Q: float, i: int) -> float:
    """Binomial ceiling 2 n^2 C(n,i) 3^i 2^(k_Q - n) on B_i^perp."""
    if not 0 <= i <= n:
        raise ParameterError(f"i={i} outside [0, {n}]")
    return 2.0 * n * n * binom(n, i) * 3.0**i * 2.0 ** (k_Q - n)


# ---------------------------------------------------------------------------
# weight-enumerator file format


class EnumFileError(ValueError):
    pass


def _parse_vec(rec: dict, key: str, n: int | None) -> tuple[Fraction, ...]:
    raw = rec[key]
    if not isinstance(raw, list):
        raise EnumFileError(f"field {key!r} must be an array")
    out = []
    for idx, v in enumerate(raw):
        if isinstance(v, float):
            raise EnumFileError(f"{key}[{idx}]: floats are not accepted, use a decimal string")
        try:
            out.append(_as_exact(v))
        except (ValueError, ZeroDivisionError) as exc:
            raise EnumFileError(f"{key}[{idx}]: cannot parse {v!r}") from exc
    if n is not None and len(out) != n + 1:
        raise EnumFileError(f"field {key!r} has {len(out)} entries, expected n+1 = {n + 1}")
    return tuple(out)


def load_weight_enum(text: str) -> tuple[WeightEnum, WeightEnum]:
    """Parse the JSON weight-enumerator record; returns (B, Bperp).

    Bperp is derived by the MacWilliams transform when absent, using
    ``sizeC`` if given and sum(B) otherwise.
    """
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EnumFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(rec, dict):
        raise EnumFileError("top level must be an object")
    for key in ("q", "n", "B"):
        if key not in rec:
            raise EnumFileError(f"missing field {key!r}")
    q, n = rec["q"], rec["n"]
    if not isinstance(q, int) or not isinstance(n, int):
        raise EnumFileError("q and n must be integers")
    B = WeightEnum(q, _parse_vec(rec, "B", n))
    if "Bperp" in rec:
        Bp = WeightEnum(q, _parse_vec(rec, "Bperp", n))
    else:
        size = _as_exact(rec["sizeC"]) if "sizeC" in rec else B.size
        Bp = macwilliams(B, size)
    return B, Bp


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def dump_weight_enum(B: WeightEnum, Bperp: WeightEnum | None = None, sizeC=None) -> str:
    rec: dict = {"q": B.q, "n": B.n, "B": [_fmt(b) for b in B.B]}
    if Bperp is not None:
        rec["Bperp"] = [_fmt(b) for b in Bperp.B]
    if sizeC is not None:
        rec["sizeC"] = _fmt(_as_exact(sizeC))
    return json.dumps(rec, indent=2) + "\n"
