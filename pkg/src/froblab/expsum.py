"""Kloosterman and Birch sums, Frobenius traces, and their angle spectra.

The normalised sums follow the classical definitions:

    Kl_r over F with |F| = Q:   Q^{-(r-1)/2} * sum over x_1...x_r = a
                                of e(tr(x_1+...+x_r)/p),
    Bi  over F:                 Q^{-1/2} * sum over x != 0 of e(tr(ax+x^3)/p).

These literal values are bounded (|Kl_r| <= r, |Bi| <= 2) and real for even
rank, but they are not themselves power-sum sequences of a fixed unitary
class: the eigenvalue system attaches to the normalised trace function

    Kl:  (-1)^(r-1) * Kl_r,      Bi:  -(Q^{-1/2} + Bi)

(the Birch correction completes the sum over all of F and flips the sign of
the cohomological trace).  frobenius_trace returns those corrected values;
extract_angles consumes traces at n = 1..r and everything downstream
(prediction, races, relation censuses) runs on the resulting angles, for
which sum theta_j = 0 holds on the nose and the n-th trace is exactly
sum e(n theta_j) for every n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._roots import aberth_roots
from .errors import (
    BudgetExceeded,
    DegenerateNewton,
    OddSymplecticRank,
    ZeroArgument,
)
from .ffield import ExtensionField, build_extension

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class SumKind:
    """Family tag: hyper-Kloosterman of a given rank, or the cubic Birch sum."""

    family: str  # 'kl' or 'bi'
    rank: int

    def __post_init__(self):
        if self.family not in ("kl", "bi"):
            raise ValueError("family must be 'kl' or 'bi'")
        if self.family == "bi" and self.rank != 2:
            raise ValueError("Birch sums have rank 2")
        if self.family == "kl" and self.rank < 2:
            raise ValueError("Kloosterman rank must be >= 2")

    @property
    def symmetry(self) -> str:
        # real-valued trace families carry the +/- angle pairing
        if self.family == "bi" or self.rank % 2 == 0:
            return "Sp"
        return "SL"

    def label(self) -> str:
        return f"Kl({self.rank})" if self.family == "kl" else "Bi"


def Kl(r: int) -> SumKind:
    return SumKind("kl", r)


BI = SumKind("bi", 2)


@dataclass(frozen=True)
class AngleSpectrum:
    """Sorted angles theta_j in [0,1) of a unitarised conjugacy class."""

    symmetry: str
    r: int
    angles: tuple[float, ...]
    residual: float


@dataclass(frozen=True)
class CharPolyC:
    """Elementary symmetric functions e_1..e_r, convention det(1 - Tg)."""

    degree: int
    e: tuple[complex, ...]
    residual: float

    def coefficients(self) -> np.ndarray:
        """Ascending coefficients of det(1 - Tg) = sum (-1)^k e_k T^k."""
        out = np.zeros(self.degree + 1, dtype=complex)
        out[0] = 1.0
        for k, ek in enumerate(self.e, start=1):
            out[k] = (-1) ** k * ek
        return out


# ---------------------------------------------------------------------------
# Field-level tables.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _psi_log_table(field: ExtensionField) -> np.ndarray:
    """psi(tr(g^i)) for i = 0..Q-2, g the cached generator of the unit group."""
    exp, _ = field.unit_log_tables()
    return field.character_table()[exp]


def _log_of(field: ExtensionField, a_key: int) -> int:
    _, log = field.unit_log_tables()
    la = int(log[a_key])
    if la < 0:
        raise ZeroArgument("argument must be a unit")
    return la


def _check_budget(cost: float, budget: int | None) -> None:
    limit = DEFAULT_BUDGET if budget is None else budget
    if cost > limit:
        raise BudgetExceeded(f"enumeration cost {cost:.3g} exceeds budget {limit:.3g}")


# ---------------------------------------------------------------------------
# The sums.
# ---------------------------------------------------------------------------


def kloosterman(r: int, field: ExtensionField, a, budget: int | None = None) -> complex:
    """Normalised rank-r Kloosterman sum at a unit a of the given field."""
    if r < 2:
        raise ValueError("rank must be >= 2")
    a_key = a if isinstance(a, int) else a.key
    if a_key == 0:
        raise ZeroArgument("Kloosterman sums need a nonzero argument")
    Q = field.order
    norm = float(Q) ** ((r - 1) / 2.0)
    if r == 2:
        _check_budget(Q, budget)
        psi = _psi_log_table(field)
        M = Q - 1
        la = _log_of(field, a_key)
        partner = psi[(la - np.arange(M)) % M]
        return complex(np.sum(psi * partner)) / norm
    _check_budget(Q * math.log2(max(Q, 2)) * r, budget)
    line = _kl_line(field, r)
    return complex(line[_log_of(field, a_key)]) / norm


@lru_cache(maxsize=32)
def _kl_line(field: ExtensionField, r: int) -> np.ndarray:
    """Unnormalised Kl_r at every unit g^A, via r-fold cyclic convolution."""
    psi = _psi_log_table(field)
    return np.fft.ifft(np.fft.fft(psi) ** r)


def kloosterman_direct(
    r: int, field: ExtensionField, a, budget: int | None = None
) -> complex:
    """Same sum by nested enumeration; the independent cross-check path."""
    a_key = a if isinstance(a, int) else a.key
    if a_key == 0:
        raise ZeroArgument("Kloosterman sums need a nonzero argument")
    Q = field.order
    _check_budget(float(Q - 1) ** (r - 1), budget)
    psi = field.character_table()
    total = 0j
    # iterate over (r-1)-tuples of units; last coordinate solves the product
    def rec(depth: int, prod_key: int, phase: complex) -> complex:
        if depth == r - 1:
            last = field.mul_key(a_key, field.inv_key(prod_key))
            return phase * psi[last]
        acc = 0j
        for x in range(1, Q):
            acc += rec(depth + 1, field.mul_key(prod_key, x), phase * psi[x])
        return acc

    total = rec(0, field.one.key, 1.0 + 0j)
    return total / float(Q) ** ((r - 1) / 2.0)


def birch(field: ExtensionField, a, budget: int | None = None) -> complex:
    """Normalised Birch sum Q^{-1/2} sum_{x != 0} e(tr(ax + x^3)/p)."""
    a_key = a if isinstance(a, int) else a.key
    if a_key == 0:
        raise ZeroArgument("Birch sums need a nonzero argument")
    Q = field.order
    _check_budget(Q, budget)
    psi = _psi_log_table(field)
    M = Q - 1
    la = _log_of(field, a_key)
    idx = np.arange(M)
    cubes = psi[(3 * idx) % M]
    linear = psi[(la + idx) % M]
    return complex(np.sum(cubes * linear)) / math.sqrt(Q)


def raw_sum(kind: SumKind, field: ExtensionField, a, budget: int | None = None) -> complex:
    if kind.family == "kl":
        return kloosterman(kind.rank, field, a, budget)
    return birch(field, a, budget)


def frobenius_trace(
    kind: SumKind, field: ExtensionField, a, budget: int | None = None
) -> complex:
    """Power-sum value of the unitarised eigenvalue system at this field."""
    value = raw_sum(kind, field, a, budget)
    if kind.family == "kl":
        return value * (-1) ** (kind.rank - 1)
    return -(field.order**-0.5) - value


def raw_from_trace(kind: SumKind, trace: complex, field_order: int) -> complex:
    """Invert frobenius_trace: the literal normalised sum a trace predicts."""
    if kind.family == "kl":
        return trace * (-1) ** (kind.rank - 1)
    return -(field_order**-0.5) - trace


# ---------------------------------------------------------------------------
# Newton's identities and angle extraction.
# ---------------------------------------------------------------------------


def power_sums_to_charpoly(power_sums, symmetry: str) -> CharPolyC:
    """e_1..e_r from p_1..p_r; records determinant and palindromy defects."""
    ps = [complex(v) for v in power_sums]
    r = len(ps)
    if r < 1:
        raise DegenerateNewton("need at least one power sum")
    if symmetry == "Sp" and r % 2 != 0:
        raise OddSymplecticRank("symplectic symmetry needs even rank")
    e: list[complex] = [1.0 + 0j]
    for k in range(1, r + 1):
        acc = 0j
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * ps[i - 1]
        e.append(acc / k)
    es = tuple(e[1:])
    residual = abs(es[-1] - 1.0)
    if symmetry == "Sp":
        coeffs = [1.0 + 0j] + [(-1) ** k * es[k - 1] for k in range(1, r + 1)]
        pal = max(abs(coeffs[k] - coeffs[r - k]) for k in range(r + 1))
        residual = max(residual, pal)
    return CharPolyC(r, es, residual)


def _mod1(x: float) -> float:
    return x - math.floor(x)


def _circle_dist(x: float) -> float:
    f = _mod1(x)
    return min(f, 1.0 - f)


def _spectrum_from_charpoly(cp: CharPolyC, symmetry: str) -> AngleSpectrum:
    roots = aberth_roots(cp.coefficients())
    residual = cp.residual
    residual = max(residual, float(np.max(np.abs(np.abs(roots) - 1.0))))
    eig = 1.0 / roots
    eig = eig / np.abs(eig)  # project to the unit circle
    angles = np.sort(np.mod(np.angle(eig) / (2 * math.pi), 1.0))
    residual = max(residual, _circle_dist(float(angles.sum())))
    if symmetry == "Sp":
        reflected = np.sort(np.mod(-angles, 1.0))
        pair = float(np.max(np.minimum(np.abs(angles - reflected),
                                       1.0 - np.abs(angles - reflected))))
        residual = max(residual, pair)
    return AngleSpectrum(symmetry, cp.degree, tuple(float(t) for t in angles), residual)


def extract_angles(
    kind: SumKind, q: int, a, budget: int | None = None
) -> AngleSpectrum:
    """Angles of the eigenvalue system of `kind` at argument a in F_q*.

    Computes the trace at every extension F_{q^n}, n = 1..rank, by direct
    summation, recovers the characteristic polynomial by Newton's identities
    and returns the sorted root angles.
    """
    base = _field_for(q)
    a_key = a if isinstance(a, int) else a.key
    traces = []
    for n in range(1, kind.rank + 1):
        big = _extension_of(base, n)
        emb = _cached_embedding(base, big)
        traces.append(frobenius_trace(kind, big, emb(a_key), budget))
    cp = power_sums_to_charpoly(traces, kind.symmetry)
    return _spectrum_from_charpoly(cp, kind.symmetry)


def predict_value(spectrum: AngleSpectrum, n: int) -> complex:
    """sum_j e(n theta_j): the trace the spectrum assigns to extension n."""
    th = np.array(spectrum.angles)
    return complex(np.sum(np.exp(2j * math.pi * n * th)))


def predict_raw_sum(spectrum: AngleSpectrum, kind: SumKind, q: int, n: int) -> complex:
    """The literal normalised sum at F_{q^n} predicted by the spectrum."""
    return raw_from_trace(kind, predict_value(spectrum, n), q**n)


def value_series(
    spectrum: AngleSpectrum, kind: SumKind, q: int, n_max: int
) -> np.ndarray:
    """Literal sum values for n = 1..n_max, computed from the angles."""
    th = np.array(spectrum.angles)
    ns = np.arange(1, n_max + 1)
    traces = np.exp(2j * math.pi * np.outer(ns, th)).sum(axis=1)
    if kind.family == "kl":
        vals = traces * (-1) ** (kind.rank - 1)
    else:
        vals = -(np.asarray(q, dtype=float) ** (-ns / 2.0)) - traces
    return vals


@lru_cache(maxsize=None)
def _field_for(q: int) -> ExtensionField:
    from .ffield import factorize, is_prime

    if is_prime(q):
        return build_extension(q, 1)
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = fac.items()
    return build_extension(p, e)


@lru_cache(maxsize=None)
def _extension_of(base: ExtensionField, n: int) -> ExtensionField:
    return build_extension(base.p, base.e * n)


@lru_cache(maxsize=None)
def _cached_embedding(base: ExtensionField, big: ExtensionField):
    if base is big or (base.p, base.e) == (big.p, big.e):
        return lambda k: k
    return big.embed_from(base)
