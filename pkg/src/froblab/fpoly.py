"""Univariate polynomials over F_q: factorisation, irreducibility, enumeration.

Coefficients are stored low-degree first as packed field-element keys (see
ffield), so a monic polynomial of degree d is also a single integer
sum(key_i * q^i) over its d low coefficients.  That packing is what lets the
irreducible sieve and the von Mangoldt tables run as flat numpy arrays: a
"short interval" of polynomials is a contiguous slice of keys.

Factorisation is the classical chain: squarefree part via gcd with the
derivative (with p-th root extraction when the derivative vanishes),
distinct-degree splitting, then seeded Cantor-Zassenhaus for equal-degree
splits.  Factors are sorted by (degree, coefficient order) so the output is
canonical regardless of the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import NotMonic, ZeroPolynomial
from .ffield import ExtensionField, build_extension

Key = int


@dataclass(frozen=True)
class Poly:
    """Polynomial over base; coeffs are packed field keys, low degree first."""

    base: ExtensionField
    coeffs: tuple[Key, ...]  # normalised: no trailing zeros; () is zero

    @staticmethod
    def make(base: ExtensionField, coeffs: Sequence[Key]) -> "Poly":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(base, tuple(cs))

    @staticmethod
    def from_ints(base: ExtensionField, ints: Sequence[int]) -> "Poly":
        return Poly.make(base, [base.element(c).key for c in ints])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.base.one.key

    def constant_term(self) -> Key:
        return self.coeffs[0] if self.coeffs else 0

    def __add__(self, other: "Poly") -> "Poly":
        F = self.base
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Poly.make(F, [F.add_key(x, y) for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(self.base.neg_key(self.base.one.key))

    def scale(self, c: Key) -> "Poly":
        F = self.base
        return Poly.make(F, [F.mul_key(c, x) for x in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(self.base, ())
        F = self.base
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = F.add_key(out[i + j], F.mul_key(a, b))
        return Poly.make(F, out)

    def shift(self, n: int) -> "Poly":
        """Multiply by T^n."""
        if self.is_zero():
            return self
        return Poly(self.base, (0,) * n + self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        F = self.base
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(F, ()), self
        inv_lead = F.inv_key(other.coeffs[-1])
        quot = [0] * (dq + 1)
        for d in range(len(rem) - 1, len(other.coeffs) - 2, -1):
            c = rem[d]
            if c == 0:
                continue
            qc = F.mul_key(c, inv_lead)
            quot[d - (len(other.coeffs) - 1)] = qc
            for i, oc in enumerate(other.coeffs):
                if oc:
                    rem[d - (len(other.coeffs) - 1) + i] = F.add_key(
                        rem[d - (len(other.coeffs) - 1) + i],
                        F.neg_key(F.mul_key(qc, oc)),
                    )
        return Poly.make(F, quot), Poly.make(F, rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no monic normalisation")
        return self.scale(self.base.inv_key(self.coeffs[-1]))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def pow_mod(self, n: int, modulus: "Poly") -> "Poly":
        result = Poly.from_ints(self.base, [1])
        base = self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            n >>= 1
        return result

    def derivative(self) -> "Poly":
        F = self.base
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(F.mul_key(F.element(i).key, self.coeffs[i]))
        return Poly.make(F, out)

    def evaluate(self, x: Key) -> Key:
        F = self.base
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add_key(F.mul_key(acc, x), c)
        return acc

    def packed_key(self) -> int:
        """Monic polynomial as an integer over its low coefficients, base q."""
        if not self.is_monic():
            raise NotMonic("packed keys are defined for monic polynomials")
        q = self.base.order
        return sum(c * q**i for i, c in enumerate(self.coeffs[:-1]))

    @staticmethod
    def from_packed(base: ExtensionField, degree: int, key: int) -> "Poly":
        q = base.order
        coeffs = [(key // q**i) % q for i in range(degree)] + [base.one.key]
        return Poly(base, tuple(coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.base.p}^{self.base.e}, {list(self.coeffs)})"


@dataclass(frozen=True)
class Factorization:
    """unit * product of monic irreducible powers, canonically sorted."""

    unit: Key
    factors: tuple[tuple[Poly, int], ...]

    def product(self, base: ExtensionField) -> Poly:
        out = Poly.from_ints(base, [1]).scale(self.unit)
        for f, mult in self.factors:
            for _ in range(mult):
                out = out * f
        return out


def _pth_root(f: Poly) -> Poly:
    """Given f with f' = 0, i.e. f = g(T^p), recover g (coefficientwise root)."""
    F = f.base
    root_exp = F.p ** (F.e - 1)  # x -> x^{p^{e-1}} inverts Frobenius
    out = [F.pow_key(f.coeffs[i], root_exp) for i in range(0, len(f.coeffs), F.p)]
    return Poly.make(F, out)


def _squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun-style decomposition adapted to characteristic p."""
    F = f.base
    out: list[tuple[Poly, int]] = []

    def rec(g: Poly, mult: int) -> None:
        if g.degree <= 0:
            return
        d = g.derivative()
        if d.is_zero():
            rec(_pth_root(g), mult * F.p)
            return
        w = g.gcd(d)
        sqfree = g // w
        i = 1
        while sqfree.degree > 0:
            y = sqfree.gcd(w)
            piece = sqfree // y
            if piece.degree > 0:
                out.append((piece, mult * i))
            sqfree, w = y, w // y
            i += 1
        if w.degree > 0:
            # residual carries exactly the multiplicities divisible by p
            assert w.derivative().is_zero()
            rec(_pth_root(w), mult * F.p)

    rec(f.monic(), 1)
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split a squarefree monic f into products of irreducibles of one degree."""
    F = f.base
    q = F.order
    out = []
    x = Poly.from_ints(F, [0, 1])
    h = x
    g = f
    d = 0
    while g.degree > 0:
        d += 1
        if 2 * d > g.degree:
            out.append((g, g.degree))
            break
        h = h.pow_mod(q, g)
        gd = g.gcd(h - x)
        if gd.degree > 0:
            out.append((gd, d))
            g = g // gd
            h = h % g
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles (odd q)."""
    if f.degree == d:
        return [f]
    F = f.base
    q = F.order
    exponent = (q**d - 1) // 2
    while True:
        a = Poly.make(F, [rng.randrange(q) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        g = f.gcd(a)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)
        b = a.pow_mod(exponent, f) - Poly.from_ints(F, [1])
        g = f.gcd(b)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor(f: Poly, seed: int = 0) -> Factorization:
    """Complete factorisation; deterministic output for every seed."""
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    unit = f.coeffs[-1]
    rng = random.Random(seed)
    pieces: list[tuple[Poly, int]] = []
    for sqfree, mult in _squarefree_decomposition(f):
        for prod, d in _distinct_degree(sqfree):
            for irr in _equal_degree(prod, d, rng):
                pieces.append((irr, mult))
    pieces.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return Factorization(unit, tuple(pieces))


def mangoldt(f: Poly) -> int:
    """deg P if f is a power of a single monic irreducible P, else 0."""
    if f.is_zero() or not f.is_monic():
        raise NotMonic("the von Mangoldt function takes monic nonconstant input")
    if f.degree < 1:
        raise NotMonic("constant polynomials are excluded")
    fac = factor(f)
    if len(fac.factors) == 1:
        return fac.factors[0][0].degree
    return 0


def mobius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def irreducible_count(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over F_q (Gauss's formula)."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    total = sum(mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def rabin_irreducible(f: Poly) -> bool:
    """Irreducibility via Frobenius fixed-field criteria."""
    n = f.degree
    if n < 1:
        return False
    F = f.base
    q = F.order
    x = Poly.from_ints(F, [0, 1])
    if x.pow_mod(q**n, f) != x % f:
        return False
    for r in set(_prime_divisors(n)):
        h = x.pow_mod(q ** (n // r), f) - x
        if f.gcd(h).degree != 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def enumerate_monic(
    field: ExtensionField, d: int, filt: str = "all"
) -> Iterator[Poly]:
    """Monic polynomials of degree exactly d, in packed-key order.

    filt is one of 'all', 'irreducible', 'nonzero-constant-term',
    'coprime-to-T' (the last two agree: T is the only monic prime at 0).
    """
    if filt not in ("all", "irreducible", "nonzero-constant-term", "coprime-to-T"):
        raise ValueError(f"unknown filter {filt!r}")
    if d == 0:
        if filt in ("all", "nonzero-constant-term", "coprime-to-T"):
            yield Poly.from_ints(field, [1])
        return
    q = field.order
    if filt == "irreducible":
        for key in irreducible_keys(field, d)[d]:
            yield Poly.from_packed(field, d, int(key))
        return
    for key in range(q**d):
        if filt != "all" and key % q == 0:
            continue
        yield Poly.from_packed(field, d, key)


def reflect(f: Poly) -> Poly:
    """T^{deg f} * f(1/T): the coefficient-reversed polynomial."""
    if f.is_zero():
        raise ZeroPolynomial("reflection of the zero polynomial is undefined")
    return Poly.make(f.base, tuple(reversed(f.coeffs)))


# ---------------------------------------------------------------------------
# Vectorised sieve over packed keys.
# ---------------------------------------------------------------------------


def _digit_matrix(q: int, d: int) -> np.ndarray:
    """All monic degree-d key digit rows, shape (q^d, d), low digit first."""
    keys = np.arange(q**d, dtype=np.int64)
    out = np.empty((q**d, d), dtype=np.int16)
    for i in range(d):
        out[:, i] = (keys // q**i) % q
    return out


class _SieveCache:
    def __init__(self) -> None:
        self.store: dict[tuple[int, int, int], list[np.ndarray]] = {}

    def get(self, field: ExtensionField, max_deg: int) -> list[np.ndarray]:
        key = (field.p, field.e, max_deg)
        for (p, e, deg), val in self.store.items():
            if (p, e) == (field.p, field.e) and deg >= max_deg:
                return val
        val = _run_sieve(field, max_deg)
        self.store[key] = val
        return val


_SIEVE_CACHE = _SieveCache()


def _run_sieve(field: ExtensionField, max_deg: int) -> list[np.ndarray]:
    """Eratosthenes over monic polynomials: cross out every product P * g."""
    q = field.order
    prime_field = field.e == 1
    if not prime_field:
        # key-indexed multiplication table for small q
        mul_tab = np.array(
            [[field.mul_key(a, b) for b in range(q)] for a in range(q)],
            dtype=np.int16,
        )
        add_tab = np.array(
            [[field.add_key(a, b) for b in range(q)] for a in range(q)],
            dtype=np.int16,
        )
    irr: list[np.ndarray] = [np.array([], dtype=np.int64)]
    irr.append(np.arange(q, dtype=np.int64))  # all monic linears
    for d in range(2, max_deg + 1):
        composite = np.zeros(q**d, dtype=bool)
        for j in range(1, d // 2 + 1):
            batch = _digit_matrix(q, d - j)  # low coeffs of monic degree d-j
            for pkey in irr[j]:
                pdigits = [(int(pkey) // q**i) % q for i in range(j)] + [1]
                # multiply P by every monic of degree d-j
                prod = np.zeros((batch.shape[0], d + 1), dtype=np.int64)
                full = np.concatenate(
                    [batch, np.ones((batch.shape[0], 1), dtype=np.int16)], axis=1
                )
                if prime_field:
                    for i, pc in enumerate(pdigits):
                        if pc:
                            prod[:, i : i + d - j + 1] += pc * full
                    prod %= q
                else:
                    for i, pc in enumerate(pdigits):
                        if pc:
                            term = mul_tab[pc, full]
                            seg = prod[:, i : i + d - j + 1]
                            prod[:, i : i + d - j + 1] = add_tab[
                                seg, term
                            ]
                packed = np.zeros(batch.shape[0], dtype=np.int64)
                for i in range(d):
                    packed += prod[:, i].astype(np.int64) * q**i
                composite[packed] = True
        irr.append(np.nonzero(~composite)[0].astype(np.int64))
    return irr


def irreducible_keys(field: ExtensionField, max_deg: int) -> list[np.ndarray]:
    """irr[d] = packed keys of all monic irreducibles of degree d <= max_deg."""
    return _SIEVE_CACHE.get(field, max_deg)


def mangoldt_table(field: ExtensionField, n: int) -> np.ndarray:
    """Lambda over all monic degree-n polynomials, indexed by packed key."""
    q = field.order
    lam = np.zeros(q**n, dtype=np.int16)
    irr = irreducible_keys(field, n)
    lam[irr[n]] = n
    for d in range(1, n // 2 + 1):
        if n % d != 0:
            continue
        j = n // d
        if j < 2:
            continue
        keys = irr[d]
        # batch powering: P^j for all degree-d irreducibles at once
        digits = np.zeros((len(keys), d + 1), dtype=np.int64)
        for i in range(d):
            digits[:, i] = (keys // q**i) % q
        digits[:, d] = 1
        acc = digits
        for _ in range(j - 1):
            acc = _batch_multiply(field, acc, digits)
        packed = np.zeros(len(keys), dtype=np.int64)
        for i in range(n):
            packed += acc[:, i] * q**i
        lam[packed] = d
    return lam


def _batch_multiply(field: ExtensionField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rowwise polynomial product of two batches of key-digit rows."""
    q = field.order
    n_out = a.shape[1] + b.shape[1] - 1
    out = np.zeros((a.shape[0], n_out), dtype=np.int64)
    if field.e == 1:
        for i in range(a.shape[1]):
            col = a[:, i : i + 1]
            out[:, i : i + b.shape[1]] += col * b
        out %= q
    else:
        mul_tab = np.array(
            [[field.mul_key(x, y) for y in range(q)] for x in range(q)],
            dtype=np.int64,
        )
        add_tab = np.array(
            [[field.add_key(x, y) for y in range(q)] for x in range(q)],
            dtype=np.int64,
        )
        for i in range(a.shape[1]):
            term = mul_tab[a[:, i : i + 1], b]
            seg = out[:, i : i + b.shape[1]]
            out[:, i : i + b.shape[1]] = add_tab[seg, term]
    return out
