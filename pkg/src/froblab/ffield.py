"""Exact arithmetic in prime fields and their extensions.

An extension F_{p^e} is always realised in one step over the prime field,
as F_p[T]/(g) with g the lexicographically smallest monic irreducible of
degree e (coefficient vectors scanned in base-p counting order), so that
independent runs agree on every element label.  Elements are immutable
coefficient vectors in the power basis of g; a packed integer key
sum(c_i * p^i) doubles as a dense table index for the vectorised kernels.

Towers F_{q^n} are built the same way, as one extension of degree e*n over
F_p, with an explicit embedding of F_q when needed.  The field trace always
means the trace down to F_p, which is what the additive character
x -> e(tr(x)/p) consumes.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import CompositeCharacteristic, DegreeZero, ZeroArgument

TWO_PI_I = 2j * math.pi


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % d == 0:
            return n == d
    d = 41
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation, adequate for the desk-scale orders here."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class FieldElem:
    """Element of an ExtensionField: reduced coefficients in the power basis."""

    field: "ExtensionField"
    coeffs: tuple[int, ...]

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return self.field.element(
            tuple((a + b) % self.field.p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self.field.element(
            tuple((a - b) % self.field.p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "FieldElem":
        return self.field.element(tuple(-a % self.field.p for a in self.coeffs))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return self.field.element(self.field._mul(self.coeffs, other.coeffs))

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FieldElem":
        return self.field.element(self.field._pow(self.coeffs, n))

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroArgument("zero has no inverse")
        return self ** (self.field.order - 2)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    @property
    def key(self) -> int:
        return self.field.key_of(self.coeffs)

    def trace(self) -> int:
        return self.field.trace_to_prime(self)

    def __repr__(self) -> str:
        return f"FieldElem({self.field.p}^{self.field.e}, {list(self.coeffs)})"


class ExtensionField:
    """F_{p^e} as F_p[T]/(modulus), with dense tables for bulk work."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.modulus = modulus  # monic, low-first, length e+1
        self.order = p**e
        self._pow_p = [p**i for i in range(e + 1)]
        self._trace_form: tuple[int, ...] | None = None
        self._exp_keys: np.ndarray | None = None
        self._log_keys: np.ndarray | None = None
        self._trace_tab: np.ndarray | None = None
        self._char_tab: np.ndarray | None = None

    # -- element construction ------------------------------------------------

    def element(self, value: int | Sequence[int]) -> FieldElem:
        if isinstance(value, int):
            coeffs = tuple(value % self.p if i == 0 else 0 for i in range(self.e))
        else:
            v = list(value) + [0] * (self.e - len(value))
            coeffs = tuple(c % self.p for c in v[: self.e])
        return FieldElem(self, coeffs)

    def from_key(self, key: int) -> FieldElem:
        return FieldElem(self, self.coeffs_of(key))

    def key_of(self, coeffs: Sequence[int]) -> int:
        return sum(c * self._pow_p[i] for i, c in enumerate(coeffs))

    def coeffs_of(self, key: int) -> tuple[int, ...]:
        return tuple((key // self._pow_p[i]) % self.p for i in range(self.e))

    @property
    def zero(self) -> FieldElem:
        return self.element(0)

    @property
    def one(self) -> FieldElem:
        return self.element(1)

    # -- raw coefficient arithmetic -------------------------------------------

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, e = self.p, self.e
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        # reduce by the monic modulus, high degree first
        for d in range(2 * e - 2, e - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(e):
                    prod[d - e + i] -= c * self.modulus[i]
            prod[d] = 0
        return tuple(c % p for c in prod[:e])

    def _pow(self, a: tuple[int, ...], n: int) -> tuple[int, ...]:
        if n < 0:
            base = self._pow(a, self.order - 2)
            return self._pow(base, -n)
        result = self.one.coeffs
        while n:
            if n & 1:
                result = self._mul(result, a)
            a = self._mul(a, a)
            n >>= 1
        return result

    def mul_key(self, x: int, y: int) -> int:
        return self.key_of(self._mul(self.coeffs_of(x), self.coeffs_of(y)))

    def add_key(self, x: int, y: int) -> int:
        a, b = self.coeffs_of(x), self.coeffs_of(y)
        return self.key_of(tuple((u + v) % self.p for u, v in zip(a, b)))

    def neg_key(self, x: int) -> int:
        return self.key_of(tuple(-c % self.p for c in self.coeffs_of(x)))

    def inv_key(self, x: int) -> int:
        if x == 0:
            raise ZeroArgument("zero has no inverse")
        return self.key_of(self._pow(self.coeffs_of(x), self.order - 2))

    def pow_key(self, x: int, n: int) -> int:
        return self.key_of(self._pow(self.coeffs_of(x), n))

    # -- trace and additive character -----------------------------------------

    def _trace_basis(self) -> tuple[int, ...]:
        # tr(T^i) for i < e, from the Frobenius powers of T
        if self._trace_form is None:
            frob = []  # T^{p^j} as coefficient tuples
            t = self.element([0, 1]).coeffs if self.e > 1 else self.one.coeffs
            cur = t
            for _ in range(self.e):
                frob.append(cur)
                cur = self._pow(cur, self.p)
            form = []
            for i in range(self.e):
                acc = [0] * self.e
                for fj in frob:
                    fji = self._pow(fj, i)
                    acc = [(u + v) % self.p for u, v in zip(acc, fji)]
                assert all(c == 0 for c in acc[1:]), "trace must land in F_p"
                form.append(acc[0])
            self._trace_form = tuple(form)
        return self._trace_form

    def trace_to_prime(self, x: FieldElem) -> int:
        form = self._trace_basis()
        return sum(c * f for c, f in zip(x.coeffs, form)) % self.p

    def additive_character(self, x: FieldElem) -> complex:
        return cmath.exp(TWO_PI_I * self.trace_to_prime(x) / self.p)

    # -- enumeration -----------------------------------------------------------

    def enumerate_units(self) -> Iterator[FieldElem]:
        """All nonzero elements, in base-p counting order of coefficient keys."""
        for key in range(1, self.order):
            yield self.from_key(key)

    def enumerate_elements(self) -> Iterator[FieldElem]:
        for key in range(self.order):
            yield self.from_key(key)

    # -- dense tables for vectorised sums ---------------------------------------

    def trace_table(self) -> np.ndarray:
        """tr(x) indexed by packed key; int8 (p < 128 at desk scale)."""
        if self._trace_tab is None:
            form = np.array(self._trace_basis(), dtype=np.int64)
            keys = np.arange(self.order, dtype=np.int64)
            digits = np.empty((self.order, self.e), dtype=np.int64)
            for i in range(self.e):
                digits[:, i] = (keys // self._pow_p[i]) % self.p
            self._trace_tab = ((digits @ form) % self.p).astype(np.int16)
        return self._trace_tab

    def character_table(self) -> np.ndarray:
        """e(tr(x)/p) indexed by packed key."""
        if self._char_tab is None:
            roots = np.exp(TWO_PI_I * np.arange(self.p) / self.p)
            self._char_tab = roots[self.trace_table()]
        return self._char_tab

    def multiplicative_generator(self) -> FieldElem:
        fac = factorize(self.order - 1)
        for key in range(1, self.order):
            g = self.from_key(key)
            if g.is_zero():
                continue
            if all((g ** ((self.order - 1) // r)).key != self.one.key for r in fac):
                return g
        raise AssertionError("no generator found; field corrupt")

    def unit_log_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log): exp[i] = key of g^i, log[key of g^i] = i, log[0] = -1."""
        if self._exp_keys is None:
            g = self.multiplicative_generator().coeffs
            n = self.order - 1
            exp = np.empty(n, dtype=np.int64)
            cur = self.one.coeffs
            for i in range(n):
                exp[i] = self.key_of(cur)
                cur = self._mul(cur, g)
            log = np.full(self.order, -1, dtype=np.int64)
            log[exp] = np.arange(n)
            self._exp_keys = exp
            self._log_keys = log
        return self._exp_keys, self._log_keys

    # -- subfield embedding ------------------------------------------------------

    def embed_from(self, sub: "ExtensionField"):
        """Field embedding F_{p^d} -> F_{p^e} for d | e, as a key-to-key map."""
        if sub.p != self.p or self.e % sub.e != 0:
            raise ValueError("not a subfield")
        if sub.e == 1:
            table = {k: self.element(k).key for k in range(sub.p)}
            return lambda key: table[key]
        # image of sub's generator-of-power-basis: a root of sub.modulus here
        root = None
        for key in range(1, self.order):
            x = self.coeffs_of(key)
            acc = self.zero.coeffs
            xp = self.one.coeffs
            for c in sub.modulus:
                if c:
                    acc = tuple(
                        (u + c * v) % self.p for u, v in zip(acc, xp)
                    )
                xp = self._mul(xp, x)
            if all(c == 0 for c in acc):
                root = self.coeffs_of(key)
                break
        assert root is not None, "modulus must split in the tower"
        table = {}
        for key in range(sub.order):
            cs = sub.coeffs_of(key)
            acc = self.zero.coeffs
            xp = self.one.coeffs
            for c in cs:
                if c:
                    acc = tuple((u + c * v) % self.p for u, v in zip(acc, xp))
                xp = self._mul(xp, root)
            table[key] = self.key_of(acc)
        return lambda key: table[key]

    def __repr__(self) -> str:
        return f"ExtensionField(p={self.p}, e={self.e})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtensionField)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))


def _poly_has_linear_factor(p: int, coeffs: Sequence[int]) -> bool:
    for a in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * a + c) % p
        if acc == 0:
            return True
    return False


def _is_irreducible_prime_field(p: int, coeffs: list[int]) -> bool:
    """Irreducibility over F_p for the modulus scan (degree <= ~8 here)."""
    e = len(coeffs) - 1
    if e == 1:
        return True
    if coeffs[0] == 0 or _poly_has_linear_factor(p, coeffs):
        return False
    if e <= 3:
        return True  # no linear factor suffices up to degree 3
    # trial division by all monic irreducibles of degree <= e//2
    def poly_mod(f: list[int], g: list[int]) -> list[int]:
        f = f[:]
        dg = len(g) - 1
        for d in range(len(f) - 1, dg - 1, -1):
            c = f[d] % p
            if c:
                for i in range(dg + 1):
                    f[d - dg + i] = (f[d - dg + i] - c * g[i]) % p
        return [c % p for c in f[:dg]]

    for d in range(2, e // 2 + 1):
        for tail in range(p**d):
            g = [(tail // p**i) % p for i in range(d)] + [1]
            if _poly_has_linear_factor(p, g):
                continue  # a factor with a root would imply a root of f
            if poly_mod(list(coeffs), g) == [0] * d:
                return False
    return True


@functools.lru_cache(maxsize=None)
def build_extension(p: int, e: int) -> ExtensionField:
    """F_{p^e} with the first monic irreducible modulus in base-p scan order."""
    if not is_prime(p):
        raise CompositeCharacteristic(f"{p} is not prime")
    if e < 1:
        raise DegreeZero(f"extension degree must be >= 1, got {e}")
    if e == 1:
        return ExtensionField(p, 1, (0, 1))  # modulus T
    for tail in range(p**e):
        coeffs = [(tail // p**i) % p for i in range(e)] + [1]
        if _is_irreducible_prime_field(p, coeffs):
            return ExtensionField(p, e, tuple(coeffs))
    raise AssertionError("unreachable: irreducibles of every degree exist")


def trace_to_prime(x: FieldElem) -> int:
    return x.field.trace_to_prime(x)


def additive_character(x: FieldElem) -> complex:
    return x.field.additive_character(x)


def enumerate_units(field: ExtensionField) -> Iterator[FieldElem]:
    return field.enumerate_units()
