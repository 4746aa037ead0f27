"""Truncated unit groups and their character theory.

Two families of abelian groups drive the bias machinery:

* the norm-one circle S^1_{k,q}: units u of F_q[S]/(S^k) with u(0) = 1 and
  u(S)u(-S) = 1.  Its order is q^kappa (kappa = k/2) and it is a p-group;
  its characters are the "super-even" characters.  The projection
  U(f) = f / sqrt(N(f)) sends any polynomial with nonzero constant term
  into the circle, and the sector of f is the value U(f) mod S^k.

* the unit group (F_q[T]/(T^m))^x = F_q^x x (1 + T F_q[T]/(T^m)).  Dirichlet
  characters mod T^m that are trivial on F_q^x ("even") are exactly the
  characters of the 1-unit p-group.

Both groups get an explicit generator basis: the 1-unit groups are generated
by {1 + beta T^i} with i prime to p (beta running over an F_p-basis of F_q),
and the circle by the projections U(1 + beta S^i) for odd i prime to p.  A
dense discrete-log table over the generator box is built once per group and
verified to be a bijection, which both proves the generating property at the
given size and makes character evaluation a dictionary hit.

Character values are p-power (or (q-1)-st) roots of unity; they are returned
as complex numbers together with an exact exponent when needed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    EvenCharacteristic,
    OddTruncation,
    TrivialCharacter,
    ZeroConstantTerm,
)
from .ffield import ExtensionField, build_extension, factorize, is_prime
from .fpoly import Poly

TWO_PI_I = 2j * math.pi

Trunc = tuple[int, ...]  # length-k tuple of field keys, index = power of S


@lru_cache(maxsize=None)
def field_of_order(q: int) -> ExtensionField:
    if is_prime(q):
        return build_extension(q, 1)
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = fac.items()
    return build_extension(p, e)


class TruncRing:
    """F_q[S]/(S^k) with the norm, even square root and circle projection."""

    def __init__(self, field: ExtensionField, k: int):
        self.field = field
        self.k = k
        self.one: Trunc = tuple([field.one.key] + [0] * (k - 1))

    def mul(self, u: Trunc, v: Trunc) -> Trunc:
        F, k = self.field, self.k
        out = [0] * k
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j in range(k - i):
                b = v[j]
                if b:
                    out[i + j] = F.add_key(out[i + j], F.mul_key(a, b))
        return tuple(out)

    def inv(self, u: Trunc) -> Trunc:
        F, k = self.field, self.k
        if u[0] == 0:
            raise ZeroConstantTerm("not a unit of the truncated ring")
        inv0 = F.inv_key(u[0])
        out = [inv0] + [0] * (k - 1)
        for i in range(1, k):
            s = 0
            for j in range(1, i + 1):
                s = F.add_key(s, F.mul_key(u[j], out[i - j]))
            out[i] = F.neg_key(F.mul_key(inv0, s))
        return tuple(out)

    def pow(self, u: Trunc, n: int) -> Trunc:
        result = self.one
        base = u
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def involute(self, u: Trunc) -> Trunc:
        """u(-S)."""
        F = self.field
        return tuple(c if i % 2 == 0 else F.neg_key(c) for i, c in enumerate(u))

    def norm(self, u: Trunc) -> Trunc:
        return self.mul(u, self.involute(u))

    def even_sqrt(self, n: Trunc, c0: int) -> Trunc:
        """The even square root c of an even unit n with c(0) = c0."""
        F, k = self.field, self.k
        out = [0] * k
        out[0] = c0
        inv = F.inv_key(F.mul_key(F.element(2).key, c0))
        for j in range(2, k, 2):
            s = 0
            for i in range(1, j):
                s = F.add_key(s, F.mul_key(out[i], out[j - i]))
            out[j] = F.mul_key(F.add_key(n[j], F.neg_key(s)), inv)
        return tuple(out)

    def u_map(self, u: Trunc) -> Trunc:
        """Circle projection u / sqrt(N(u)); needs a unit."""
        if u[0] == 0:
            raise ZeroConstantTerm("the circle projection needs f(0) != 0")
        c = self.even_sqrt(self.norm(u), u[0])
        return self.mul(u, self.inv(c))

    def from_poly(self, f: Poly) -> Trunc:
        cs = list(f.coeffs[: self.k])
        return tuple(cs + [0] * (self.k - len(cs)))

    def packed(self, u: Trunc) -> int:
        q = self.field.order
        return sum(c * q**i for i, c in enumerate(u))


@dataclass
class AbelianBasis:
    """Generator basis of a finite abelian group with a dense dlog table.

    generators[i] has order orders[i], the products over the exponent box
    enumerate the group exactly once, and dlog maps an element to its
    exponent vector.
    """

    generators: list[Trunc]
    orders: list[int]
    elements: list[Trunc]
    index: dict[Trunc, int]
    dlog_vectors: list[tuple[int, ...]]

    @property
    def order(self) -> int:
        return len(self.elements)

    def dlog(self, u: Trunc) -> tuple[int, ...]:
        return self.dlog_vectors[self.index[u]]


def _build_basis(ring: TruncRing, gens: list[Trunc], expected_order: int) -> AbelianBasis:
    orders = []
    for g in gens:
        p = ring.field.p
        n = 1
        cur = g
        while cur != ring.one:
            cur = ring.pow(cur, p)
            n *= p
        orders.append(n)
    total = math.prod(orders)
    if total != expected_order:
        raise AssertionError(
            f"generator orders multiply to {total}, expected {expected_order}"
        )
    elements: list[Trunc] = []
    index: dict[Trunc, int] = {}
    vectors: list[tuple[int, ...]] = []
    for vec in itertools.product(*[range(d) for d in orders]):
        u = ring.one
        for g, x in zip(gens, vec):
            if x:
                u = ring.mul(u, ring.pow(g, x))
        if u in index:
            raise AssertionError("generator products collide; not a basis")
        index[u] = len(elements)
        elements.append(u)
        vectors.append(vec)
    return AbelianBasis(gens, orders, elements, index, vectors)


def _fp_basis(field: ExtensionField) -> list[int]:
    """Keys of an F_p-basis of F_q (the power basis 1, T, ..., T^{e-1})."""
    return [field.element([0] * i + [1]).key for i in range(field.e)]


def _unit_depth(u: Trunc, k: int) -> int:
    """Largest d with u = 1 mod S^d (k for the identity)."""
    for i in range(1, k):
        if u[i] != 0:
            return i
    return k


# ---------------------------------------------------------------------------
# The circle group and super-even characters.
# ---------------------------------------------------------------------------


class SphereGroup:
    """S^1_{k,q} with generator basis, dlog table, and sector machinery."""

    def __init__(self, k: int, q: int):
        if k < 2 or k % 2 != 0:
            raise OddTruncation("truncation order must be even and >= 2")
        field = field_of_order(q)
        if field.p == 2:
            raise EvenCharacteristic("odd characteristic required")
        self.field = field
        self.q = q
        self.k = k
        self.kappa = k // 2
        self.ring = TruncRing(field, k)
        gens = []
        self.gen_levels: list[int] = []
        for i in range(1, k, 2):
            if i % field.p == 0:
                continue
            for beta in _fp_basis(field):
                u = [field.one.key] + [0] * (k - 1)
                u[i] = beta
                gens.append(self.ring.u_map(tuple(u)))
                self.gen_levels.append(i)
        self.basis = _build_basis(self.ring, gens, q**self.kappa)
        # depth(u) = largest d with u = 1 mod S^d; drives conductor detection
        self.depths = np.array(
            [_unit_depth(u, k) for u in self.basis.elements], dtype=np.int32
        )
        self._sector_tab: np.ndarray | None = None
        self._char_cache: dict[tuple[int, ...], np.ndarray] = {}

    @property
    def order(self) -> int:
        return self.basis.order

    def dlog(self, u: Trunc) -> tuple[int, ...]:
        return self.basis.dlog(u)

    def element_index(self, u: Trunc) -> int:
        return self.basis.index[u]

    def sector_table(self) -> np.ndarray:
        """Packed unit residue of R_{k,q} -> circle element index (else -1)."""
        if self._sector_tab is None:
            q, k = self.field.order, self.k
            tab = np.full(q**k, -1, dtype=np.int32)
            ring = self.ring
            for key in range(q**k):
                if key % q == 0:
                    continue
                u = tuple((key // q**i) % q for i in range(k))
                tab[key] = self.basis.index[ring.u_map(u)]
            self._sector_tab = tab
        return self._sector_tab

    def sector_of_poly(self, f: Poly) -> int:
        if f.constant_term() == 0:
            raise ZeroConstantTerm("sectors are defined for f(0) != 0")
        return int(self.sector_table()[self.ring.packed(self.ring.from_poly(f))])

    def sector_index_power(self, idx: int, j: int) -> int:
        """Index of u^j for the circle element with the given index."""
        u = self.basis.elements[idx]
        return self.basis.index[self.ring.pow(u, j)]

    def character_values(self, exponents: tuple[int, ...]) -> np.ndarray:
        """Value vector of the character over all circle elements, by index."""
        key = tuple(exponents)
        if key not in self._char_cache:
            orders = np.array(self.basis.orders, dtype=float)
            mat = np.array(self.basis.dlog_vectors, dtype=float)
            phase = (mat * (np.array(exponents) / orders)).sum(axis=1)
            self._char_cache[key] = np.exp(TWO_PI_I * phase)
        return self._char_cache[key]


@lru_cache(maxsize=None)
def sphere_group(k: int, q: int) -> SphereGroup:
    return SphereGroup(k, q)


@dataclass(frozen=True)
class SuperEvenChar:
    """Character of the circle group, as exponents against its basis."""

    group: SphereGroup
    exponents: tuple[int, ...]

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.exponents)

    def conjugate(self) -> "SuperEvenChar":
        ords = self.group.basis.orders
        return SuperEvenChar(
            self.group, tuple((-x) % d for x, d in zip(self.exponents, ords))
        )

    def value_at_index(self, idx: int) -> complex:
        return complex(self.group.character_values(self.exponents)[idx])

    def value_exponent_at_index(self, idx: int) -> Fraction:
        """Exact exponent t with value = e(t), reduced mod 1."""
        vec = self.group.basis.dlog_vectors[idx]
        t = sum(
            Fraction(x * v, d)
            for x, v, d in zip(self.exponents, vec, self.group.basis.orders)
        )
        return t % 1

    def __call__(self, f: Poly) -> complex:
        """Completely multiplicative value at a polynomial with f(0) != 0."""
        return self.value_at_index(self.group.sector_of_poly(f))

    def conductor(self) -> int:
        """Largest odd depth where the character is still nontrivial (0 if trivial)."""
        g = self.group
        vals = g.character_values(self.exponents)
        for d in range(g.k - 1, 0, -2):
            for gen, lvl in zip(g.basis.generators, g.gen_levels):
                if lvl == d and abs(vals[g.element_index(gen)] - 1.0) > 1e-12:
                    return d
        return 0

    def is_primitive(self) -> bool:
        return self.conductor() == 2 * self.group.kappa - 1

    def label(self) -> str:
        return "Xi" + "".join(f"_{x}" for x in self.exponents)


def enumerate_superevens(k: int, q: int) -> Iterator[SuperEvenChar]:
    """All q^kappa characters of S^1_{k,q}, trivial one first."""
    g = sphere_group(k, q)
    for vec in itertools.product(*[range(d) for d in g.basis.orders]):
        yield SuperEvenChar(g, vec)


def conductor(chi: SuperEvenChar) -> int:
    return chi.conductor()


def is_primitive(chi: SuperEvenChar) -> bool:
    return chi.is_primitive()


def norm_map(ring: TruncRing, u: Trunc) -> Trunc:
    return ring.norm(u)


def u_map(ring: TruncRing, u) -> Trunc:
    if isinstance(u, Poly):
        u = ring.from_poly(u)
    return ring.u_map(u)


def sqrt_count(group: SphereGroup, idx: int) -> int:
    """|{b in the circle : b^2 = u}| by literal enumeration."""
    target = group.basis.elements[idx]
    ring = group.ring
    return sum(1 for b in group.basis.elements if ring.mul(b, b) == target)


# ---------------------------------------------------------------------------
# Dirichlet characters modulo T^m.
# ---------------------------------------------------------------------------


class UnitGroupTm:
    """(F_q[T]/(T^m))^x with the scalar component explicit.

    The scalar part F_q^x is cyclic of order q-1; the 1-unit part is the
    p-group with basis {1 + beta T^i : i prime to p}.  Even characters are
    the ones with scalar exponent 0.
    """

    def __init__(self, m: int, q: int):
        if m < 2:
            raise ValueError("modulus exponent must be >= 2")
        field = field_of_order(q)
        self.field = field
        self.q = q
        self.m = m
        self.ring = TruncRing(field, m)
        self.scalar_gen = field.multiplicative_generator().key
        self._scalar_log = {field.pow_key(self.scalar_gen, i): i for i in range(q - 1)}
        gens = []
        self.gen_levels = []
        for i in range(1, m):
            if i % field.p == 0:
                continue
            for beta in _fp_basis(field):
                u = [field.one.key] + [0] * (m - 1)
                u[i] = beta
                gens.append(tuple(u))
                self.gen_levels.append(i)
        self.basis = _build_basis(self.ring, gens, q ** (m - 1))
        self._class_tab: np.ndarray | None = None
        self._char_cache: dict[tuple[int, ...], np.ndarray] = {}

    @property
    def unit_order(self) -> int:
        return (self.q - 1) * self.basis.order

    def scalar_log(self, c: int) -> int:
        return self._scalar_log[c]

    def one_unit_of(self, u: Trunc) -> tuple[int, Trunc]:
        """Split a unit as (scalar log, 1-unit): u = c * (u / c), c = u(0)."""
        if u[0] == 0:
            raise ZeroConstantTerm("not a unit modulo T^m")
        F = self.field
        inv0 = F.inv_key(u[0])
        return self._scalar_log[u[0]], tuple(F.mul_key(inv0, c) for c in u)

    def class_table(self) -> np.ndarray:
        """Packed residue -> index of its 1-unit part (scalars divided out)."""
        if self._class_tab is None:
            q, m = self.field.order, self.m
            tab = np.full(q**m, -1, dtype=np.int32)
            for key in range(q**m):
                if key % q == 0:
                    continue
                u = tuple((key // q**i) % q for i in range(m))
                _, one_unit = self.one_unit_of(u)
                tab[key] = self.basis.index[one_unit]
            self._class_tab = tab
        return self._class_tab

    def class_of_poly(self, f: Poly) -> int:
        """1-unit class index of f mod T^m, or -1 when T divides f."""
        if f.constant_term() == 0:
            return -1
        u = self.ring.from_poly(f)
        return int(self.class_table()[self.ring.packed(u)])

    def character_values(self, exponents: tuple[int, ...]) -> np.ndarray:
        key = tuple(exponents)
        if key not in self._char_cache:
            orders = np.array(self.basis.orders, dtype=float)
            mat = np.array(self.basis.dlog_vectors, dtype=float)
            phase = (mat * (np.array(exponents) / orders)).sum(axis=1)
            self._char_cache[key] = np.exp(TWO_PI_I * phase)
        return self._char_cache[key]


@lru_cache(maxsize=None)
def dirichlet_group(m: int, q: int) -> UnitGroupTm:
    return UnitGroupTm(m, q)


@dataclass(frozen=True)
class DirichletCharTm:
    """Dirichlet character mod T^m: scalar exponent plus 1-unit exponents."""

    group: UnitGroupTm
    scalar_exponent: int
    exponents: tuple[int, ...]

    def is_trivial(self) -> bool:
        return self.scalar_exponent == 0 and all(x == 0 for x in self.exponents)

    @property
    def even(self) -> bool:
        return self.scalar_exponent == 0

    def conjugate(self) -> "DirichletCharTm":
        g = self.group
        return DirichletCharTm(
            g,
            (-self.scalar_exponent) % (g.q - 1),
            tuple((-x) % d for x, d in zip(self.exponents, g.basis.orders)),
        )

    def value_at_class(self, idx: int) -> complex:
        # even-character value: depends only on the 1-unit class
        return complex(self.group.character_values(self.exponents)[idx])

    def __call__(self, f: Poly) -> complex:
        g = self.group
        if f.constant_term() == 0:
            return 0.0
        scalar_log, one_unit = g.one_unit_of(g.ring.from_poly(f))
        val = complex(g.character_values(self.exponents)[g.basis.index[one_unit]])
        if self.scalar_exponent:
            val *= complex(
                np.exp(TWO_PI_I * self.scalar_exponent * scalar_log / (g.q - 1))
            )
        return val

    def conductor_exponent(self) -> int:
        """Smallest f with the character trivial on 1 + (T^f); 0 for trivial."""
        g = self.group
        if self.is_trivial():
            return 0
        if self.scalar_exponent:
            low = 1  # nontrivial on scalars: conductor at least T^1
        else:
            low = 0
        vals = g.character_values(self.exponents)
        ring = g.ring
        deepest = low
        for j in range(1, g.m):
            nontrivial = False
            for beta in range(1, g.field.order):
                u = [g.field.one.key] + [0] * (g.m - 1)
                u[j] = beta
                if abs(vals[g.basis.index[ring.u_map(tuple(u)) if False else tuple(u)]] - 1.0) > 1e-12:
                    nontrivial = True
                    break
            if nontrivial:
                deepest = j + 1
        return max(deepest, 1 if not self.is_trivial() else 0)

    def is_primitive(self) -> bool:
        return self.conductor_exponent() == self.group.m

    def label(self) -> str:
        return f"chi_{self.scalar_exponent}" + "".join(f"_{x}" for x in self.exponents)


def enumerate_even(m: int, q: int) -> Iterator[DirichletCharTm]:
    """All q^{m-1} even characters mod T^m, trivial one first."""
    g = dirichlet_group(m, q)
    for vec in itertools.product(*[range(d) for d in g.basis.orders]):
        yieldDirichlet = DirichletCharTm(g, 0, vec)
        yield yieldDirichlet


def eval_supereven(chi: SuperEvenChar, f: Poly) -> complex:
    if f.constant_term() == 0:
        raise ZeroConstantTerm("super-even characters need f(0) != 0")
    return chi(f)


def eval_dirichlet(chi: DirichletCharTm, f: Poly) -> complex:
    return chi(f)
