"""
Cyclotomic fields, Eisenstein base rings and the extension towers S ⊂ T.

Every tower lives inside one ambient field Q(ζ) with ζ a primitive p^n-th
root of unity. Elements are :class:`FieldElement` instances: integer
coefficient vectors over the power basis of a monic integer modulus with a
common denominator. The base field K of a tower is realized as Q[X]/(μ_s)
for the Eisenstein minimal polynomial μ_s of its uniformizer s, so
s-adic valuations are read off coefficients directly.
"""
import dataclasses
import functools
import math
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from galoisties.errors import DomainError, InternalConsistencyError, \
    PreconditionError, UsageError
from galoisties.exact import PLUS_INFINITY, DiscreteValuationRing, \
    RationalDVR, Valuation, binomial, check_odd_prime, check_prime, \
    identity, smith_form, val_p, zeros
from galoisties.logging import get_logger

logger = get_logger(__name__)

_X = sympy.Symbol('X')

TOWER_KINDS = ('pi', 'theta', 'polynomial')


class NumberField:
    """Q[X]/(modulus) for a monic integer modulus, coefficients low to high."""

    def __init__(self, modulus: Sequence[int], name: str = 'K'):
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise UsageError(f'modulus {modulus} is not monic of degree >= 1')
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.name = name
        # X^degree == sum of c * X^i over this list
        self._tail = [(i, -c) for i, c in enumerate(modulus[:-1]) if c]

    def __eq__(self, other):
        return isinstance(other, NumberField) and \
            other.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f'NumberField({self.name}, degree={self.degree})'

    def element(self, x) -> 'FieldElement':
        if isinstance(x, FieldElement):
            if x.field != self:
                raise UsageError(f'{x} does not belong to {self}')
            return x
        if isinstance(x, (int, np.integer)):
            return FieldElement(self, (int(x),) + (0,) * (self.degree - 1))
        x = Fraction(x)
        return FieldElement(self, (x.numerator,) + (0,) * (self.degree - 1),
                            x.denominator)

    def from_fractions(self, coeffs: Sequence[Any]) -> 'FieldElement':
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return self.reduce_fractions(coeffs)
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        den = math.lcm(*(c.denominator for c in coeffs))
        return FieldElement(self, tuple(int(c * den) for c in coeffs), den)

    def reduce_fractions(self, coeffs: Sequence[Any]) -> 'FieldElement':
        """Element of a polynomial of any degree in the generator."""
        coeffs = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        return FieldElement(self, self._reduce([int(c * den) for c in coeffs]),
                            den)

    @property
    def gen(self) -> 'FieldElement':
        if self.degree == 1:
            return self.element(-self.modulus[0])
        return FieldElement(self, (0, 1) + (0,) * (self.degree - 2))

    @property
    def zero(self) -> 'FieldElement':
        return self.element(0)

    @property
    def one(self) -> 'FieldElement':
        return self.element(1)

    def _reduce(self, coeffs: List[int]) -> Tuple[int, ...]:
        d = self.degree
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if c:
                for i, m in self._tail:
                    coeffs[k - d + i] += c * m
        coeffs = coeffs[:d]
        return tuple(coeffs) + (0,) * (d - len(coeffs))

    def _multiply(self, a: Tuple[int, ...], b: Tuple[int, ...]
                  ) -> Tuple[int, ...]:
        out = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self._reduce(out)


class FieldElement:
    __slots__ = ('field', 'coeffs', 'den')

    def __init__(self, field: NumberField, coeffs: Tuple[int, ...],
                 den: int = 1):
        if den < 0:
            coeffs, den = tuple(-c for c in coeffs), -den
        g = math.gcd(den, *coeffs)
        if g > 1:
            coeffs, den = tuple(c // g for c in coeffs), den // g
        self.field = field
        self.coeffs = coeffs
        self.den = den

    def _coerce(self, other) -> Optional['FieldElement']:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise UsageError('elements of different fields')
            return other
        if isinstance(other, (int, np.integer, Fraction)):
            return self.field.element(other)
        return None

    def fractions(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs and self.den == other.den

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.coeffs[0], self.den))
        return hash((self.coeffs, self.den))

    def __repr__(self):
        terms = [f'{c}*X^{i}' for i, c in enumerate(self.coeffs) if c]
        body = ' + '.join(terms) if terms else '0'
        return f'({body})/{self.den}' if self.den != 1 else f'({body})'

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.coeffs),
                            self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.den, other.den
        return FieldElement(
            self.field,
            tuple(x * b + y * a for x, y in zip(self.coeffs, other.coeffs)),
            a * b)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            c = other.coeffs[0]
            return FieldElement(self.field, tuple(x * c for x in self.coeffs),
                                self.den * other.den)
        return FieldElement(self.field,
                            self.field._multiply(self.coeffs, other.coeffs),
                            self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> 'FieldElement':
        if not self:
            raise ZeroDivisionError('inverse of zero')
        if self.is_rational():
            return self.field.element(Fraction(self.den, self.coeffs[0]))
        poly = sympy.Poly(list(reversed(self.coeffs)), _X, domain=sympy.QQ)
        modulus = sympy.Poly(list(reversed(self.field.modulus)), _X,
                             domain=sympy.QQ)
        inv = poly.invert(modulus)
        coeffs = [Fraction(int(c.p), int(c.q)) * self.den
                  for c in reversed(inv.all_coeffs())]
        return self.field.from_fractions(coeffs)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def cyclotomic_modulus(m: int) -> Tuple[int, ...]:
    poly = sympy.Poly(sympy.cyclotomic_poly(m, _X), _X)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def polynomial_coefficients(expr, symbol=_X) -> Tuple[int, ...]:
    poly = sympy.Poly(expr, symbol)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@dataclasses.dataclass(frozen=True)
class EisensteinDVR(DiscreteValuationRing):
    """
    The valuation ring of K = Q[X]/(μ) for an Eisenstein polynomial μ at p.

    The class of X is the uniformizer, so the valuation of sum c_i X^i is
    the minimum of d * val_p(c_i) + i.
    """
    field: NumberField
    p: int

    def __post_init__(self):
        check_prime(self.p)
        *lower, _ = self.field.modulus
        if any(val_p(c, self.p) < 1 for c in lower) or \
                val_p(lower[0], self.p) != 1:
            raise PreconditionError(
                f'{self.field.modulus} is not Eisenstein at {self.p}')

    def val(self, x) -> Valuation:
        x = self.field.element(x)
        if not x:
            return PLUS_INFINITY
        d = self.field.degree
        return min(d * val_p(c, self.p) + i
                   for i, c in enumerate(x.coeffs) if c) - \
            d * val_p(x.den, self.p)

    def element(self, x):
        return self.field.element(x)

    @property
    def uniformizer(self):
        return self.field.gen

    def __str__(self):
        return f'{self.field.name}-integers at {self.p}'


@dataclasses.dataclass(frozen=True)
class Automorphism:
    """ζ -> ζ^exponent on an ambient cyclotomic field."""
    field: 'AmbientField'
    exponent: int

    def __call__(self, x: FieldElement) -> FieldElement:
        return self.field.apply(x, self.exponent)

    def power(self, k: int) -> 'Automorphism':
        return Automorphism(self.field,
                            pow(self.exponent, k, self.field.order))

    def then(self, other: 'Automorphism') -> 'Automorphism':
        return Automorphism(self.field,
                            self.exponent * other.exponent % self.field.order)

    @property
    def order(self) -> int:
        return sympy.n_order(self.exponent, self.field.order)


class AmbientField(NumberField):
    """Q(ζ) for a primitive p^n-th root of unity ζ."""

    def __init__(self, p: int, n: int):
        self.p = check_odd_prime(p)
        if n < 1:
            raise UsageError(f'level n must be at least 1, got {n}')
        self.n = n
        self.order = p ** n
        super().__init__(cyclotomic_modulus(self.order), f'Q(zeta_{p}^{n})')

    @functools.cached_property
    def _zeta_powers(self) -> List[Tuple[int, ...]]:
        d = self.degree
        table = [(1,) + (0,) * (d - 1)]
        for _ in range(1, self.order):
            prev = list(table[-1])
            top = prev[-1]
            shifted = [0] + prev[:-1]
            if top:
                for i, c in self._tail:
                    shifted[i] += top * c
            table.append(tuple(shifted))
        return table

    @functools.cached_property
    def _theta_change(self) -> List[List[int]]:
        # coefficient of θ^i in ζ^k is C(k, i), with θ = ζ - 1
        d = self.degree
        return [[binomial(k, i) for k in range(d)] for i in range(d)]

    def zeta(self, k: int = 1) -> FieldElement:
        return FieldElement(self, self._zeta_powers[k % self.order])

    def theta(self, level: Optional[int] = None) -> FieldElement:
        """ζ_{p^level} - 1 with ζ_{p^level} = ζ^(p^(n - level))."""
        level = self.n if level is None else level
        return self.zeta(self.p ** (self.n - level)) - 1

    def apply(self, x: FieldElement, exponent: int) -> FieldElement:
        x = self.element(x)
        out = [0] * self.degree
        for k, c in enumerate(x.coeffs):
            if c:
                for i, z in enumerate(self._zeta_powers[k * exponent %
                                                        self.order]):
                    if z:
                        out[i] += c * z
        return FieldElement(self, tuple(out), x.den)

    def automorphism(self, exponent: int) -> Automorphism:
        if math.gcd(exponent, self.p) != 1:
            raise UsageError(f'{exponent} is not a unit mod {self.order}')
        return Automorphism(self, exponent % self.order)

    def val_theta(self, x: FieldElement) -> Valuation:
        """Valuation at θ = ζ - 1, normalized by val(θ) = 1."""
        x = self.element(x)
        if not x:
            return PLUS_INFINITY
        d = self.degree
        best = None
        for i, row in enumerate(self._theta_change):
            c = sum(b * a for a, b in zip(x.coeffs, row) if a and b)
            if c:
                v = d * val_p(c, self.p) + i
                best = v if best is None else min(best, v)
        return best - d * val_p(x.den, self.p)

    def val_subfield(self, x: FieldElement, subfield_degree: int
                     ) -> Valuation:
        """Valuation normalized to the uniformizer of a subfield of given degree."""
        v = self.val_theta(x)
        e = self.degree // subfield_degree
        if v is PLUS_INFINITY:
            return v
        if v % e:
            raise DomainError(
                f'element of θ-valuation {v} is not in a subfield of '
                f'ramification {e}')
        return v // e


class QBasis:
    """
    Coordinates over Q with respect to linearly independent field elements.

    Built by Gaussian elimination with the first nonzero column as pivot,
    so repeated runs give identical output.
    """

    def __init__(self, elements: Sequence[FieldElement] = ()):
        self.elements: List[FieldElement] = []
        self._echelon: List[Tuple[int, List[Fraction]]] = []
        for e in elements:
            if self.try_add(e) is not None:
                raise DomainError('basis elements are linearly dependent')

    @property
    def size(self) -> int:
        return len(self.elements)

    def _reduce(self, x: FieldElement, width: int) -> List[Fraction]:
        row = list(x.fractions()) + [Fraction(0)] * width
        for col, pivot_row in self._echelon:
            f = row[col]
            if f:
                for k in range(len(pivot_row)):
                    if pivot_row[k]:
                        row[k] -= f * pivot_row[k]
        return row

    def try_add(self, x: FieldElement) -> Optional[List[Fraction]]:
        """
        Add an element, or return its coordinates if it is already spanned.
        """
        d = x.field.degree
        n = self.size
        row = self._reduce(x, n + 1)
        for col in range(d):
            if row[col]:
                break
        else:
            return [-c for c in row[d:d + n]]
        row[d + n] = Fraction(1)
        pivot = row[col]
        row = [c / pivot for c in row]
        # widen the transforms already stored
        self._echelon = [(c, r + [Fraction(0)]) for c, r in self._echelon]
        self._echelon.append((col, row))
        self.elements.append(x)
        return None

    def coordinates(self, x: FieldElement) -> List[Fraction]:
        d = x.field.degree
        row = self._reduce(x, self.size)
        if any(row[:d]):
            raise DomainError('element outside the span of the basis')
        return [-c for c in row[d:]]


def make_pi(p: int, n: int, ambient: Optional[AmbientField] = None
            ) -> FieldElement:
    """
    π_n = prod over j in [1, p-1] of (ζ_{p^n}^(j^(p^(n-1))) - 1).

    It generates the degree p^(n-1) subfield and π_1 = p.
    """
    p = check_odd_prime(p)
    if n < 1:
        raise UsageError(f'level n must be at least 1, got {n}')
    ambient = ambient or AmbientField(p, n)
    if ambient.p != p or ambient.n < n:
        raise UsageError(f'{ambient} does not contain ζ_{{{p}^{n}}}')
    step = p ** (ambient.n - n)
    result = ambient.one
    for j in range(1, p):
        e = pow(j, p ** (n - 1), p ** n)
        result = result * (ambient.zeta(e * step) - 1)
    return result


@dataclasses.dataclass(frozen=True)
class Subfield:
    """A subfield Q(y) of an ambient field, modelled as Q[X]/(μ_y)."""
    generator: FieldElement
    field: NumberField

    @property
    def degree(self) -> int:
        return self.field.degree


def minimal_polynomial(x: FieldElement, base: Optional[Subfield] = None
                       ) -> List[Any]:
    """
    Monic minimal polynomial of x over Q or over a subfield, low to high.

    Found as the first linear dependency among the powers of x, expressed
    in the Q-basis (y^a x^k) of K[x] for the base K = Q(y).
    """
    if base is not None and not isinstance(base, Subfield):
        raise UsageError(f'unrecognized base {base!r}')
    ys = [x.field.one] if base is None else \
        [base.generator ** a for a in range(base.degree)]
    span = QBasis()
    power = x.field.one
    m = 0
    while True:
        coords = span.try_add(power)
        if coords is not None:
            break
        for y in ys[1:]:
            if span.try_add(y * power) is not None:
                raise InternalConsistencyError(
                    'powers of the element became dependent early')
        m += 1
        power = power * x
    # coordinates of y^a x^k sit at index k * len(ys) + a
    per_k = len(ys)
    coefficients = []
    for k in range(m):
        chunk = coords[k * per_k:(k + 1) * per_k]
        if base is None:
            coefficients.append(-chunk[0])
        else:
            coefficients.append(-base.field.from_fractions(chunk))
    one = Fraction(1) if base is None else base.field.one
    return coefficients + [one]


def subfield_of(generator: FieldElement, name: str) -> Subfield:
    coeffs = minimal_polynomial(generator)
    if any(c.denominator != 1 for c in coeffs):
        raise DomainError(f'{name} generator is not an algebraic integer')
    return Subfield(generator, NumberField([int(c) for c in coeffs], name))


# -- towers -------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class RamificationInvariants:
    # val_t of the different ideal of T over S
    different_valuation: int

    # val_s of the discriminant ideal of T over S
    discriminant_valuation: int


@dataclasses.dataclass(eq=False)
class ExtensionTower:
    """
    S ⊂ T = S[t] with T purely ramified of degree g over S.

    Matrices over K describe endomorphisms of T in the basis
    (t^0, ..., t^(g-1)), rows being inputs.
    """
    p: int
    n: int
    kind: str
    g: int

    # the valuation ring S inside K, with uniformizer s
    ring: DiscreteValuationRing

    # coefficients of μ_{t,K} low to high: -s, e_1, ..., e_{g-1}, 1
    mu_t: Tuple[Any, ...]

    # right multiplication by t
    t_dot: np.ndarray

    # the Galois generator acting on T, when a Galois action is known
    sigma_dot: Optional[np.ndarray]

    # ramification jump -1 + val_t(t^σ - t), or from the different
    b: int

    ambient: Optional[AmbientField] = None
    s_gen: Optional[FieldElement] = None
    t_gen: Optional[FieldElement] = None
    sigma: Optional[Automorphism] = None
    base: Optional[Subfield] = None
    _basis: Optional[QBasis] = None

    def __str__(self):
        return f'{self.kind}-tower(p={self.p}, n={self.n}, b={self.b})'

    @property
    def s(self):
        return self.ring.uniformizer

    @property
    def b_bar(self) -> int:
        return self.b % self.p

    @property
    def b_under(self) -> int:
        return self.b // self.p

    def e(self, j: int):
        """Coefficient e_j of X^j in μ_{t,K}, for j in [1, g-1]."""
        if not 1 <= j <= self.g - 1:
            raise UsageError(f'e_j is defined for j in [1, {self.g - 1}]')
        return self.mu_t[j]

    def coordinates(self, x: FieldElement) -> np.ndarray:
        """Coordinates over K of an ambient element of L in (t^0, ..., t^(g-1))."""
        if self._basis is None:
            raise UsageError(f'{self} has no ambient field')
        coords = self._basis.coordinates(x)
        d = self.ring_degree
        out = np.empty(self.g, dtype=object)
        for j in range(self.g):
            chunk = coords[j * d:(j + 1) * d]
            out[j] = self.ring.element(chunk[0]) if d == 1 else \
                self.base.field.from_fractions(chunk)
        return out

    @property
    def ring_degree(self) -> int:
        return 1 if self.base is None else self.base.degree

    @property
    def weights(self) -> Tuple[int, ...]:
        """t-valuations of the basis (t^0, ..., t^(g-1))."""
        return tuple(range(self.g))

    def val_t(self, coords: np.ndarray) -> Valuation:
        """val_t of sum a_j t^j, using that t is an Eisenstein root over S."""
        best = PLUS_INFINITY
        for j, a in enumerate(coords):
            if a:
                best = min(best, self.g * self.ring.val(a) + j)
        return best

    def multiplication_matrix(self, coords: Sequence[Any]) -> np.ndarray:
        """Right multiplication by sum a_j t^j."""
        out = zeros(self.g, self.g, self.ring)
        power = identity(self.g, self.ring)
        for a in coords:
            if a:
                out = out + power * self.ring.element(a)
            power = power @ self.t_dot
        return out

    def galois_matrix(self, aut: Automorphism) -> np.ndarray:
        """Rows: coordinates of (t^aut)^j."""
        image = aut(self.t_gen)
        rows, power = [], self.ambient.one
        for _ in range(self.g):
            rows.append(self.coordinates(power))
            power = power * image
        return np.vstack(rows)

    def different_element(self) -> np.ndarray:
        """Coordinates of μ'_{t,K}(t)."""
        coords = np.empty(self.g, dtype=object)
        for j in range(self.g):
            coords[j] = self.mu_t[j + 1] * (j + 1)
        return coords

    @functools.cached_property
    def ramification(self) -> RamificationInvariants:
        diff = self.val_t(self.different_element())
        # the norm of μ'(t) is the determinant of its multiplication matrix
        sf = smith_form(self.multiplication_matrix(self.different_element()),
                        self.ring)
        return RamificationInvariants(different_valuation=diff,
                                      discriminant_valuation=sum(
                                          sf.valuations))


def _ring_of(base: Optional[Subfield], p: int) -> DiscreteValuationRing:
    return RationalDVR(p) if base is None else EisensteinDVR(base.field, p)


def build_tower(p: int, n: int = 2, kind: str = 'pi') -> ExtensionTower:
    """
    The cyclotomic tower of level n.

    ``pi``: S = Z_(p)[π_{n-1}], T = S[π_n]. ``theta``: S = Z_(p)[ζ_{p^(n-1)}],
    T = S[ζ_{p^n}] with uniformizers θ_{n-1}, θ_n. In both cases σ is
    ζ -> ζ^(1 + p^(n-1)).
    """
    p = check_odd_prime(p)
    if kind not in ('pi', 'theta'):
        raise UsageError(f'unknown cyclotomic tower kind {kind!r}')
    if n < 2:
        raise UsageError(f'tower level n must be at least 2, got {n}')

    ambient = AmbientField(p, n)
    if kind == 'pi':
        s_gen, t_gen = make_pi(p, n - 1, ambient), make_pi(p, n, ambient)
    else:
        s_gen, t_gen = ambient.theta(n - 1), ambient.theta(n)

    base = None
    if not s_gen.is_rational():
        base = subfield_of(s_gen, f'Q({kind}_{n - 1})')
    ring = _ring_of(base, p)
    d = 1 if base is None else base.degree
    if d == 1 and s_gen != p:
        raise InternalConsistencyError(f'rational uniformizer {s_gen} != {p}')

    g = p
    basis = QBasis([s_gen ** m * t_gen ** j
                    for j in range(g) for m in range(d)])
    sigma = ambient.automorphism(1 + p ** (n - 1))

    tower = ExtensionTower(p=p, n=n, kind=kind, g=g, ring=ring, mu_t=(),
                           t_dot=identity(g, ring), sigma_dot=None, b=0,
                           ambient=ambient, s_gen=s_gen, t_gen=t_gen,
                           sigma=sigma, base=base, _basis=basis)

    top = tower.coordinates(t_gen ** g)
    if top[0] != ring.uniformizer:
        raise InternalConsistencyError(
            f'norm of t is not s: constant term {top[0]}')
    tower.mu_t = tuple(-c for c in top) + (ring.one,)

    rows = [np.array([ring.one if k == j + 1 else ring.zero
                      for k in range(g)], dtype=object)
            for j in range(g - 1)]
    rows.append(top)
    tower.t_dot = np.vstack(rows)
    tower.sigma_dot = tower.galois_matrix(sigma)

    tower.b = tower.val_t(tower.coordinates(sigma(t_gen) - t_gen)) - 1
    cross = ambient.val_subfield(sigma(t_gen) - t_gen, d * g) - 1
    if cross != tower.b:
        raise InternalConsistencyError(
            f'ramification jump disagrees: {tower.b} vs {cross}')
    logger.debug(f'built {tower}')
    return tower


def polynomial_tower(p: int, coefficients: Sequence[int]) -> ExtensionTower:
    """
    T = Z_(p)[X]/(μ) for a monic Eisenstein polynomial μ over Z_(p).

    No Galois action is constructed; b is read off the different, whose
    t-valuation is (p-1)(1+b) when the degree is p.
    """
    p = check_odd_prime(p)
    coefficients = tuple(int(c) for c in coefficients)
    g = len(coefficients) - 1
    if g != p or coefficients[-1] != 1:
        raise UsageError(f'expected a monic polynomial of degree {p}')
    if any(val_p(c, p) < 1 for c in coefficients[:-1]) or \
            val_p(coefficients[0], p) != 1:
        raise PreconditionError(f'{coefficients} is not Eisenstein at {p}')

    ring = RationalDVR(p, Fraction(-coefficients[0]))
    mu_t = tuple(Fraction(c) for c in coefficients)
    t_dot = zeros(g, g, ring)
    for j in range(g - 1):
        t_dot[j, j + 1] = ring.one
    for k in range(g):
        t_dot[g - 1, k] = -mu_t[k]

    tower = ExtensionTower(p=p, n=2, kind='polynomial', g=g, ring=ring,
                           mu_t=mu_t, t_dot=t_dot, sigma_dot=None, b=0)
    diff = tower.ramification.different_valuation
    if diff % (p - 1):
        raise PreconditionError(
            f'different exponent {diff} is not divisible by {p - 1}')
    tower.b = diff // (p - 1) - 1
    return tower


def galois_generator(tower: ExtensionTower) -> Automorphism:
    if tower.sigma is None:
        raise UsageError(f'{tower} carries no Galois action')
    return tower.sigma


def val_at(tower: ExtensionTower, x: FieldElement, level: str
           ) -> Valuation:
    """
    Valuation of an ambient element normalized at s, t or u.

    u denotes the ambient uniformizer θ_n = ζ - 1.
    """
    if tower.ambient is None:
        raise UsageError(f'{tower} has no ambient field')
    degrees = {
        's': tower.ring_degree,
        't': tower.ring_degree * tower.g,
        'u': tower.ambient.degree,
    }
    if level not in degrees:
        raise UsageError(f'unknown uniformizer level {level!r}')
    return tower.ambient.val_subfield(x, degrees[level])


def trace_norm(tower: ExtensionTower, x: FieldElement, what: str = 'trace',
               frm: str = 'L', to: str = 'K') -> FieldElement:
    """
    Relative trace or norm of an ambient element.

    Supported pairs are (L, K) through the conjugates under σ and (K, Q)
    and (L, Q) through the ambient automorphisms fixing the smaller field.
    """
    if what not in ('trace', 'norm'):
        raise UsageError(f'unknown map {what!r}')
    if tower.ambient is None:
        raise UsageError(f'{tower} has no ambient field')
    ambient = tower.ambient
    if (frm, to) == ('L', 'K'):
        conjugates = [tower.sigma.power(i) for i in range(tower.g)]
    elif (frm, to) in (('K', 'Q'), ('L', 'Q')):
        degree = tower.ring_degree * (tower.g if frm == 'L' else 1)
        conjugates = _coset_representatives(ambient, degree)
    else:
        raise UsageError(f'unrecognized pair {frm}|{to}')

    images = [c(x) for c in conjugates]
    if what == 'trace':
        return sum(images[1:], images[0])
    result = images[0]
    for image in images[1:]:
        result = result * image
    return result


def _coset_representatives(ambient: AmbientField, degree: int
                           ) -> List[Automorphism]:
    # the subfield of this degree is fixed by the unique subgroup of order
    # φ(p^n) / degree of the cyclic group (Z/p^n)^*
    m = ambient.order
    generator = sympy.primitive_root(m)
    return [ambient.automorphism(pow(generator, i, m))
            for i in range(degree)]


@dataclasses.dataclass(frozen=True)
class ParameterTable:
    p: int
    n: int
    kind: str
    b: int
    b_bar: int
    b_under: int
    val_s_p: int
    ramification: RamificationInvariants


def closed_form_parameters(p: int, n: int, uniformizer: str
                           ) -> Tuple[int, int, int, int]:
    """(b, b_bar, b_under, val_s(p)) as derived from the different exponents."""
    if uniformizer == 'theta':
        different = p ** (n - 1) * (p - 1)
        val_s_p = p ** (n - 2) * (p - 1)
    elif uniformizer == 'pi':
        different = p ** (n - 1) + p - 2
        val_s_p = p ** (n - 2)
    else:
        raise UsageError(f'unknown uniformizer {uniformizer!r}')
    b = different // (p - 1) - 1
    return b, b % p, b // p, val_s_p


def parameter_table(p: int, n: int, kind: str, uniformizer: str = 'pi'
                    ) -> ParameterTable:
    """
    Ramification parameters of the cyclotomic towers.

    :param kind: ``cyclotomic-pi`` and ``cyclotomic-theta`` construct the
      tower and compare with the closed forms; ``lubin-tate-formula``
      evaluates the closed forms only.
    :param uniformizer: for ``lubin-tate-formula``, which closed forms.
    """
    p = check_odd_prime(p)
    if n < 2:
        raise UsageError(f'tower level n must be at least 2, got {n}')
    if kind == 'lubin-tate-formula':
        b, b_bar, b_under, val_s_p = closed_form_parameters(p, n, uniformizer)
        inv = RamificationInvariants((p - 1) * (1 + b), (p - 1) * (1 + b))
        return ParameterTable(p, n, kind, b, b_bar, b_under, val_s_p, inv)

    kinds = {'cyclotomic-pi': 'pi', 'cyclotomic-theta': 'theta'}
    if kind not in kinds:
        raise UsageError(f'unknown tower kind {kind!r}')
    tower = build_tower(p, n, kinds[kind])
    b, b_bar, b_under, val_s_p = closed_form_parameters(p, n, kinds[kind])
    computed = (tower.b, tower.b_bar, tower.b_under,
                tower.ring.val(tower.ring.element(p)))
    if computed != (b, b_bar, b_under, val_s_p):
        raise InternalConsistencyError(
            f'{tower}: parameters {computed} differ from the closed forms '
            f'{(b, b_bar, b_under, val_s_p)}')
    return ParameterTable(p, n, kind, *computed, tower.ramification)


def cyclotomic_discriminant_valuation(p: int, n: int) -> int:
    """val_p of the discriminant of the p^n-th cyclotomic polynomial."""
    disc = sympy.discriminant(sympy.cyclotomic_poly(p ** n, _X), _X)
    return val_p(int(disc), p)
