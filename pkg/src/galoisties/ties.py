"""
Suborders of Λ cut out by derivations, and their description by ties.

For an element x of Γ the inner derivation is D_x(y) = yx - xy. Given
elements x_1, ..., x_k with heights h and lengths l, the set of f in Λ with

    D_{x_1}^{i_1} ∘ ... ∘ D_{x_k}^{i_k}(f) ∈ I^(i_1 l_1 + ... + i_k l_k)

for all i_j in [0, h_j] is a subring of Λ, I being ẗΛ. For a cyclic tower
of degree p the order Λ^D = Λ((ṫ), (p-1), (1+b)) contains the image Ξ of
T≀C_p, and equality holds by a colength count. Λ^D is described by ties,
valuation bounds on alternating binomial sums of ε-coordinates.
"""
import dataclasses
import itertools
import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, \
    Tuple

import numpy as np
import sympy

from galoisties.errors import DomainError, PreconditionError, UsageError
from galoisties.exact import binomial, integral_preimage, zeros
from galoisties.logging import get_logger
from galoisties.report import Check, check, equality_check
from galoisties.wedder import colength, eps, eps_basis, eps_coordinates, \
    flatten, gamma_basis, ideal_exponents, ideal_membership, in_lambda, \
    lambda_basis, over, same_lattice, under, unflatten, wedderburn_image, \
    xi_generators

logger = get_logger(__name__)


# -- derivations ------------------------------------------------------------------

def _powers(x: np.ndarray, n: int) -> List[np.ndarray]:
    out = [None] * (n + 1)
    out[0] = np.identity(x.shape[0], dtype=object)
    if n >= 1:
        out[1] = x
    for k in range(2, n + 1):
        out[k] = out[k - 1] @ x
    return out


def derivation_apply(x: np.ndarray, f: np.ndarray, i: int = 1) -> np.ndarray:
    """D_x^i(f) by the binomial expansion sum (-1)^h C(i,h) x^h f x^(i-h)."""
    if i < 0:
        raise UsageError(f'derivation power must be non-negative, got {i}')
    if i == 0:
        return f
    pw = _powers(x, i)
    out = f @ pw[i]
    for h in range(1, i + 1):
        out = out + (pw[h] @ f @ pw[i - h]) * ((-1) ** h * binomial(i, h))
    return out


def iterated_commutator(x: np.ndarray, f: np.ndarray, i: int = 1
                        ) -> np.ndarray:
    for _ in range(i):
        f = f @ x - x @ f
    return f


@dataclasses.dataclass(eq=False)
class DerivationSpec:
    """Elements x_j with heights h_j and lengths l_j, w.r.t. the ideal ẗΛ."""
    elements: Sequence[np.ndarray]
    heights: Sequence[int]
    lengths: Sequence[int]

    # an extra power of the ideal, describing ẗ^shift times the order
    shift: int = 0

    def __post_init__(self):
        if not len(self.elements) == len(self.heights) == len(self.lengths):
            raise UsageError('elements, heights and lengths differ in number')
        if any(h < 0 for h in self.heights):
            raise UsageError(f'heights must be non-negative: {self.heights}')

    def exponents(self) -> Iterable[Tuple[int, ...]]:
        return itertools.product(*(range(h + 1) for h in self.heights))

    def target_power(self, exponents: Sequence[int]) -> int:
        return sum(i * l for i, l in zip(exponents, self.lengths)) + \
            self.shift


def derivation_images(spec: DerivationSpec, f: np.ndarray
                      ) -> Dict[Tuple[int, ...], np.ndarray]:
    """
    All D_{x_1}^{i_1} ∘ ... ∘ D_{x_k}^{i_k}(f) within the heights.

    Each image is obtained from a smaller one by a single commutator; the
    elements are assumed to commute pairwise when there are several.
    """
    images = {}
    for exps in spec.exponents():
        r = next((k for k, e in enumerate(exps) if e), None)
        if r is None:
            images[exps] = f
            continue
        prev = exps[:r] + (exps[r] - 1,) + exps[r + 1:]
        x = spec.elements[r]
        images[exps] = images[prev] @ x - x @ images[prev]
    return images


def in_derivation_ring(spec: DerivationSpec, f: np.ndarray, tower) -> bool:
    """
    Whether f satisfies every derivation condition of the given DerivationSpec.

    :raise DomainError: when f is not in Λ.
    """
    if not in_lambda(f, tower):
        raise DomainError('element is not in Λ')
    return all(ideal_membership(image, spec.target_power(exps), tower)
               for exps, image in derivation_images(spec, f).items())


def condition_lattice(conditions: Callable[[np.ndarray],
                                           Iterable[Tuple[np.ndarray, int]]],
                      tower) -> Tuple[np.ndarray, int]:
    """
    The lattice of f in Λ with every image in the paired power of ẗΛ.

    :param conditions: maps f to pairs (image, k) requiring image ∈ ẗ^k Λ;
      each image must depend S-linearly on f.
    :return: an S-basis as flattened rows and the colength in Λ.
    """
    g, ring = tower.g, tower.ring
    basis = lambda_basis(tower)
    scales: Dict[int, np.ndarray] = {}
    functionals = []
    for row in basis:
        column = []
        for image, k in conditions(unflatten(row, g)):
            if k not in scales:
                scales[k] = np.array(
                    [ring.power(-c) for c in
                     ideal_exponents(k, tower).reshape(-1)], dtype=object)
            column.append(flatten(image) * scales[k])
        functionals.append(np.concatenate(column))
    coords, length = integral_preimage(np.vstack(functionals), ring)
    logger.debug(f'condition lattice: {len(functionals[0])} functionals, '
                 f'colength {length}')
    return coords @ basis, length


def derivation_lattice(spec: DerivationSpec, tower
                       ) -> Tuple[np.ndarray, int]:
    """An S-basis of the derivation-defined order and its colength in Λ."""

    def conditions(f):
        for exps, image in derivation_images(spec, f).items():
            yield image, spec.target_power(exps)

    return condition_lattice(conditions, tower)


# -- ties ---------------------------------------------------------------------------

def tie_bound(b: int, j: int, l: int, gamma: int, p: int) -> int:
    return 1 + under(b * l - j - 1 + gamma, p)


@dataclasses.dataclass(frozen=True)
class TieCondition:
    """val_s(sum over h in [0,l] of (-1)^h C(l,h) a_{over(i+h), j}) >= bound."""
    i: int
    j: int
    l: int
    bound: int
    p: int

    def terms(self) -> List[Tuple[int, int]]:
        """Pairs (row, coefficient) of the alternating sum."""
        return [(over(self.i + h, self.p), (-1) ** h * binomial(self.l, h))
                for h in range(self.l + 1)]

    def value(self, a: np.ndarray):
        out = 0
        for row, c in self.terms():
            out = a[row, self.j] * c + out
        return out

    def holds(self, a: np.ndarray, ring) -> bool:
        x = self.value(a)
        return not x or ring.val(x) >= self.bound

    def __str__(self):
        parts = []
        for row, c in self.terms():
            sign = '-' if c < 0 else '+'
            mag = '' if abs(c) == 1 else f'{abs(c)}'
            parts.append((sign, f'{mag}a_{{{row},{self.j}}}'))
        text = ('-' if parts[0][0] == '-' else '') + parts[0][1]
        for sign, term in parts[1:]:
            text += f' {sign} {term}'
        return f'val_s({text}) >= {self.bound}'


@dataclasses.dataclass(frozen=True)
class TieSystem:
    p: int
    b: int
    gamma: int
    conditions: Tuple[TieCondition, ...]

    def nontrivial(self) -> List[TieCondition]:
        return [c for c in self.conditions if c.bound > 0]

    def violations(self, f: np.ndarray, tower) -> List[str]:
        a = eps_coordinates(f, tower)
        ring = tower.ring
        out = [f'a_{{{i},{j}}} is not integral'
               for i in range(tower.g) for j in range(tower.g)
               if a[i, j] and ring.val(a[i, j]) < 0]
        out += [str(c) for c in self.conditions if not c.holds(a, ring)]
        return out

    def satisfied_by(self, f: np.ndarray, tower) -> bool:
        return not self.violations(f, tower)

    def functionals(self, tower) -> np.ndarray:
        """One column per condition, on ε-coordinates scaled by s^-bound."""
        ring, g = tower.ring, tower.g
        out = np.full((g * g, len(self.conditions)), ring.zero, dtype=object)
        for q, c in enumerate(self.conditions):
            scale = ring.power(-c.bound)
            for row, coef in c.terms():
                out[row * g + c.j, q] = out[row * g + c.j, q] + \
                    ring.element(coef) * scale
        return out

    def lattice(self, tower) -> Tuple[np.ndarray, int]:
        """The solution set as flattened rows, and its colength in Λ."""
        coords, length = integral_preimage(self.functionals(tower),
                                           tower.ring)
        return coords @ eps_basis(tower), length

    def describe(self) -> List[str]:
        return [str(c) for c in self.nontrivial()]


def tie_system(p: int, b: int, gamma: int = 0,
               rows: Optional[Sequence[int]] = (0,)) -> TieSystem:
    """
    Ties describing ẗ^gamma Λ^D.

    :param rows: the values of i in the conditions; a single row suffices
      under the hypotheses of :func:`check_tie_hypothesis`, and ``None``
      takes the full family over i in [0, p-1].
    """
    rows = range(p) if rows is None else rows
    conditions = tuple(
        TieCondition(i=i, j=j, l=l, bound=tie_bound(b, j, l, gamma, p), p=p)
        for i in rows for j in range(p) for l in range(p))
    return TieSystem(p=p, b=b, gamma=gamma, conditions=conditions)


@dataclasses.dataclass(eq=False)
class MuBasis:
    gamma: int

    # μ_{l,j} keyed by (l, j)
    elements: Dict[Tuple[int, int], np.ndarray]

    def rows(self) -> np.ndarray:
        return np.vstack([flatten(self.elements[k])
                          for k in sorted(self.elements)])


def mu_element(l: int, j: int, tower, gamma: int = 0, m: int = 0
               ) -> np.ndarray:
    """s^bound · sum over i of C(i,l) ε_{over(i+m), j}."""
    p, ring = tower.p, tower.ring
    out = zeros(tower.g, tower.g, ring)
    for i in range(p):
        c = binomial(i, l)
        if c:
            out = out + eps(over(i + m, p), j, tower) * ring.element(c)
    return out * ring.power(tie_bound(tower.b, j, l, gamma, p))


def check_tie_hypothesis(tower, gamma: int = 0):
    """
    :raise PreconditionError: naming the failed hypothesis of the tie
      description: g = p, b >= 1 and val_s(p) >= b - under(b - gamma).
    """
    if tower.g != tower.p:
        raise PreconditionError(f'g = p fails: g = {tower.g}, p = {tower.p}')
    if tower.b < 1:
        raise PreconditionError(f'b >= 1 fails: b = {tower.b}')
    if gamma < 0:
        raise UsageError(f'shift must be non-negative, got {gamma}')
    val_p = tower.ring.val(tower.ring.element(tower.p))
    need = tower.b - under(tower.b - gamma, tower.p)
    if val_p < need:
        raise PreconditionError(
            f'val_s(p) >= b - under(b - gamma) fails: {val_p} < {need}')


def lambda_D(tower, gamma: int = 0) -> Tuple[TieSystem, MuBasis]:
    """Ties and μ-basis of ṫ^gamma Λ^D."""
    check_tie_hypothesis(tower, gamma)
    system = tie_system(tower.p, tower.b, gamma)
    elements = {(l, j): mu_element(l, j, tower, gamma)
                for l in range(tower.p) for j in range(tower.p)}
    return system, MuBasis(gamma=gamma, elements=elements)


def lambda_D_spec(tower, gamma: int = 0, via: str = 't') -> DerivationSpec:
    """Λ((x), (p-1), (1+b)) shifted by gamma, for x = ṫ or x = ẗ."""
    if via not in ('t', 'ddot_t'):
        raise UsageError(f'unknown derivation element {via!r}')
    return DerivationSpec(elements=(wedderburn_image(via, tower),),
                          heights=(tower.g - 1,), lengths=(1 + tower.b,),
                          shift=gamma)


def tie_colength(p: int, b: int, gamma: int = 0) -> int:
    return b * p * (p - 1) // 2 + gamma * p


# -- verification ---------------------------------------------------------------

def verify_ft16(tower) -> List[Check]:
    """
    Certify that the Wedderburn embedding maps T≀C_p onto Λ^D.

    Ξ lies in Λ^D once ṫ and σ̇ satisfy the ties; equality follows since
    both have colength p·val_s(Δ)/2 = (1+b)p(p-1)/2 in Γ.
    """
    check_tie_hypothesis(tower)
    p, b = tower.p, tower.b
    system, mu = lambda_D(tower)
    lam_d = mu.rows()
    checks = []

    generators = ['t'] + (['sigma'] if tower.sigma_dot is not None else [])
    for name in generators:
        bad = system.violations(wedderburn_image(name, tower), tower)
        checks.append(check(
            f'ties hold for {name}', not bad, expected='no violated tie',
            actual='all ties hold' if not bad else f'{len(bad)} violated',
            detail='; '.join(bad)))

    solutions, _ = system.lattice(tower)
    checks.append(equality_check('mu-basis spans the tie solutions',
                                 same_lattice(lam_d, solutions, tower), True))

    in_lambda_ = colength(lam_d, lambda_basis(tower), tower)
    checks.append(equality_check('colength of Lambda^D in Lambda',
                                 in_lambda_, tie_colength(p, b)))
    in_gamma = colength(lam_d, gamma_basis(tower), tower)
    checks.append(equality_check('colength of Lambda^D in Gamma',
                                 in_gamma, (1 + b) * p * (p - 1) // 2))
    disc = tower.ramification.discriminant_valuation
    checks.append(equality_check('colength of Xi in Gamma by discriminant',
                                 p * disc // 2, in_gamma,
                                 detail=f'val_s(disc) = {disc}'))

    derived, _ = derivation_lattice(lambda_D_spec(tower), tower)
    checks.append(equality_check('derivation lattice equals tie lattice',
                                 same_lattice(derived, lam_d, tower), True))

    if tower.sigma_dot is not None:
        xi = xi_generators(tower)
        checks.append(equality_check('colength of Xi in Gamma, direct',
                                     colength(xi, gamma_basis(tower), tower),
                                     p * disc // 2))
        checks.append(equality_check('Xi equals Lambda^D',
                                     same_lattice(xi, lam_d, tower), True))
    logger.info(f'{tower}: Lambda^D verification done')
    return checks


def tie_isomorphism_check(tower1, tower2) -> bool:
    """
    Whether the tie systems of two towers coincide, certifying that the
    twisted group rings are isomorphic over S.

    :raise PreconditionError: when the discriminants differ or exceed
      p·val_s(p) + p - 1.
    """
    if tower1.p != tower2.p or tower1.ring_degree != tower2.ring_degree:
        raise UsageError('towers over different base rings')
    d1 = tower1.ramification.discriminant_valuation
    d2 = tower2.ramification.discriminant_valuation
    if d1 != d2:
        raise PreconditionError(
            f'val_s of the discriminants differ: {d1} != {d2}')
    p = tower1.p
    limit = p * tower1.ring.val(tower1.ring.element(p)) + p - 1
    if d1 > limit:
        raise PreconditionError(
            f'val_s(disc) <= p·val_s(p) + p - 1 fails: {d1} > {limit}')
    system1, _ = lambda_D(tower1)
    system2, _ = lambda_D(tower2)
    return system1.conditions == system2.conditions


def _polynomial_discriminant(tower) -> Fraction:
    x = sympy.Symbol('X')
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                       for c in reversed([Fraction(c) for c in tower.mu_t])],
                      x)
    d = sympy.Rational(sympy.discriminant(poly))
    return Fraction(int(d.p), int(d.q))


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    return all(math.isqrt(n) ** 2 == n for n in (x.numerator, x.denominator))


def fraction_field_witness(tower1, tower2) -> Optional[Fraction]:
    """
    The ratio of the discriminants of the minimal polynomials over Q when
    it is not a square, which proves the fraction fields non-isomorphic;
    None when this test is inconclusive.
    """
    if tower1.ring_degree != 1 or tower2.ring_degree != 1:
        raise UsageError('discriminant witness needs towers over Z_(p)')
    ratio = _polynomial_discriminant(tower1) / \
        _polynomial_discriminant(tower2)
    return None if _is_rational_square(ratio) else ratio
