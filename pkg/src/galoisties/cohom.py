"""
The 2-periodic resolution of T over Ξ and the Yoneda ring Ext*_Ξ(T, T).

With α: 1 -> s^(b - ub - 1) ε_{b̄, p-b̄} and β: 1 -> s^ub sum i ε_{i, b̄}
(ub, b̄ the Euclidean split of b by p), the complex

    ... --α--> Ξ --β--> Ξ --α--> Ξ --β--> Ξ  (degree 0)

resolves T through χ_0: 1 -> t^0. A Ξ-linear map Ξ -> Ξ is left
multiplication by the image x of 1, so "first x, then y" is the matrix
``y @ x``. Cochains Hom_Ξ(Ξ, T) = T are row vectors over the χ-basis
χ_k: 1 -> t^k, and a cochain v is sent by the coboundary to ``v @ d``.
"""
import dataclasses
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from galoisties.config import get_compute_conf
from galoisties.errors import InternalConsistencyError, UsageError
from galoisties.exact import Homology, ModuleDescription, \
    check_odd_prime, homology, identity, is_zero_matrix, left_kernel, \
    matrices_equal, zeros
from galoisties.logging import get_logger
from galoisties.report import Check, check, equality_check
from galoisties.ties import check_tie_hypothesis, lambda_D
from galoisties.wedder import colength, ddot_power, eps, flatten, \
    lambda_basis, over, same_lattice, under, unflatten

logger = get_logger(__name__)


@dataclasses.dataclass(eq=False)
class ResolutionMaps:
    p: int
    b: int
    alpha: np.ndarray
    beta: np.ndarray

    # χ_k as the row vector of t^k
    chi: Tuple[np.ndarray, ...]

    # colengths certifying exactness, keyed by a description
    exactness: Dict[str, int] = dataclasses.field(default_factory=dict)

    def differential(self, k: int) -> np.ndarray:
        """The element of d_k: P_k -> P_{k-1}, k >= 1."""
        if k < 1:
            raise UsageError(f'differentials start in degree 1, got {k}')
        return self.beta if k % 2 else self.alpha

    def coboundary(self, degree: int) -> np.ndarray:
        """δ from cochains of the given degree to the next one."""
        return self.differential(degree + 1)


def resolution_elements(tower) -> ResolutionMaps:
    """α, β and χ without the exactness certification."""
    check_tie_hypothesis(tower)
    p, b, ring = tower.p, tower.b, tower.ring
    b_bar, ub = tower.b_bar, tower.b_under
    alpha = eps(b_bar, p - b_bar, tower) * ring.power(b - ub - 1)
    beta = zeros(p, p, ring)
    for i in range(1, p):
        beta = beta + eps(i, b_bar, tower) * ring.element(i)
    beta = beta * ring.power(ub)
    chi = tuple(identity(p, ring)[k] for k in range(p))
    return ResolutionMaps(p=p, b=b, alpha=alpha, beta=beta, chi=chi)


def _kernel(element: np.ndarray, basis: np.ndarray, tower) -> np.ndarray:
    """The x in span(basis) with element @ x == 0, as flattened rows."""
    g = tower.g
    images = np.vstack([flatten(element @ unflatten(row, g))
                        for row in basis])
    return left_kernel(images, tower.ring) @ basis


def _images(element: np.ndarray, basis: np.ndarray, tower) -> np.ndarray:
    g = tower.g
    return np.vstack([flatten(element @ unflatten(row, g)) for row in basis])


def resolution_checks(tower, maps: ResolutionMaps) -> List[Check]:
    """
    αβ = βα = 0, and exactness at both positions by colengths inside the
    kernels A of α and B of β on Λ.
    """
    p, b = tower.p, tower.b
    _, mu = lambda_D(tower)
    xi = mu.rows()
    checks = [
        check('alpha then beta vanishes',
              is_zero_matrix(maps.beta @ maps.alpha), expected='0',
              actual='0' if is_zero_matrix(maps.beta @ maps.alpha)
              else 'nonzero'),
        check('beta then alpha vanishes',
              is_zero_matrix(maps.alpha @ maps.beta), expected='0',
              actual='0' if is_zero_matrix(maps.alpha @ maps.beta)
              else 'nonzero'),
    ]

    lam = lambda_basis(tower)
    kernel_b = _kernel(maps.beta, lam, tower)
    kernel_a = _kernel(maps.alpha, lam, tower)
    ker_beta = _kernel(maps.beta, xi, tower)
    ker_alpha = _kernel(maps.alpha, xi, tower)
    im_alpha = _images(maps.alpha, xi, tower)
    im_beta = _images(maps.beta, xi, tower)

    maps.exactness = {
        'ker beta in B': colength(ker_beta, kernel_b, tower),
        'im alpha in B': colength(im_alpha, kernel_b, tower),
        'ker alpha in A': colength(ker_alpha, kernel_a, tower),
        'im beta in A': colength(im_beta, kernel_a, tower),
    }
    expected = {
        'ker beta in B': b * (p - 1),
        'im alpha in B': b * (p - 1),
        'ker alpha in A': b * p * (p - 1) // 2,
        'im beta in A': b * p * (p - 1) // 2,
    }
    for name, length in maps.exactness.items():
        checks.append(equality_check(f'colength of {name}', length,
                                     expected[name]))
    # containment plus equal colength gives equality
    checks.append(equality_check('im alpha equals ker beta',
                                 same_lattice(im_alpha, ker_beta, tower),
                                 True))
    checks.append(equality_check('im beta equals ker alpha',
                                 same_lattice(im_beta, ker_alpha, tower),
                                 True))

    zero = zeros(1, p, tower.ring)[0]
    bad = [(l, j) for (l, j), m in mu.elements.items()
           if not matrices_equal(maps.chi[0] @ m,
                                 maps.chi[j] if l == 0 else zero)]
    checks.append(check('mu_{l,j} chi_0 = delta_{l,0} t^j', not bad,
                        expected='all (l, j)',
                        actual='all (l, j)' if not bad else f'fails at {bad}'))
    return checks


def build_resolution(tower) -> ResolutionMaps:
    """
    :raise PreconditionError: when the tie description of Ξ is unavailable.
    :raise InternalConsistencyError: when an identity or a colength fails.
    """
    maps = resolution_elements(tower)
    failed = [c.name for c in resolution_checks(tower, maps) if c.failed]
    if failed:
        raise InternalConsistencyError(
            f'{tower}: resolution identities fail: {", ".join(failed)}')
    logger.debug(f'{tower}: resolution exact, colengths {maps.exactness}')
    return maps


def verify_resolution(tower) -> List[Check]:
    maps = resolution_elements(tower)
    checks = resolution_checks(tower, maps)
    logger.info(f'{tower}: resolution verification done')
    return checks


# -- Ext modules --------------------------------------------------------------------

def coboundary_formulas(tower) -> Tuple[np.ndarray, np.ndarray]:
    """
    α* and β* on the χ-basis from their closed forms

        χ_k α* = δ_{k,b̄} s^(b-ub) χ_0,
        χ_k β* = k s^(ub + under(k+b̄)) χ_{over(k+b̄)}.
    """
    p, ring = tower.p, tower.ring
    b, b_bar, ub = tower.b, tower.b_bar, tower.b_under
    alpha, beta = zeros(p, p, ring), zeros(p, p, ring)
    alpha[b_bar, 0] = ring.power(b - ub)
    for k in range(1, p):
        beta[k, over(k + b_bar, p)] = \
            ring.element(k) * ring.power(ub + under(k + b_bar, p))
    return alpha, beta


def ext_module_formula(tower, degree: int) -> ModuleDescription:
    if degree < 0:
        raise UsageError(f'degree must be non-negative, got {degree}')
    p, b, b_bar, ub = tower.p, tower.b, tower.b_bar, tower.b_under
    if degree == 0:
        return ModuleDescription(free_rank=1, torsion=())
    if degree % 2 == 0:
        return ModuleDescription.of_exponents([b - ub])
    exponents = [ub + 1] * b_bar + [ub] * (p - 1 - b_bar)
    return ModuleDescription.of_exponents([e for e in exponents if e])


def cochain_homology(tower, degree: int,
                     maps: Optional[ResolutionMaps] = None) -> Homology:
    """H^degree of Hom_Ξ(P, T) with its cycles and boundaries."""
    if degree < 0:
        raise UsageError(f'degree must be non-negative, got {degree}')
    maps = maps or resolution_elements(tower)
    d_in = maps.coboundary(degree - 1) if degree else \
        zeros(0, tower.p, tower.ring)
    return homology(d_in, maps.coboundary(degree), tower.ring)


def ext_module(tower, degree: int,
               maps: Optional[ResolutionMaps] = None) -> ModuleDescription:
    """
    Ext^degree_Ξ(T, T), from the closed form and confirmed by Smith forms
    of the dualized resolution.

    :raise InternalConsistencyError: when the two descriptions differ.
    """
    maps = maps or resolution_elements(tower)
    alpha, beta = coboundary_formulas(tower)
    if not (matrices_equal(alpha, maps.alpha)
            and matrices_equal(beta, maps.beta)):
        raise InternalConsistencyError(
            f'{tower}: coboundary formulas disagree with α*, β*')
    formula = ext_module_formula(tower, degree)
    computed = cochain_homology(tower, degree, maps).module
    if computed != formula:
        raise InternalConsistencyError(
            f'{tower}: Ext^{degree} is {computed} by Smith form but '
            f'{formula} by formula')
    logger.debug(f'{tower}: Ext^{degree} = {computed}')
    return computed


def ext_table(tower, max_degree: Optional[int] = None
              ) -> List[ModuleDescription]:
    max_degree = get_compute_conf().max_degree if max_degree is None \
        else max_degree
    maps = resolution_elements(tower)
    return [ext_module(tower, i, maps) for i in range(max_degree + 1)]


@dataclasses.dataclass(frozen=True)
class ExtGenerator:
    degree: int

    # χ_index generates the class
    index: int

    # k with annihilator s^k; None for a free generator, 0 for a zero class
    annihilator: Optional[int]


def ext_generators(tower, degree: int) -> List[ExtGenerator]:
    """The χ-basis classes spanning Ext^degree."""
    if degree < 0:
        raise UsageError(f'degree must be non-negative, got {degree}')
    b, b_bar, ub = tower.b, tower.b_bar, tower.b_under
    if degree == 0:
        return [ExtGenerator(0, 0, None)]
    if degree % 2 == 0:
        return [ExtGenerator(degree, 0, b - ub)]
    return [ExtGenerator(degree, j, ub + 1 if j < b_bar else ub)
            for j in range(tower.p) if j != b_bar]


# -- chain maps and products --------------------------------------------------------

@dataclasses.dataclass(eq=False)
class ChainMap:
    """
    A chain map P -> P[shift] of the periodic resolution. Component i maps
    P_{i+shift} to P_i and only depends on the parity of i.
    """
    shift: int
    even: np.ndarray
    odd: np.ndarray

    def component(self, i: int) -> np.ndarray:
        return self.even if i % 2 == 0 else self.odd

    def then(self, other: 'ChainMap') -> 'ChainMap':
        """The Yoneda product: self, followed by other shifted."""
        s = other.shift
        return ChainMap(shift=self.shift + s,
                        even=other.component(0) @ self.component(s),
                        odd=other.component(1) @ self.component(1 + s))

    def cochain(self) -> np.ndarray:
        """The represented class: component 0 followed by χ_0."""
        return self.even[0]

    def commutes(self, maps: ResolutionMaps) -> bool:
        return all(matrices_equal(
            self.component(i) @ maps.differential(i + 1 + self.shift),
            maps.differential(i + 1) @ self.component(i + 1))
            for i in (0, 1))


def _check_odd_index(p: int, b: int, j: int):
    if not 0 <= j < p:
        raise UsageError(f'index {j} outside [0, {p - 1}]')
    if j == b % p:
        raise UsageError(f'index {j} equals b̄ = {b % p}')


def nu_element(tower, j: int) -> np.ndarray:
    """
    The upper component of the lift of χ_j,

        ν_j = s^(b + under(j-2b)) (ε_{over(2b-j), c} / over(b-j)
                                   + ε_{b̄, c} / over(j-b)),

    with c = over(j-2b). The inverses are taken in Q.
    """
    p, b, ring = tower.p, tower.b, tower.ring
    _check_odd_index(p, b, j)
    col = over(j - 2 * b, p)
    out = eps(over(2 * b - j, p), col, tower) * \
        ring.element(Fraction(1, over(b - j, p))) + \
        eps(tower.b_bar, col, tower) * \
        ring.element(Fraction(1, over(j - b, p)))
    return out * ring.power(b + under(j - 2 * b, p))


def odd_lift(tower, j: int) -> ChainMap:
    """The lift of χ_j in degree 1: μ_j = ẗ^j below, ν_j above."""
    _check_odd_index(tower.p, tower.b, j)
    return ChainMap(shift=1, even=ddot_power(j, tower),
                    odd=nu_element(tower, j))


def even_lift(tower) -> ChainMap:
    """χ_0 in degree 2 lifts to the identity chain map."""
    one = identity(tower.p, tower.ring)
    return ChainMap(shift=2, even=one, odd=one)


def lift_checks(tower, j: int, maps: Optional[ResolutionMaps] = None
                ) -> List[Check]:
    maps = maps or resolution_elements(tower)
    lift = odd_lift(tower, j)
    mu_j, nu_j = lift.even, lift.odd
    system, _ = lambda_D(tower)
    bad = system.violations(nu_j, tower)
    return [
        check(f'nu_{j} lies in Xi', not bad, expected='no violated tie',
              actual='all ties hold' if not bad else f'{len(bad)} violated',
              detail='; '.join(bad)),
        equality_check(f'nu_{j} beta = alpha mu_{j}', matrices_equal(
            maps.beta @ nu_j, mu_j @ maps.alpha), True),
        equality_check(f'mu_{j} alpha = beta nu_{j}', matrices_equal(
            maps.alpha @ mu_j, nu_j @ maps.beta), True),
        equality_check(f'mu_{j} chi_0 = chi_{j}', matrices_equal(
            maps.chi[0] @ mu_j, maps.chi[j]), True),
    ]


def lift_cocycle(tower, j: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    (μ_j, ν_j), the lift of χ_j in degree 1 to a chain map P -> P[1].

    :raise UsageError: when j is outside [0, p-1] or equals b̄.
    :raise InternalConsistencyError: when ν_j violates a tie or the chain
      map identities fail.
    """
    lift = odd_lift(tower, j)
    failed = [c.name for c in lift_checks(tower, j) if c.failed]
    if failed:
        raise InternalConsistencyError(
            f'{tower}: lift of chi_{j} fails: {", ".join(failed)}')
    return lift.even, lift.odd


@dataclasses.dataclass(frozen=True)
class StructureConstant:
    j: int
    k: int

    # whether χ_j χ_k has a χ_0 component at all
    present: bool

    exponent: int

    # 1 / over(b - j), exactly and modulo p
    unit: Fraction
    unit_mod_p: int

    # whether the product is zero in S/s^(b - ub)
    vanishes: bool


def structure_constant(p: int, b: int, j: int, k: int) -> StructureConstant:
    """
    χ_j χ_k = δ_{over(j+k), over(2b)} s^(b + under(j+k-2b)) / over(b-j) · χ_0
    for odd classes χ_j, χ_k, landing in even degree.
    """
    check_odd_prime(p)
    if b < 1:
        raise UsageError(f'ramification jump must be positive, got {b}')
    _check_odd_index(p, b, j)
    _check_odd_index(p, b, k)
    present = over(j + k, p) == over(2 * b, p)
    exponent = b + under(j + k - 2 * b, p)
    inverse = over(b - j, p)
    return StructureConstant(
        j=j, k=k, present=present, exponent=exponent,
        unit=Fraction(1, inverse), unit_mod_p=pow(inverse, -1, p),
        vanishes=not present or exponent >= b - under(b, p))


def product_cochain(tower, j: int, k: int) -> np.ndarray:
    """χ_j χ_k as the composite ν_j χ_k at the cochain level."""
    return odd_lift(tower, j).then(odd_lift(tower, k)).cochain()


def expected_product(tower, constant: StructureConstant) -> np.ndarray:
    ring = tower.ring
    out = zeros(1, tower.p, ring)[0]
    if constant.present:
        out[0] = ring.power(constant.exponent) * \
            ring.element(constant.unit)
    return out


def product_checks(tower, maps: Optional[ResolutionMaps] = None
                   ) -> List[Check]:
    """Odd products, graded commutativity and the period-2 shift."""
    maps = maps or resolution_elements(tower)
    p, b = tower.p, tower.b
    odd = [j for j in range(p) if j != tower.b_bar]
    h2 = cochain_homology(tower, 2, maps)
    checks = []

    wrong, not_commuting = [], []
    for j in odd:
        for k in odd:
            constant = structure_constant(p, b, j, k)
            actual = product_cochain(tower, j, k)
            if not matrices_equal(actual, expected_product(tower, constant)):
                wrong.append((j, k))
            if k >= j and not h2.is_boundary(
                    actual + product_cochain(tower, k, j)):
                not_commuting.append((j, k))
    checks.append(check('odd products match structure constants', not wrong,
                        expected='all pairs',
                        actual='all pairs' if not wrong
                        else f'fails at {wrong}'))
    checks.append(check('odd products anticommute in Ext^2',
                         not not_commuting, expected='all pairs',
                         actual='all pairs' if not not_commuting
                         else f'fails at {not_commuting}'))

    even = even_lift(tower)
    checks.append(equality_check('chi_0 in degree 2 lifts to the identity',
                                 even.commutes(maps), True))
    square = even.then(even)
    checks.append(equality_check('chi_0^(2) chi_0^(2) = chi_0^(4)',
                                 matrices_equal(square.cochain(),
                                                maps.chi[0]), True))
    shifted = [j for j in odd if not (
        matrices_equal(even.then(odd_lift(tower, j)).cochain(), maps.chi[j])
        and matrices_equal(odd_lift(tower, j).then(even).cochain(),
                           maps.chi[j]))]
    checks.append(check('chi_0^(2) shifts odd classes by two', not shifted,
                        expected='all odd classes',
                        actual='all odd classes' if not shifted
                        else f'fails at {shifted}'))
    return checks


def verify_ring(tower, max_degree: Optional[int] = None) -> List[Check]:
    """Lifts, products and the Ext table against the Smith forms."""
    maps = resolution_elements(tower)
    checks = []
    for j in range(tower.p):
        if j != tower.b_bar:
            checks += lift_checks(tower, j, maps)
    checks += product_checks(tower, maps)

    max_degree = get_compute_conf().max_degree if max_degree is None \
        else max_degree
    for i in range(max_degree + 1):
        checks.append(equality_check(
            f'Ext^{i} by Smith form',
            str(cochain_homology(tower, i, maps).module),
            str(ext_module_formula(tower, i))))
    logger.info(f'{tower}: Ext ring verification done')
    return checks


# -- presentation -------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class ExtRingPresentation:
    p: int
    b: int
    b_bar: int
    b_under: int

    # names of S and of its uniformizer in the text
    ring: str
    uniformizer: str

    # χ_0 in degree 2 generates S/s^even_annihilator
    even_annihilator: int

    odd_generators: Tuple[ExtGenerator, ...]

    # products χ_j χ_k for j <= k
    products: Tuple[StructureConstant, ...]

    text: str

    def to_dict(self) -> Dict[str, Any]:
        """Plain data for reports; rationals are rendered as strings."""
        return {
            'p': self.p, 'b': self.b, 'b_bar': self.b_bar,
            'b_under': self.b_under,
            'ring': self.ring, 'uniformizer': self.uniformizer,
            'even_generator': {'degree': 2, 'index': 0,
                               'annihilator': self.even_annihilator},
            'odd_generators': [
                {'degree': g.degree, 'index': g.index,
                 'annihilator': g.annihilator}
                for g in self.odd_generators],
            'products': [
                {'j': c.j, 'k': c.k, 'present': c.present,
                 'exponent': c.exponent, 'unit': str(c.unit),
                 'vanishes': c.vanishes}
                for c in self.products],
            'text': self.text,
        }


def _names(tower) -> Tuple[str, str]:
    p, ring = tower.p, tower.ring
    if tower.ring_degree == 1:
        name = f'Z_({p})'
        symbol = str(p) if ring.uniformizer == p else 's'
    else:
        name = f'Z_({p})[{tower.kind}_{tower.n - 1}]'
        symbol = 's'
    return name, symbol


def _scaled(symbol: str, e: int, term: str,
            coefficient: Optional[Fraction] = None) -> str:
    power = '' if e == 0 else symbol if e == 1 else f'{symbol}^{e}'
    if coefficient is not None and coefficient != 1:
        power = f'({coefficient}){power}'
    return f'{power}{term}'


def presentation_text(name: str, symbol: str, b: int, b_bar: int,
                      even_annihilator: int,
                      odd_generators: Tuple[ExtGenerator, ...],
                      products: Tuple[StructureConstant, ...]) -> str:
    """
    Generators and relations, leaving out odd classes which are zero.

    For b = 1 the generators are numbered h1, h2, ... with the even class
    last; otherwise h_j stands for χ_j and h for χ_0 in degree 2.
    """
    live = [g for g in odd_generators if g.annihilator]
    if b == 1:
        labels = {g.index: f'h{i + 1}' for i, g in enumerate(live)}
        even = f'h{len(live) + 1}'
    else:
        labels = {g.index: f'h{g.index}' for g in live}
        even = 'h'

    relations = [_scaled(symbol, g.annihilator, labels[g.index])
                 for g in live]
    relations.append(_scaled(symbol, even_annihilator, even))
    for c in products:
        if c.j not in labels or c.k not in labels:
            continue
        term = f'{labels[c.j]}^2' if c.j == c.k \
            else f'{labels[c.j]}{labels[c.k]}'
        if c.vanishes:
            relations.append(term)
        else:
            relations.append(
                f'{term} - {_scaled(symbol, c.exponent, even, c.unit)}')
    gens = list(labels.values()) + [even]
    return f'{name}[{",".join(gens)}]/({", ".join(relations)})'


def ring_presentation(tower) -> ExtRingPresentation:
    """
    Ext*_Ξ(T, T) as a quotient of the graded commutative polynomial ring
    on the odd classes h_j = χ_j in degree 1 and h = χ_0 in degree 2.
    """
    p, b, b_bar, ub = tower.p, tower.b, tower.b_bar, tower.b_under
    odd_generators = tuple(ext_generators(tower, 1))
    odd = [g.index for g in odd_generators]
    products = tuple(structure_constant(p, b, j, k)
                     for j in odd for k in odd if j <= k)
    name, symbol = _names(tower)
    text = presentation_text(name, symbol, b, b_bar, b - ub,
                             odd_generators, products)
    return ExtRingPresentation(p=p, b=b, b_bar=b_bar, b_under=ub, ring=name,
                               uniformizer=symbol, even_annihilator=b - ub,
                               odd_generators=odd_generators,
                               products=products, text=text)
