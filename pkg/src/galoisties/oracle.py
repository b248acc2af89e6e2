"""
Independent computations of Ext*_{T≀G}(T, T) for cyclic G.

- the classical periodic complex T --(σ-1)--> T --Tr--> T --(σ-1)--> ...
- the bar resolution, with cup products and the homotopy c_{a,b} making
  them graded commutative;
- lifting 1-cocycles along the periodic resolution over Ξ by solving the
  commuting squares, instead of using the closed-form lifts.
"""
import dataclasses
import functools
import itertools
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from galoisties import cohom
from galoisties.config import get_compute_conf
from galoisties.errors import DomainError, InternalConsistencyError, \
    ResourceError, UsageError
from galoisties.exact import Homology, ModuleDescription, RationalDVR, \
    check_odd_prime, colength, homology, identity, is_zero_matrix, \
    matrices_equal, solve_left, to_matrix, zeros
from galoisties.fields import AmbientField, QBasis
from galoisties.logging import get_logger
from galoisties.report import Check, check, equality_check
from galoisties.ties import lambda_D
from galoisties.wedder import flatten, unflatten

logger = get_logger(__name__)


@dataclasses.dataclass(eq=False)
class CyclicAction:
    """
    A commutative S-algebra, free of finite rank, with a generator of a
    cyclic group acting on it by ring automorphisms.
    """
    name: str
    ring: Any
    rank: int
    order: int

    # rows: images of the basis vectors under the generator
    generator: np.ndarray

    # right multiplication by each basis vector
    multiplications: Sequence[np.ndarray]

    def __post_init__(self):
        power = identity(self.rank, self.ring)
        for k in range(1, self.order + 1):
            power = power @ self.generator
            if matrices_equal(power, identity(self.rank, self.ring)) \
                    != (k == self.order):
                raise UsageError(
                    f'{self.name}: the generator does not have order '
                    f'{self.order}')

    @functools.cached_property
    def powers(self) -> List[np.ndarray]:
        out = [identity(self.rank, self.ring)]
        for _ in range(1, self.order):
            out.append(out[-1] @ self.generator)
        return out

    def act(self, x: np.ndarray, k: int) -> np.ndarray:
        return x @ self.powers[k % self.order]

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = zeros(1, self.rank, self.ring)[0]
        for c, m in zip(y, self.multiplications):
            if c:
                out = out + (x @ m) * c
        return out

    @property
    def difference(self) -> np.ndarray:
        return self.generator - identity(self.rank, self.ring)

    @property
    def trace(self) -> np.ndarray:
        out = zeros(self.rank, self.rank, self.ring)
        for m in self.powers:
            out = out + m
        return out


def tower_action(tower) -> CyclicAction:
    """T over S with σ, for a tower carrying its Galois action."""
    if tower.sigma_dot is None:
        raise UsageError(f'{tower} carries no Galois action')
    mults = [identity(tower.g, tower.ring)]
    for _ in range(1, tower.g):
        mults.append(mults[-1] @ tower.t_dot)
    return CyclicAction(name=str(tower), ring=tower.ring, rank=tower.g,
                        order=tower.g, generator=tower.sigma_dot,
                        multiplications=mults)


def cyclotomic_action(p: int, n: int = 2) -> CyclicAction:
    """
    U = Z_(p)[ζ] for ζ of order p^n over S = Z_(p), with the full Galois
    group (Z/p^n)^*, cyclic of order p^(n-1)(p-1), generated by
    ζ -> ζ^r for a primitive root r. The basis is (θ^0, ..., θ^(d-1)),
    θ = ζ - 1.
    """
    p = check_odd_prime(p)
    ambient = AmbientField(p, n)
    d = ambient.degree
    theta = ambient.theta()
    powers = [ambient.one]
    for _ in range(1, 2 * d - 1):
        powers.append(powers[-1] * theta)
    basis = QBasis(powers[:d])
    ring = RationalDVR(p)

    r = int(sympy.primitive_root(p ** n))
    image = ambient.automorphism(r)(theta)
    rows, power = [], ambient.one
    for _ in range(d):
        rows.append(basis.coordinates(power))
        power = power * image
    mults = [to_matrix([basis.coordinates(powers[i + j]) for i in range(d)],
                       ring)
             for j in range(d)]
    return CyclicAction(name=f'Z_({p})[zeta_{p}^{n}]', ring=ring, rank=d,
                        order=d, generator=to_matrix(rows, ring),
                        multiplications=mults)


# -- the classical complex ------------------------------------------------------------

def classical_homology(action: CyclicAction, degree: int) -> Homology:
    """H^degree of T --(σ-1)--> T --Tr--> T --(σ-1)--> ... (degree 0 first)."""
    if degree < 0:
        raise UsageError(f'degree must be non-negative, got {degree}')
    diff, tr = action.difference, action.trace
    if not (is_zero_matrix(diff @ tr) and is_zero_matrix(tr @ diff)):
        raise InternalConsistencyError(
            f'{action.name}: trace and σ - 1 do not compose to zero')
    if degree == 0:
        return homology(zeros(0, action.rank, action.ring), diff,
                        action.ring)
    if degree % 2:
        return homology(diff, tr, action.ring)
    return homology(tr, diff, action.ring)


def classical_ext(action: CyclicAction, degree: int) -> ModuleDescription:
    module = classical_homology(action, degree).module
    logger.debug(f'{action.name}: classical H^{degree} = {module}')
    return module


# -- the bar resolution -----------------------------------------------------------------

@dataclasses.dataclass(eq=False)
class BarCochain:
    """
    An SG-linear map on the degree-th term of the bar resolution, given by
    its values at the tuples (1, σ^k_1, ..., σ^k_degree), concatenated in
    lexicographic order of (k_1, ..., k_degree).
    """
    degree: int
    values: np.ndarray


class BarComplex:
    """Homogeneous bar cochains of a cyclic group with values in T."""

    def __init__(self, action: CyclicAction,
                 max_coordinates: Optional[int] = None):
        self.action = action
        self.max_coordinates = max_coordinates or \
            get_compute_conf().bar_max_coordinates
        self._coboundaries: Dict[int, np.ndarray] = {}

    def dimension(self, degree: int) -> int:
        return self.action.order ** degree * self.action.rank

    def check_size(self, degree: int):
        size = self.dimension(degree)
        if size > self.max_coordinates:
            raise ResourceError(f'bar cochains of degree {degree}', size,
                                self.max_coordinates)

    def keys(self, degree: int) -> List[Tuple[int, ...]]:
        return list(itertools.product(range(self.action.order),
                                      repeat=degree))

    def index(self, key: Sequence[int]) -> int:
        m, out = self.action.order, 0
        for k in key:
            out = out * m + k
        return out

    def _normalize(self, full: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
        """Split (g_0, ..., g_i) into g_0 and the key of g_0^-1 (g_0, ...)."""
        m = self.action.order
        head = full[0]
        return head, tuple((k - head) % m for k in full[1:])

    def value(self, cochain: BarCochain, full: Sequence[int]) -> np.ndarray:
        if len(full) != cochain.degree + 1:
            raise UsageError(f'{len(full)} arguments for a cochain of degree '
                             f'{cochain.degree}')
        head, key = self._normalize(full)
        r = self.action.rank
        q = self.index(key)
        return self.action.act(cochain.values[q * r:(q + 1) * r], head)

    def coboundary_matrix(self, degree: int) -> np.ndarray:
        """
        δ from degree to degree + 1, acting on the right of value vectors:
        (g_0, ..., g_{i+1}) δf = sum over l of (-1)^(i+1-l) f(... without g_l).
        """
        if degree in self._coboundaries:
            return self._coboundaries[degree]
        self.check_size(degree + 1)
        r, ring = self.action.rank, self.action.ring
        out = zeros(self.dimension(degree), self.dimension(degree + 1), ring)
        for key in self.keys(degree + 1):
            full = (0,) + key
            col = self.index(key) * r
            for l in range(degree + 2):
                head, rest = self._normalize(full[:l] + full[l + 1:])
                row = self.index(rest) * r
                sign = (-1) ** (degree + 1 - l)
                out[row:row + r, col:col + r] += \
                    self.action.powers[head % self.action.order] * sign
        logger.debug(f'{self.action.name}: bar coboundary {out.shape}')
        self._coboundaries[degree] = out
        return out

    def coboundary(self, cochain: BarCochain) -> BarCochain:
        return BarCochain(cochain.degree + 1,
                          cochain.values @
                          self.coboundary_matrix(cochain.degree))

    def is_cocycle(self, cochain: BarCochain) -> bool:
        return is_zero_matrix(self.coboundary(cochain).values)

    def is_coboundary(self, cochain: BarCochain) -> bool:
        if is_zero_matrix(cochain.values):
            return True
        if cochain.degree == 0:
            return False
        d = self.coboundary_matrix(cochain.degree - 1)
        return solve_left(d, cochain.values, self.action.ring) is not None

    def homology(self, degree: int) -> Homology:
        ring = self.action.ring
        d_in = self.coboundary_matrix(degree - 1) if degree else \
            zeros(0, self.action.rank, ring)
        return homology(d_in, self.coboundary_matrix(degree), ring)

    def _tabulate(self, degree: int, fn) -> BarCochain:
        r = self.action.rank
        values = zeros(1, self.dimension(degree), self.action.ring)[0]
        for key in self.keys(degree):
            q = self.index(key)
            values[q * r:(q + 1) * r] = fn((0,) + key)
        return BarCochain(degree, values)

    def cup_cochains(self, a: BarCochain, b: BarCochain) -> BarCochain:
        """(g_0, ..., g_{i+j})(a ∪ b) = (g_0, ..., g_i)a · (g_i, ..., g_{i+j})b."""
        i = a.degree

        def fn(full):
            return self.action.multiply(self.value(a, full[:i + 1]),
                                        self.value(b, full[i:]))

        self.check_size(i + b.degree)
        return self._tabulate(i + b.degree, fn)

    def homotopy(self, a: BarCochain, b: BarCochain) -> BarCochain:
        """
        c_{a,b} in degree i+j-1, whose coboundary is a ∪ b - (-1)^(ij) b ∪ a
        for cocycles a, b:

            (h_0, ..., h_{i+j-1}) c_{a,b} = sum over m in [0, j-1] of
              (-1)^(m(i+j-1)) (h_m, ..., h_{m+i})a
                              · (h_{m+i}, ..., h_{i+j-1}, h_0, ..., h_m)b
        """
        i, j = a.degree, b.degree
        if i + j < 1:
            raise UsageError('the homotopy needs total degree at least 1')

        def fn(h):
            out = zeros(1, self.action.rank, self.action.ring)[0]
            for m in range(j):
                left = self.value(a, h[m:m + i + 1])
                right = self.value(b, h[m + i:] + h[:m + 1])
                out = out + self.action.multiply(left, right) * \
                    (-1) ** (m * (i + j - 1))
            return out

        return self._tabulate(i + j - 1, fn)


def bar_cup(complex_: BarComplex, a: BarCochain, b: BarCochain
            ) -> BarCochain:
    """
    :raise DomainError: unless both arguments are cocycles.
    """
    for x in (a, b):
        if not complex_.is_cocycle(x):
            raise DomainError(f'cochain of degree {x.degree} is not a '
                              f'cocycle')
    return complex_.cup_cochains(a, b)


@dataclasses.dataclass(eq=False)
class BarCohomology:
    complex: BarComplex
    homologies: List[Homology]

    @property
    def modules(self) -> List[ModuleDescription]:
        return [h.module for h in self.homologies]

    def representatives(self, degree: int) -> List[BarCochain]:
        """A basis of the cocycles in the given degree."""
        return [BarCochain(degree, row)
                for row in self.homologies[degree].cycles]


def bar_cohomology(action: CyclicAction, max_degree: int,
                   max_coordinates: Optional[int] = None) -> BarCohomology:
    """
    :raise ResourceError: when a cochain space beyond ``max_degree + 1``
      would exceed the size guard.
    """
    complex_ = BarComplex(action, max_coordinates)
    complex_.check_size(max_degree + 1)
    homologies = [complex_.homology(i) for i in range(max_degree + 1)]
    logger.debug(f'{action.name}: bar cohomology '
                 f'{[str(h.module) for h in homologies]}')
    return BarCohomology(complex=complex_, homologies=homologies)


def product_image_length(h2: Homology,
                         products: Sequence[np.ndarray]) -> int:
    """Length of the S-submodule of H^2 generated by the given cocycles."""
    coords = [h2.coordinates(c) for c in products]
    if not coords:
        return 0
    if h2.module.free_rank:
        raise DomainError('H^2 is not torsion')
    return colength(h2.relations, np.vstack([h2.relations] + coords),
                    h2.ring)


def xi_product_image_length(tower) -> int:
    """The same invariant from the closed-form lifts over Ξ."""
    maps = cohom.resolution_elements(tower)
    h2 = cohom.cochain_homology(tower, 2, maps)
    odd = [j for j in range(tower.p) if j != tower.b_bar]
    return product_image_length(
        h2, [cohom.product_cochain(tower, j, k) for j in odd for k in odd])


def bar_product_image_length(bar: BarCohomology) -> int:
    reps = bar.representatives(1)
    products = [bar.complex.cup_cochains(a, b).values
                for a in reps for b in reps]
    return product_image_length(bar.homologies[2], products)


# -- comparison through the classical complex -------------------------------------------

@dataclasses.dataclass(eq=False)
class ClassicalComparison:
    """
    A chain map from the classical resolution Ξ --(σ-1)--> Ξ --Tr--> Ξ
    to the periodic resolution over Ξ, lifting the identity of T in
    degrees 1 and 2. Pulling cochains back along it carries Ext classes to
    classical ones; bar cocycles reach the same groups by evaluation
    at (1, σ) and at the sum of the (1, σ^i, σ^(i+1)).
    """
    action: CyclicAction

    # β after first = σ - 1, and α after second = Tr after first
    first: np.ndarray
    second: np.ndarray

    def ext_cochain(self, cochain: np.ndarray, degree: int) -> np.ndarray:
        if degree not in (1, 2):
            raise UsageError(f'the comparison covers degrees 1 and 2, got '
                             f'{degree}')
        return cochain @ (self.first if degree == 1 else self.second)

    def bar_cochain(self, complex_: BarComplex, cochain: BarCochain
                    ) -> np.ndarray:
        if cochain.degree == 1:
            return complex_.value(cochain, (0, 1))
        if cochain.degree != 2:
            raise UsageError(f'the comparison covers degrees 1 and 2, got '
                             f'{cochain.degree}')
        g = self.action.order
        out = zeros(1, self.action.rank, self.action.ring)[0]
        for i in range(g):
            out = out + complex_.value(cochain, (0, i, (i + 1) % g))
        return out


def _solve_in_xi(tower, xi: np.ndarray, differential: np.ndarray,
                 target: np.ndarray, what: str) -> np.ndarray:
    """Some x in Ξ with ``differential @ x == target``."""
    g = tower.g
    images = np.vstack([flatten(differential @ unflatten(row, g))
                        for row in xi])
    coords = solve_left(images, flatten(target), tower.ring)
    if coords is None:
        raise InternalConsistencyError(f'{tower}: {what} has no lift in Ξ')
    return unflatten(coords @ xi, g)


def classical_comparison(tower,
                         maps: Optional[cohom.ResolutionMaps] = None
                         ) -> ClassicalComparison:
    """
    :raise UsageError: for a tower without Galois action.
    :raise InternalConsistencyError: when a square cannot be solved.
    """
    maps = maps or cohom.resolution_elements(tower)
    action = tower_action(tower)
    _, mu = lambda_D(tower)
    xi = mu.rows()
    first = _solve_in_xi(tower, xi, maps.beta, action.difference, 'σ - 1')
    second = _solve_in_xi(tower, xi, maps.alpha, first @ action.trace,
                          'the trace')
    return ClassicalComparison(action=action, first=first, second=second)


def aligned_bar_cocycle(comparison: ClassicalComparison, bar: BarCohomology,
                        target: np.ndarray) -> BarCochain:
    """
    A bar 1-cocycle whose classical class is that of ``target``.

    :raise InternalConsistencyError: when no S-combination of the bar
      cocycles reaches the class.
    """
    complex_ = bar.complex
    reps = bar.representatives(1)
    evaluations = [comparison.bar_cochain(complex_, a) for a in reps]
    boundaries = comparison.action.difference
    coords = solve_left(np.vstack(evaluations + [boundaries]), target,
                        comparison.action.ring)
    if coords is None:
        raise InternalConsistencyError(
            f'{comparison.action.name}: no bar cocycle in the class of '
            f'{list(target)}')
    values = zeros(1, complex_.dimension(1), comparison.action.ring)[0]
    for c, a in zip(coords, reps):
        if c:
            values = values + a.values * c
    return BarCochain(1, values)


@dataclasses.dataclass(frozen=True)
class ProductAlignment:
    # unit c with bar product = c times the Ext product in classical H^2
    unit: Optional[int]

    # pairs (j, k) whose products differ for every unit
    mismatched: Tuple[Tuple[int, int], ...]

    # pairs whose product class is nonzero
    nonzero: Tuple[Tuple[int, int], ...]


def align_products(tower, bar: BarCohomology,
                   comparison: Optional[ClassicalComparison] = None
                   ) -> ProductAlignment:
    """
    Compare χ_j χ_k with the cup product of the bar cocycles aligned to
    χ_j and χ_k, class by class in classical H^2, trying every unit
    multiple in [1, p-1].
    """
    maps = cohom.resolution_elements(tower)
    comparison = comparison or classical_comparison(tower, maps)
    action, complex_ = comparison.action, bar.complex
    h2 = classical_homology(action, 2)
    odd = [j for j in range(tower.p) if j != tower.b_bar]
    aligned = {j: aligned_bar_cocycle(
        comparison, bar, comparison.ext_cochain(maps.chi[j], 1))
        for j in odd}

    pairs = [(j, k) for j in odd for k in odd]
    ext_products, bar_products = {}, {}
    for j, k in pairs:
        ext_products[j, k] = comparison.ext_cochain(
            cohom.product_cochain(tower, j, k), 2)
        bar_products[j, k] = comparison.bar_cochain(
            complex_, complex_.cup_cochains(aligned[j], aligned[k]))
    nonzero = tuple(pair for pair in pairs
                    if not h2.is_boundary(ext_products[pair]))

    best: Tuple[Optional[int], List[Tuple[int, int]]] = (None, pairs)
    for unit in range(1, tower.p):
        scale = action.ring.element(unit)
        mismatched = [pair for pair in pairs if not h2.is_boundary(
            bar_products[pair] - ext_products[pair] * scale)]
        if len(mismatched) < len(best[1]):
            best = (unit, mismatched)
        if not mismatched:
            break
    unit, mismatched = best
    logger.debug(f'{tower}: bar products aligned with unit {unit}, '
                 f'{len(nonzero)} nonzero')
    return ProductAlignment(unit=unit if not mismatched else None,
                            mismatched=tuple(mismatched), nonzero=nonzero)


# -- lifting by solving -----------------------------------------------------------------

@dataclasses.dataclass(eq=False)
class PartialLift:
    """
    Components of a lift of a 1-cocycle to a chain map P -> P[1]:
    lower maps P_1 to P_0, upper maps P_2 to P_1.
    """
    lower: np.ndarray
    upper: np.ndarray

    def product_with(self, k: int) -> np.ndarray:
        """The cochain of the product with χ_k: upper followed by χ_k."""
        return self.upper[k]


def independent_lift(tower, cocycle: np.ndarray,
                     maps: Optional[cohom.ResolutionMaps] = None
                     ) -> PartialLift:
    """
    Some lift of a 1-cocycle v in Hom_Ξ(Ξ, T), solving

        t^0 m_0 = v  and  β m_1 = m_0 α  (as maps: m_1 then β = α then m_0)

    for m_0, m_1 in Ξ over the μ-basis.

    :raise DomainError: when v is not annihilated by α*.
    :raise InternalConsistencyError: when the squares cannot be solved.
    """
    maps = maps or cohom.resolution_elements(tower)
    ring, g = tower.ring, tower.g
    cocycle = np.asarray(cocycle, dtype=object)
    if not is_zero_matrix(cocycle @ maps.alpha):
        raise DomainError('not a 1-cocycle: α* does not annihilate it')

    _, mu = lambda_D(tower)
    xi = mu.rows()
    evaluations = np.vstack([maps.chi[0] @ unflatten(row, g) for row in xi])
    coords = solve_left(evaluations, cocycle, ring)
    if coords is None:
        raise InternalConsistencyError(
            f'{tower}: χ_0 does not reach the cocycle {list(cocycle)}')
    lower = unflatten(coords @ xi, g)

    images = np.vstack([flatten(maps.beta @ unflatten(row, g))
                        for row in xi])
    coords = solve_left(images, flatten(lower @ maps.alpha), ring)
    if coords is None:
        raise InternalConsistencyError(
            f'{tower}: the square over β has no solution')
    return PartialLift(lower=lower, upper=unflatten(coords @ xi, g))


# -- verification suites ----------------------------------------------------------------

def classical_checks(tower, max_degree: Optional[int] = None) -> List[Check]:
    max_degree = get_compute_conf().max_degree if max_degree is None \
        else max_degree
    action = tower_action(tower)
    maps = cohom.resolution_elements(tower)
    checks = []
    for i in range(max_degree + 1):
        classical = classical_ext(action, i)
        checks.append(equality_check(
            f'classical H^{i} equals Ext^{i}', str(classical),
            str(cohom.ext_module(tower, i, maps))))
    logger.info(f'{tower}: classical comparison done')
    return checks


def bar_checks(tower, max_degree: int = 3) -> List[Check]:
    """Bar cohomology against the classical complex, and cup products."""
    action = tower_action(tower)
    bar = bar_cohomology(action, max_degree)
    complex_ = bar.complex
    checks = []
    for i in range(max_degree + 1):
        checks.append(equality_check(
            f'bar H^{i} equals classical H^{i}', str(bar.modules[i]),
            str(classical_ext(action, i))))
    for i in range(max_degree):
        composite = complex_.coboundary_matrix(i) @ \
            complex_.coboundary_matrix(i + 1)
        checks.append(equality_check(f'bar coboundary squares to zero in '
                                     f'degree {i}',
                                     is_zero_matrix(composite), True))

    if max_degree < 2:
        return checks
    reps = bar.representatives(1)
    unit = BarCochain(0, zeros(1, action.rank, action.ring)[0])
    unit.values[0] = action.ring.one
    if not all(matrices_equal(bar_cup(complex_, unit, a).values, a.values)
               for a in reps):
        checks.append(check('cup with the unit', False, expected='identity',
                            actual='differs'))
    else:
        checks.append(check('cup with the unit', True, expected='identity',
                            actual='identity'))

    broken = []
    for x, a in enumerate(reps):
        for y, b in enumerate(reps):
            sign = (-1) ** (a.degree * b.degree)
            difference = bar_cup(complex_, a, b).values - \
                bar_cup(complex_, b, a).values * sign
            c = complex_.homotopy(a, b)
            if not matrices_equal(complex_.coboundary(c).values, difference):
                broken.append((x, y))
    checks.append(check('homotopy c_{a,b} bounds a∪b + b∪a in degree 2',
                        not broken, expected='all pairs',
                        actual='all pairs' if not broken
                        else f'fails at {broken}'))

    checks.append(equality_check('H^1 products: bar image equals Xi image',
                                 bar_product_image_length(bar),
                                 xi_product_image_length(tower),
                                 detail='length of the submodule of H^2 '
                                        'generated by products of degree-1 '
                                        'classes'))

    alignment = align_products(tower, bar)
    aligned = not alignment.mismatched
    checks.append(check(
        'H^1 products: bar cup equals Yoneda product', aligned,
        expected='all pairs up to a unit',
        actual=f'all pairs, unit {alignment.unit}' if aligned
        else f'fails at {list(alignment.mismatched)}',
        detail='aligned degree-1 cocycles, compared in classical H^2'))
    p, b = tower.p, tower.b
    odd = [j for j in range(p) if j != tower.b_bar]
    expected = tuple((j, k) for j in odd for k in odd
                     if not cohom.structure_constant(p, b, j, k).vanishes)
    checks.append(equality_check('nonzero H^1 products', alignment.nonzero,
                                 expected))
    logger.info(f'{tower}: bar comparison done')
    return checks


def lift_checks(tower) -> List[Check]:
    """Solved lifts against the structure constants and the closed forms."""
    maps = cohom.resolution_elements(tower)
    h2 = cohom.cochain_homology(tower, 2, maps)
    p, b = tower.p, tower.b
    odd = [j for j in range(p) if j != tower.b_bar]
    wrong, apart = [], []
    for j in odd:
        lift = independent_lift(tower, maps.chi[j], maps)
        nu = cohom.odd_lift(tower, j).odd
        for k in odd:
            expected = cohom.expected_product(
                tower, cohom.structure_constant(p, b, j, k))
            if not h2.is_boundary(lift.product_with(k) - expected):
                wrong.append((j, k))
            if not h2.is_boundary((lift.upper - nu)[k]):
                apart.append((j, k))

    zero = independent_lift(tower, zeros(1, p, tower.ring)[0], maps)
    return [
        check('solved lifts reproduce the structure constants', not wrong,
              expected='all pairs',
              actual='all pairs' if not wrong else f'fails at {wrong}'),
        check('solved lifts differ from nu_j by coboundaries', not apart,
              expected='all pairs',
              actual='all pairs' if not apart else f'fails at {apart}'),
        equality_check('zero cocycle lifts to zero',
                       is_zero_matrix(zero.lower) and
                       is_zero_matrix(zero.upper), True),
    ]
