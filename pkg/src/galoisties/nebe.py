"""
Block decomposition of the Wedderburn image of U≀H for S ⊂ T ⊂ U.

Here S = Z_(p), T = Z_(p)[π_2] with G = C_p, and U = Z_(p)[ζ_{p^2}] with
H = (Z/p^2)^*, so U is tamely ramified of degree n = p - 1 over T. In the
S-basis (t^i u^j) of U, ordered u-major, the image Ξ of U≀H consists of
the n×n block matrices whose (k, l) block lies in Ξ' for k <= l and in
ṫΞ' for k > l, Ξ' being the image of T≀G.
"""
import dataclasses
import math
import random
from typing import Dict, List, Tuple

import numpy as np
import sympy

from galoisties import cohom, oracle
from galoisties.errors import PreconditionError, UsageError
from galoisties.exact import check_odd_prime, identity, matrices_equal, \
    row_basis, to_matrix, zeros
from galoisties.fields import ExtensionTower, FieldElement, QBasis, \
    build_tower, cyclotomic_discriminant_valuation
from galoisties.logging import get_logger
from galoisties.report import Check, check, equality_check
from galoisties.ties import TieSystem, lambda_D
from galoisties.wedder import colength, flatten, same_lattice, unflatten

logger = get_logger(__name__)


@dataclasses.dataclass(eq=False)
class BlockDecomposition:
    p: int
    inner: ExtensionTower

    # degree of U over T and of T over S
    n: int
    g: int

    # the S-basis t^i u^j of U, u-major
    basis: QBasis
    elements: List[FieldElement]

    # right multiplication by u and the Galois elements in that basis
    u_dot: np.ndarray
    rho_dots: Dict[int, np.ndarray]

    # Ξ' and ṫΞ' by ties and by S-bases
    ties: Tuple[TieSystem, TieSystem]
    inner_bases: Tuple[np.ndarray, np.ndarray]

    # S-basis of the block lattice, flattened
    lattice: np.ndarray

    @property
    def dimension(self) -> int:
        return self.g * self.n

    @property
    def ring(self):
        return self.inner.ring

    def place(self, block: np.ndarray, k: int, l: int) -> np.ndarray:
        out = zeros(self.dimension, self.dimension, self.ring)
        g = self.g
        out[k * g:(k + 1) * g, l * g:(l + 1) * g] = block
        return out

    def block(self, f: np.ndarray, k: int, l: int) -> np.ndarray:
        g = self.g
        return f[k * g:(k + 1) * g, l * g:(l + 1) * g]

    def block_unit(self, k: int, l: int) -> np.ndarray:
        """1 ⊗ e''_{k,l}: t^i u^k -> t^i u^l."""
        if not (0 <= k < self.n and 0 <= l < self.n):
            raise UsageError(f'block index ({k}, {l}) outside [0, '
                             f'{self.n - 1}]')
        return self.place(identity(self.g, self.ring), k, l)

    def violations(self, f: np.ndarray) -> List[str]:
        """Failed block conditions, empty iff f lies in the block lattice."""
        out = []
        for k in range(self.n):
            for l in range(self.n):
                system = self.ties[0 if k <= l else 1]
                bad = system.violations(self.block(f, k, l), self.inner)
                out += [f'block ({k}, {l}): {v}' for v in bad]
        return out

    def contains(self, f: np.ndarray) -> bool:
        return not self.violations(f)


def mixed_basis(tower: ExtensionTower, u: FieldElement, n: int
                ) -> List[FieldElement]:
    """(t^i u^j) for i < g, j < n, ordered u-major."""
    return [tower.t_gen ** i * u ** j for j in range(n) for i in range(tower.g)]


def build_blocks(p: int, n_level: int = 2) -> BlockDecomposition:
    """
    :raise UsageError: for levels other than 2.
    :raise PreconditionError: when [U:T] is divisible by p.
    """
    p = check_odd_prime(p)
    if n_level != 2:
        raise UsageError(f'only level 2 is supported, got {n_level}')
    n = p - 1
    if math.gcd(n, p) != 1:
        raise PreconditionError(f'gcd(n, p) = 1 fails: n = {n}')

    tower = build_tower(p, 2, 'pi')
    ring, ambient = tower.ring, tower.ambient
    u = ambient.theta()
    elements = mixed_basis(tower, u, n)
    basis = QBasis(elements)

    u_dot = to_matrix([basis.coordinates(x * u) for x in elements], ring)
    generator = int(sympy.primitive_root(p ** 2))
    rho_dots = {}
    for k in range(p * n):
        r = pow(generator, k, p ** 2)
        rho = ambient.automorphism(r)
        rho_dots[r] = to_matrix(
            [basis.coordinates(rho(x)) for x in elements], ring)

    system0, mu0 = lambda_D(tower, 0)
    system1, mu1 = lambda_D(tower, 1)
    inner_bases = (mu0.rows(), mu1.rows())

    decomposition = BlockDecomposition(
        p=p, inner=tower, n=n, g=p, basis=basis, elements=elements,
        u_dot=u_dot, rho_dots=rho_dots,
        ties=(system0, system1), inner_bases=inner_bases,
        lattice=zeros(0, 0, ring))
    rows = []
    for k in range(n):
        for l in range(n):
            for row in inner_bases[0 if k <= l else 1]:
                rows.append(flatten(decomposition.place(
                    unflatten(row, p), k, l)))
    decomposition.lattice = np.vstack(rows)
    logger.debug(f'block lattice for p={p}: {len(rows)} generators')
    return decomposition


def xi_basis(blocks: BlockDecomposition) -> np.ndarray:
    """S-basis ẋ ρ̇ of Ξ, x running through the basis t^i u^j of U."""
    basis, elements = blocks.basis, blocks.elements
    rows = []
    for x in elements:
        x_dot = to_matrix([basis.coordinates(y * x) for y in elements],
                          blocks.ring)
        for r in sorted(blocks.rho_dots):
            rows.append(flatten(x_dot @ blocks.rho_dots[r]))
    logger.debug(f'p={blocks.p}: {len(rows)} generators of Xi over S')
    return np.vstack(rows)


def _random_element(blocks: BlockDecomposition, rng: random.Random,
                    terms: int = 3) -> np.ndarray:
    d = blocks.dimension
    out = zeros(d, d, blocks.ring)
    for _ in range(terms):
        row = blocks.lattice[rng.randrange(blocks.lattice.shape[0])]
        out = out + unflatten(row, d) * blocks.ring.element(rng.randint(-3, 3))
    return out


def closure_sample(blocks: BlockDecomposition, samples: int, seed: int
                   ) -> List[int]:
    """Indices of sampled products that leave the block lattice."""
    rng = random.Random(seed)
    return [q for q in range(samples)
            if not blocks.contains(_random_element(blocks, rng) @
                                   _random_element(blocks, rng))]


def verify_nd3(p: int, samples: int = 50, seed: int = 0) -> List[Check]:
    """
    Ξ equals the block lattice: containment of the generators and equal
    colengths in Γ.
    """
    blocks = build_blocks(p)
    tower, n, g = blocks.inner, blocks.n, blocks.g
    h = n * g
    d = blocks.dimension
    gamma = identity(d * d, blocks.ring)
    checks = []

    t_xi = np.vstack([flatten(tower.t_dot @ unflatten(row, g))
                      for row in blocks.inner_bases[0]])
    checks.append(equality_check('shifted ties describe t Xi\'',
                                 same_lattice(t_xi, blocks.inner_bases[1],
                                              tower), True))

    units_ok = all(
        matrices_equal(blocks.block_unit(k, l) @ blocks.block_unit(k2, l2),
                       blocks.block_unit(k, l2) if l == k2
                       else zeros(d, d, blocks.ring))
        for k in range(n) for l in range(n)
        for k2 in range(n) for l2 in range(n))
    checks.append(equality_check('block units multiply as matrix units',
                                 units_ok, True))

    bad = blocks.violations(blocks.u_dot)
    checks.append(check('u lies in the block lattice', not bad,
                        expected='no violated block condition',
                        actual='contained' if not bad
                        else f'{len(bad)} violated', detail='; '.join(bad)))
    outside = [r for r, m in sorted(blocks.rho_dots.items())
               if not blocks.contains(m)]
    checks.append(check('every rho lies in the block lattice', not outside,
                        expected='all of H',
                        actual='all of H' if not outside
                        else f'fails for {outside}'))

    broken = closure_sample(blocks, samples, seed)
    checks.append(check('block lattice is closed under multiplication',
                        not broken, expected=f'{samples} products inside',
                        actual=f'{samples - len(broken)} products inside'))

    disc_u = cyclotomic_discriminant_valuation(p, 2)
    disc_t = tower.ramification.discriminant_valuation
    xi = xi_basis(blocks)
    xi_colength = colength(xi, gamma, tower)
    block_colength = colength(blocks.lattice, gamma, tower)
    checks.append(equality_check('colength of Xi by discriminant',
                                 xi_colength, h * disc_u // 2,
                                 detail=f'val_s(disc U|S) = {disc_u}'))
    checks.append(equality_check(
        'colength of the block lattice by formula',
        block_colength, h * n * disc_t // 2 + h * (n - 1) // 2,
        detail=f'val_s(disc T|S) = {disc_t}'))
    checks.append(equality_check('Xi equals the block lattice',
                                 same_lattice(xi, blocks.lattice, tower),
                                 True))
    checks += corner_checks(blocks)
    logger.info(f'block decomposition for p={p}: verification done')
    return checks


def corner_checks(blocks: BlockDecomposition) -> List[Check]:
    """
    The idempotent e = 1 ⊗ e''_{0,0} cuts the corner e Ξ e out of the block
    lattice; it is Ξ' again, of the same S-rank as End_{Ξ'}(Ξ').
    """
    d, g = blocks.dimension, blocks.g
    e = blocks.block_unit(0, 0)
    corner = np.vstack([flatten(e @ unflatten(row, d) @ e)
                        for row in blocks.lattice])
    placed = np.vstack([flatten(blocks.place(unflatten(row, g), 0, 0))
                        for row in blocks.inner_bases[0]])
    rank = row_basis(corner, blocks.ring).shape[0]
    return [
        equality_check('corner e Xi e equals Xi\'',
                       same_lattice(corner, placed, blocks.inner), True),
        equality_check('rank of the corner', rank, g * g),
    ]


def verify_nd7(p: int, max_degree: int = 4) -> List[Check]:
    """
    Ext over U≀H against Ext over T≀G: equal modules in degrees
    0..max_degree, and vanishing products of degree-1 classes on both sides.
    """
    p = check_odd_prime(p)
    tower = build_tower(p, 2, 'pi')
    action = oracle.cyclotomic_action(p, 2)
    maps = cohom.resolution_elements(tower)
    checks = []
    for i in range(max_degree + 1):
        checks.append(equality_check(
            f'Ext^{i} over U wr H equals Ext^{i} over T wr G',
            str(oracle.classical_ext(action, i)),
            str(cohom.ext_module(tower, i, maps))))

    odd = [j for j in range(p) if j != tower.b_bar]
    xi_zero = all(cohom.structure_constant(p, tower.b, j, k).vanishes
                  for j in odd for k in odd)
    complex_ = oracle.BarComplex(action)
    reps = [oracle.BarCochain(1, row)
            for row in complex_.homology(1).cycles]
    u_zero = all(complex_.is_coboundary(oracle.bar_cup(complex_, a, b))
                 for a in reps for b in reps)
    checks.append(equality_check('H^1 products vanish over T wr G',
                                 xi_zero, True))
    checks.append(equality_check('H^1 products vanish over U wr H',
                                 u_zero, True))
    logger.info(f'reduction isomorphism for p={p}: verification done')
    return checks
