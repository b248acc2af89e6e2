"""
The C_{p^2} tower U = Z_(p)[π_3] over S = Z_(p).

G is generated by σ: ζ_{p^3} -> ζ_{p^3}^(1+p), and the Sen element
v = u u^σ ... u^(σ^(p-1)) replaces t. Matrices are taken in the S-basis
(u^i v^j), ordered by p*i + j; the basis element u^i v^j has u-valuation
i + p*j, so Λ and its ideals u̇^k Λ are cut out entrywise.

The derivation orders Λ^D and Λ^{D,E} live in p^4-dimensional coordinate
spaces, so their colengths are computed from residues modulo a power of p
rather than over Q.
"""
import dataclasses
import functools
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np
import yaml

from galoisties.config import get_compute_conf
from galoisties.errors import DomainError, InternalConsistencyError, \
    ResourceError, UsageError
from galoisties.exact import PLUS_INFINITY, RationalDVR, Valuation, \
    check_odd_prime, colength, identity, matrices_equal, \
    modular_image_length, modular_smith_exponents, residues, to_matrix
from galoisties.fields import AmbientField, Automorphism, FieldElement, \
    QBasis, make_pi
from galoisties.logging import get_logger
from galoisties.report import Check, check, equality_check, evidence, \
    run_checks
from galoisties.wedder import ideal_exponents, ideal_membership

logger = get_logger(__name__)

DATA = Path(__file__).parent / 'data' / 'reduced_matrices.yaml'

# largest p handled without forcing
LARGEST_TOWER = 7
LARGEST_LATTICE = 5

# colengths (Λ^{D,E} in Ξ, Λ^D in Λ^{D,E}, Λ in Λ^D, Γ in Λ), known values
KNOWN_CHAINS = {
    3: (0, 18, 45, 36),
    5: (100, 100, 350, 300),
}

# displayed reductions: name -> (generator, k) with generator ≡ name mod u̇^k Λ
REDUCTIONS = {
    3: {'u_tri': ('u', 6), 'u_dd': ('u', 3),
        'v_tri': ('v', 15), 'v_dd': ('v', 12)},
    5: {'u_tri': ('u', 31), 'u_dd': ('u', 5),
        'v_tri': ('v', 40), 'v_dd': ('v', 30)},
}

# the displayed σ̇ is the matrix of σ^k, for p = 3 the generator ζ -> ζ^(-2)
DISPLAYED_SIGMA_POWER = {3: 5}


@dataclasses.dataclass(eq=False)
class AppendixTower:
    p: int
    ambient: AmbientField
    ring: RationalDVR
    u: FieldElement
    v: FieldElement
    sigma: Automorphism

    def __str__(self):
        return f'appendix-tower(p={self.p})'

    @property
    def g(self) -> int:
        return self.p * self.p

    @property
    def weights(self) -> Tuple[int, ...]:
        p = self.p
        return tuple(i + p * j for i in range(p) for j in range(p))

    @property
    def elements(self) -> List[FieldElement]:
        p = self.p
        return [self.u ** i * self.v ** j for i in range(p) for j in range(p)]

    def val_u(self, x: FieldElement) -> Valuation:
        return self.ambient.val_subfield(x, self.g)

    @functools.cached_property
    def basis(self) -> QBasis:
        """
        :raise InternalConsistencyError: when (u^i v^j) is not an S-basis.
        """
        elements = self.elements
        powers = QBasis([self.u ** k for k in range(self.g)])
        change = to_matrix([powers.coordinates(x) for x in elements],
                           self.ring)
        try:
            length = colength(change, identity(self.g, self.ring), self.ring)
        except DomainError:
            length = None
        if length != 0:
            raise InternalConsistencyError(
                f'{self}: (u^i v^j) is not an S-basis of U')
        return QBasis(elements)

    def _matrix(self, image: Callable[[FieldElement], FieldElement]
                ) -> np.ndarray:
        return to_matrix([self.basis.coordinates(image(x))
                          for x in self.elements], self.ring)

    @functools.cached_property
    def u_dot(self) -> np.ndarray:
        return self._matrix(lambda x: x * self.u)

    @functools.cached_property
    def v_dot(self) -> np.ndarray:
        return self._matrix(lambda x: x * self.v)

    @functools.cached_property
    def sigma_dot(self) -> np.ndarray:
        return self._matrix(self.sigma)

    def sigma_power_dot(self, k: int) -> np.ndarray:
        return self._matrix(self.sigma.power(k))


def build_appendix_tower(p: int, force: Optional[bool] = None
                         ) -> AppendixTower:
    """
    :raise ResourceError: for p beyond 7 unless forced.
    :raise InternalConsistencyError: when the displacement valuations of u
      or v are off.
    """
    p = check_odd_prime(p)
    force = get_compute_conf().force_large if force is None else force
    if p > LARGEST_TOWER and not force:
        raise ResourceError('appendix tower prime', p, LARGEST_TOWER)

    ambient = AmbientField(p, 3)
    u = make_pi(p, 3, ambient)
    sigma = ambient.automorphism(1 + p)
    v = ambient.one
    for i in range(p):
        v = v * sigma.power(i)(u)
    tower = AppendixTower(p=p, ambient=ambient, ring=RationalDVR(p), u=u,
                          v=v, sigma=sigma)

    shifts = (tower.val_u(sigma(u) - u), tower.val_u(sigma(v) - v))
    if shifts != (2, 1 + 2 * p):
        raise InternalConsistencyError(
            f'{tower}: val_u(u^σ - u), val_u(v^σ - v) = {shifts}, '
            f'expected {(2, 1 + 2 * p)}')
    logger.debug(f'built {tower}, σ of order {sigma.order}')
    return tower


# -- conjecture on U ----------------------------------------------------------

def conjecture_valuation(tower: AppendixTower, k: int) -> Valuation:
    """val_u of the congruence expression for τ = σ^k."""
    p, u, v = tower.p, tower.u, tower.v
    tau = tower.sigma.power(k)
    ut, vt = tau(u), tau(v)
    x = (v - vt) * 2 + ut ** p * (u - ut) * u ** (p - 1) + \
        (ut ** (2 * p - 1) - ut ** (2 * p)) * (u - ut)
    return tower.val_u(x)


def check_conjecture_i(tower: AppendixTower, threads: Optional[int] = None
                       ) -> List[Check]:
    """One evidence entry per τ in C_{p^2}, then a summary entry."""
    p = tower.p
    bound = 2 * p + 3
    threads = get_compute_conf().threads if threads is None else threads

    def task(k):
        def run():
            val = conjecture_valuation(tower, k)
            holds = val is PLUS_INFINITY or val >= bound
            return [evidence(f'tau = sigma^{k}', expected=f'>= {bound}',
                             actual=val, detail='holds' if holds
                             else 'fails')]
        return run

    checks = run_checks([task(k) for k in range(p * p)], threads)
    held = sum(1 for c in checks if c.detail == 'holds')
    checks.append(evidence('congruence for all tau', expected=p * p,
                           actual=f'holds for {held} of {p * p}'))
    logger.info(f'{tower}: congruence holds for {held} of {p * p} elements')
    return checks


# -- lattices by congruences --------------------------------------------------

Images = Callable[[np.ndarray], Iterator[Tuple[np.ndarray, int]]]


@dataclasses.dataclass(eq=False)
class ModularOrder:
    """
    A suborder of Λ given by its conditions: for each pair (image, k) the
    image of f must lie in u̇^k Λ. Images are computed on residues.
    """
    tower: AppendixTower
    images: Images
    precision: int
    _length: Optional[int] = dataclasses.field(default=None, repr=False)

    @property
    def modulus(self) -> int:
        return self.tower.p ** self.precision

    def _moduli(self, k: int) -> np.ndarray:
        c = ideal_exponents(k, self.tower).astype(np.int64).reshape(-1)
        if c.max() > self.precision:
            raise UsageError(f'precision {self.precision} is below the '
                             f'required {int(c.max())}')
        return c

    def lambda_units(self) -> np.ndarray:
        """The S-basis s^c E_{m,n} of Λ as a batch of residue matrices."""
        g, p = self.tower.g, self.tower.p
        c = ideal_exponents(0, self.tower)
        out = np.zeros((g * g, g, g), dtype=np.int64)
        for m in range(g):
            for n in range(g):
                out[m * g + n, m, n] = p ** max(0, int(c[m, n])) % \
                    self.modulus
        return out

    def conditions(self) -> Tuple[np.ndarray, np.ndarray]:
        """Columns over the coordinates of Λ and their exponents."""
        batch = self.lambda_units()
        n = batch.shape[0]
        columns, moduli = [], []
        for image, k in self.images(batch):
            columns.append(image.reshape(n, -1))
            moduli.append(self._moduli(k))
        return np.concatenate(columns, axis=1), np.concatenate(moduli)

    def colength(self) -> int:
        """S-length of Λ modulo the order."""
        if self._length is None:
            columns, moduli = self.conditions()
            self._length = modular_image_length(columns, moduli,
                                                self.tower.p)
            logger.debug(f'{self.tower}: order of colength {self._length} '
                         f'in Lambda, {columns.shape[1]} conditions')
        return self._length

    def contains(self, batch: np.ndarray) -> np.ndarray:
        """Per element of the batch, whether it satisfies every condition."""
        p = self.tower.p
        ok = np.ones(batch.shape[0], dtype=bool)
        for image, k in self.images(batch % self.modulus):
            flat = image.reshape(batch.shape[0], -1)
            moduli = np.array([p ** max(0, int(c)) for c in self._moduli(k)],
                              dtype=np.int64)
            ok &= (flat % moduli == 0).all(axis=1)
        return ok


def intersect(a: ModularOrder, b: ModularOrder) -> ModularOrder:
    if a.precision != b.precision:
        raise UsageError(f'orders computed at precisions {a.precision} and '
                         f'{b.precision}')

    def images(batch):
        yield from a.images(batch)
        yield from b.images(batch)
    return ModularOrder(a.tower, images, a.precision)


def _commutator(x: np.ndarray, batch: np.ndarray, q: int) -> np.ndarray:
    """D_x on a batch: f x - x f."""
    return (np.matmul(batch, x) % q - np.matmul(x, batch) % q) % q


def derivation_order(tower: AppendixTower, u: np.ndarray, v: np.ndarray,
                     precision: int) -> ModularOrder:
    """Λ((u, v), (p-1, p-1), (2, 2p+1)) with respect to u̇Λ."""
    p = tower.p
    q = p ** precision
    u, v = residues(u, p, precision), residues(v, p, precision)

    def images(batch):
        rows = [batch]
        for _ in range(1, p):
            rows.append(_commutator(v, rows[-1], q))
        for j, start in enumerate(rows):
            image = start
            for i in range(p):
                yield image, 2 * i + (2 * p + 1) * j
                image = _commutator(u, image, q)

    return ModularOrder(tower, images, precision)


def e_operator(u: np.ndarray, v: np.ndarray, p: int, q: int
               ) -> Callable[[np.ndarray], np.ndarray]:
    """E(f) = 2 D_v(f) + u^p D_u(f) u^(p-1) + (u^(2p-1) - u^(2p)) D_u(f)."""
    powers = [np.identity(u.shape[0], dtype=np.int64)]
    for _ in range(2 * p):
        powers.append(powers[-1] @ u % q)
    left = (powers[2 * p - 1] - powers[2 * p]) % q

    def apply(batch):
        du = _commutator(u, batch, q)
        out = 2 * _commutator(v, batch, q)
        out += np.matmul(np.matmul(powers[p], du) % q, powers[p - 1]) % q
        out += np.matmul(left, du) % q
        return out % q

    return apply


def e_order(tower: AppendixTower, u: np.ndarray, v: np.ndarray,
            precision: int) -> ModularOrder:
    """f with D_u^i E^j(f) in u̇^(2i + (2p+3)j) Λ for i, j in [0, p-1]."""
    p = tower.p
    q = p ** precision
    u, v = residues(u, p, precision), residues(v, p, precision)
    e = e_operator(u, v, p, q)

    def images(batch):
        start = batch
        for j in range(p):
            image = start
            for i in range(p):
                yield image, 2 * i + (2 * p + 3) * j
                image = _commutator(u, image, q)
            start = e(start)

    return ModularOrder(tower, images, precision)


def lambda_d(tower: AppendixTower, precision: Optional[int] = None
             ) -> ModularOrder:
    precision = precision or get_compute_conf().appendix_precision
    return derivation_order(tower, tower.u_dot, tower.v_dot, precision)


def lambda_de(tower: AppendixTower, precision: Optional[int] = None
              ) -> ModularOrder:
    precision = precision or get_compute_conf().appendix_precision
    return intersect(lambda_d(tower, precision),
                     e_order(tower, tower.u_dot, tower.v_dot, precision))


def xi_batch(tower: AppendixTower, precision: int) -> np.ndarray:
    """Residues of the S-basis u̇^i v̇^j σ̇^k of Ξ."""
    p, g = tower.p, tower.g
    q = p ** precision
    u = residues(tower.u_dot, p, precision)
    v = residues(tower.v_dot, p, precision)
    sigma = residues(tower.sigma_dot, p, precision)
    elements = []
    u_power = np.identity(g, dtype=np.int64)
    for i in range(p):
        uv = u_power
        for j in range(p):
            elements.append(uv)
            uv = uv @ v % q
        u_power = u_power @ u % q
    out = []
    for x in elements:
        sigma_power = np.identity(g, dtype=np.int64)
        for _ in range(g):
            out.append(x @ sigma_power % q)
            sigma_power = sigma_power @ sigma % q
    return np.stack(out)


def xi_colength(tower: AppendixTower, precision: int) -> int:
    """
    :raise InternalConsistencyError: when an elementary divisor reaches the
      precision, so that the residues do not determine the colength.
    """
    g = tower.g
    rows = xi_batch(tower, precision).reshape(g * g, g * g)
    exponents = modular_smith_exponents(rows, tower.p, precision)
    if len(exponents) < g * g:
        raise InternalConsistencyError(
            f'{tower}: precision {precision} too low for Xi, '
            f'{g * g - len(exponents)} divisors unresolved')
    return sum(exponents)


def gamma_lambda_colength(tower: AppendixTower) -> int:
    c = ideal_exponents(0, tower)
    return int(sum(max(0, int(x)) for x in c.reshape(-1)))


def xi_colength_formula(p: int) -> int:
    return p * p * (p * p + (p * p - p - 2) // 2)


def _guard_lattices(tower: AppendixTower, force: Optional[bool]):
    force = get_compute_conf().force_large if force is None else force
    if tower.p > LARGEST_LATTICE and not force:
        raise ResourceError('appendix lattice dimension', tower.g ** 2,
                            LARGEST_LATTICE ** 4)
    if tower.p > LARGEST_LATTICE:
        logger.warning(f'{tower}: forced lattice work in dimension '
                       f'{tower.g ** 2}')


def colength_chain(tower: AppendixTower, precision: Optional[int] = None,
                   force: Optional[bool] = None
                   ) -> Tuple[Tuple[int, int, int, int], List[Check]]:
    """
    Colengths of Ξ ⊆ Λ^{D,E} ⊆ Λ^D ⊆ Λ ⊆ Γ, with the checks behind them.

    :raise ResourceError: for p = 7 unless forced.
    """
    _guard_lattices(tower, force)
    precision = precision or get_compute_conf().appendix_precision
    p = tower.p

    d = lambda_d(tower, precision)
    de = lambda_de(tower, precision)
    gamma_lambda = gamma_lambda_colength(tower)
    lambda_d_length = d.colength()
    lambda_de_length = de.colength()
    xi_length = xi_colength(tower, precision)

    inside = de.contains(xi_batch(tower, precision))
    chain = (xi_length - gamma_lambda - lambda_de_length,
             lambda_de_length - lambda_d_length, lambda_d_length,
             gamma_lambda)
    checks = [
        check('Xi lies in Lambda^(D,E)', bool(inside.all()),
              expected=p ** 4, actual=int(inside.sum()),
              detail='basis elements u^i v^j sigma^k satisfying all '
                     'conditions'),
        equality_check('colength of Xi in Gamma', xi_length,
                       xi_colength_formula(p)),
        equality_check('sum of the colength chain', sum(chain),
                       xi_colength_formula(p)),
        equality_check('D_u and D_v commute',
                       matrices_equal(tower.u_dot @ tower.v_dot,
                                      tower.v_dot @ tower.u_dot), True),
    ]
    if p in KNOWN_CHAINS:
        checks.append(equality_check('colength chain', chain,
                                     KNOWN_CHAINS[p]))
    else:
        checks.append(evidence('colength chain', actual=chain))
    logger.info(f'{tower}: colength chain {chain}')
    return chain, checks


# -- displayed reductions -----------------------------------------------------

@functools.lru_cache()
def _load() -> dict:
    with open(DATA) as f:
        return yaml.safe_load(f)


def load_matrix(name: str, p: int) -> np.ndarray:
    """
    A displayed matrix from the package data.

    :raise UsageError: when no matrix of that name is stored for p.
    """
    entry = _load().get(name, {}).get(p)
    if entry is None:
        raise UsageError(f'no displayed matrix {name!r} for p = {p}')
    size = entry['size']
    out = np.full((size, size), Fraction(0), dtype=object)
    for r, row in enumerate(entry['rows']):
        for col, value in row:
            out[r, col] = Fraction(value)
    return out


def reduced_matrices(tower: AppendixTower, precision: Optional[int] = None
                     ) -> List[Check]:
    """
    Congruences of u̇ and v̇ with the displayed reductions, and the orders
    obtained after substituting them.
    """
    p = tower.p
    if p not in REDUCTIONS:
        raise UsageError(f'displayed reductions exist for p in '
                         f'{sorted(REDUCTIONS)}, got {p}')
    precision = precision or get_compute_conf().appendix_precision
    generators = {'u': tower.u_dot, 'v': tower.v_dot}
    checks = []

    if p in DISPLAYED_SIGMA_POWER:
        k = DISPLAYED_SIGMA_POWER[p]
        displayed = {'u_dot': tower.u_dot, 'v_dot': tower.v_dot,
                     'sigma_dot': tower.sigma_power_dot(k)}
        for name, matrix in displayed.items():
            label = f'sigma^{k}_dot' if name == 'sigma_dot' else name
            checks.append(equality_check(
                f'{label} equals the displayed matrix',
                matrices_equal(matrix, load_matrix(name, p)), True))

    reduced: Dict[str, np.ndarray] = {}
    for name, (generator, k) in REDUCTIONS[p].items():
        reduced[name] = load_matrix(name, p)
        diff = generators[generator] - reduced[name]
        checks.append(equality_check(
            f'{generator}_dot = {name} mod u^{k} Lambda',
            ideal_membership(diff, k, tower), True))

    d = lambda_d(tower, precision)
    d_reduced = derivation_order(tower, reduced['u_dd'], reduced['v_dd'],
                                 precision)
    checks.append(equality_check('Lambda^D from the reduced generators',
                                 same_order(d, d_reduced), True))

    de = lambda_de(tower, precision)
    de_reduced = intersect(d, e_order(tower, reduced['u_tri'],
                                      reduced['v_tri'], precision))
    checks.append(equality_check('Lambda^(D,E) from the reduced generators',
                                 same_order(de, de_reduced), True))
    return checks


def same_order(a: ModularOrder, b: ModularOrder) -> bool:
    """Equal iff both have the colength of their intersection."""
    both = intersect(a, b).colength()
    return a.colength() == both and b.colength() == both


def run_appendix(p: int, what: str = 'all', force: Optional[bool] = None
                 ) -> List[Check]:
    """
    :param what: ``conjecture``, ``colengths``, ``matrices`` or ``all``.
    :raise UsageError: for an unknown selection.
    """
    if what not in ('conjecture', 'colengths', 'matrices', 'all'):
        raise UsageError(f'unknown appendix check {what!r}')
    tower = build_appendix_tower(p, force)
    checks = []
    if what in ('conjecture', 'all'):
        checks += check_conjecture_i(tower)
    if what in ('colengths', 'all'):
        checks += colength_chain(tower, force=force)[1]
    if what in ('matrices', 'all') and tower.p in REDUCTIONS:
        checks += reduced_matrices(tower)
    return checks
