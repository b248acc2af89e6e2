"""
Exact scalars, valuations and linear algebra over a discrete valuation ring.

Matrices are numpy arrays of dtype ``object`` holding exact scalars, either
:class:`fractions.Fraction` or :class:`galoisties.fields.FieldElement`.
Vectors are rows and maps act on the right: a vector ``v`` is sent to
``v @ M``. A presentation matrix therefore lists one relation per row.
"""
import dataclasses
import functools
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from galoisties.errors import DomainError, InternalConsistencyError, \
    UsageError
from galoisties.logging import get_logger

logger = get_logger(__name__)

BigRat = Fraction


class _PlusInfinity:
    """The valuation of zero. Compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'PLUS_INFINITY'

    def __str__(self):
        return '+inf'

    def __hash__(self):
        return hash('PLUS_INFINITY')

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError('+inf - +inf')
        return self


PLUS_INFINITY = _PlusInfinity()

Valuation = Union[int, _PlusInfinity]


@functools.lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    return bool(sympy.isprime(p))


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) \
            or not _is_prime(int(p)):
        raise UsageError(f'{p!r} is not a prime')
    return int(p)


def check_odd_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) \
            or p < 3 or not _is_prime(int(p)):
        raise UsageError('p must be an odd prime')
    return int(p)


def val_p(x, p) -> Valuation:
    """
    Exponent of the prime ``p`` in the rational number ``x``.

    :param x: anything :class:`fractions.Fraction` accepts.
    :param p: a prime; anything else is a usage error.
    :return: an integer, or :data:`PLUS_INFINITY` exactly when ``x == 0``.
    """
    p = check_prime(p)
    x = Fraction(x)
    if x == 0:
        return PLUS_INFINITY
    return int(sympy.multiplicity(p, abs(x.numerator))) - \
        int(sympy.multiplicity(p, x.denominator))


@functools.lru_cache(maxsize=None)
def binomial(a: int, b: int) -> int:
    """C(a, b), zero unless 0 <= b <= a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return int(sympy.binomial(a, b))


class DiscreteValuationRing(ABC):
    """
    The valuation ring S of a field K with a distinguished uniformizer s.

    Elements are elements of K; membership in S is decided by :meth:`val`.
    """
    p: int

    @abstractmethod
    def val(self, x) -> Valuation:
        pass

    @abstractmethod
    def element(self, x):
        """Coerce an integer, rational or field element into K."""
        pass

    @property
    @abstractmethod
    def uniformizer(self):
        pass

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    def is_integral(self, x) -> bool:
        return self.val(x) >= 0

    def power(self, k: int):
        """s^k for any integer k."""
        s = self.uniformizer
        return s ** k if k >= 0 else self.one / s ** (-k)


@dataclasses.dataclass(frozen=True)
class RationalDVR(DiscreteValuationRing):
    """Z_(p) inside Q, with uniformizer p unless another one is given."""
    p: int
    s: Optional[Fraction] = None

    def __post_init__(self):
        check_prime(self.p)
        if self.s is not None and val_p(self.s, self.p) != 1:
            raise DomainError(f'{self.s} is not a uniformizer of Z_({self.p})')

    def val(self, x) -> Valuation:
        return val_p(x, self.p)

    def element(self, x):
        return Fraction(x)

    @property
    def uniformizer(self):
        return Fraction(self.p) if self.s is None else Fraction(self.s)

    def __str__(self):
        return f'Z_({self.p})'


# -- matrices -----------------------------------------------------------------

def to_matrix(rows: Sequence[Sequence[Any]], ring=None) -> np.ndarray:
    """Build an object matrix, coercing every entry into the ring's field."""
    convert = ring.element if ring is not None else Fraction
    rows = [list(row) for row in rows]
    ncols = len(rows[0]) if rows else 0
    out = np.empty((len(rows), ncols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise UsageError('ragged matrix rows')
        for j, x in enumerate(row):
            out[i, j] = convert(x)
    return out


def zeros(nrows: int, ncols: int, ring) -> np.ndarray:
    return np.full((nrows, ncols), ring.zero, dtype=object)


def identity(n: int, ring) -> np.ndarray:
    out = zeros(n, n, ring)
    for i in range(n):
        out[i, i] = ring.one
    return out


def as_rows(x: np.ndarray) -> np.ndarray:
    return x.reshape(1, -1) if x.ndim == 1 else x


def min_valuation(matrix: np.ndarray, ring) -> Valuation:
    best = PLUS_INFINITY
    for x in np.asarray(matrix).flat:
        if x:
            best = min(best, ring.val(x))
    return best


def is_zero_matrix(matrix: np.ndarray) -> bool:
    return not any(bool(x) for x in np.asarray(matrix).flat)


def is_integral_matrix(matrix: np.ndarray, ring) -> bool:
    return min_valuation(matrix, ring) >= 0


def matrices_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and is_zero_matrix(a - b)


# -- Smith forms ----------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class SmithReport:
    # valuations of the nonzero elementary divisors, ascending
    elementary_divisor_valuations: Tuple[int, ...]

    # generators of the cokernel which stay free (columns beyond the rank)
    free_rank_defect: int

    @property
    def length(self) -> Valuation:
        if self.free_rank_defect:
            return PLUS_INFINITY
        return sum(self.elementary_divisor_valuations)


@dataclasses.dataclass
class SmithForm:
    diagonal: Tuple[Any, ...]
    valuations: Tuple[int, ...]
    rank: int
    shape: Tuple[int, int]

    # U with U @ M @ V diagonal, when requested
    left: Optional[np.ndarray] = None

    # V, when requested
    right: Optional[np.ndarray] = None

    # the requested right-hand side multiplied by V
    rhs: Optional[np.ndarray] = None

    def report(self) -> SmithReport:
        return SmithReport(tuple(self.valuations), self.shape[1] - self.rank)


def _find_pivot(a: np.ndarray, vals: np.ndarray, k: int, ring, floor):
    best = None
    nrows, ncols = a.shape
    for i in range(k, nrows):
        for j in range(k, ncols):
            v = vals[i, j]
            if v is None:
                x = a[i, j]
                v = ring.val(x) if x else PLUS_INFINITY
                vals[i, j] = v
            if v is PLUS_INFINITY:
                continue
            if best is None or v < best[2]:
                best = (i, j, v)
                if floor is not None and v <= floor:
                    return best
    return best


def smith_form(matrix: np.ndarray, ring, *, left: bool = False,
               right: bool = False, rhs: Optional[np.ndarray] = None
               ) -> SmithForm:
    """
    Diagonalize a matrix over K by row and column operations over S.

    Each step pivots on an entry of minimal valuation in the remaining
    block, the first one in row-major order. All elimination factors are
    therefore integral, so the transforms are invertible over S even when
    the matrix itself has entries outside S.

    :param matrix: object matrix over K.
    :param ring: the discrete valuation ring S.
    :param left: record U with U @ matrix @ V = D.
    :param right: record V.
    :param rhs: rows aligned with the columns of ``matrix``; the column
      operations are replayed on them, giving ``rhs @ V`` without storing V.
    """
    a = np.array(matrix, dtype=object, copy=True)
    nrows, ncols = a.shape
    u = identity(nrows, ring) if left else None
    v = identity(ncols, ring) if right else None
    w = np.array(as_rows(rhs), dtype=object, copy=True) \
        if rhs is not None else None
    vals = np.full((nrows, ncols), None, dtype=object)

    diagonal: List[Any] = []
    valuations: List[int] = []
    floor = None
    for k in range(min(nrows, ncols)):
        pivot = _find_pivot(a, vals, k, ring, floor)
        if pivot is None:
            break
        r, c, floor = pivot

        if r != k:
            a[[k, r]] = a[[r, k]]
            vals[[k, r]] = vals[[r, k]]
            if u is not None:
                u[[k, r]] = u[[r, k]]
        if c != k:
            a[:, [k, c]] = a[:, [c, k]]
            vals[:, [k, c]] = vals[:, [c, k]]
            if v is not None:
                v[:, [k, c]] = v[:, [c, k]]
            if w is not None:
                w[:, [k, c]] = w[:, [c, k]]

        d = a[k, k]
        below = [i for i in range(k + 1, nrows) if a[i, k]]
        beside = [j for j in range(k + 1, ncols) if a[k, j]]

        if below:
            factors = np.array([a[i, k] / d for i in below], dtype=object)
            cols = [k] + beside
            a[np.ix_(below, cols)] -= np.outer(factors, a[k, cols])
            vals[np.ix_(below, cols)] = None
            if u is not None:
                u[below] -= np.outer(factors, u[k])
        if beside:
            factors = np.array([a[k, j] / d for j in beside], dtype=object)
            a[k, beside] = ring.zero
            vals[k, beside] = PLUS_INFINITY
            if v is not None:
                v[:, beside] -= np.outer(v[:, k], factors)
            if w is not None:
                w[:, beside] -= np.outer(w[:, k], factors)

        diagonal.append(d)
        valuations.append(floor)

    logger.debug(f'smith form of {nrows}x{ncols}: rank {len(diagonal)}')
    return SmithForm(diagonal=tuple(diagonal), valuations=tuple(valuations),
                     rank=len(diagonal), shape=(nrows, ncols),
                     left=u, right=v, rhs=w)


def smith_over_dvr(matrix: np.ndarray, ring) -> SmithReport:
    """Elementary divisor valuations of a matrix with entries in S."""
    if min_valuation(matrix, ring) < 0:
        raise DomainError('matrix has an entry of negative valuation')
    return smith_form(matrix, ring).report()


def module_length(presentation: np.ndarray, ring) -> Valuation:
    """Length of the cokernel of ``x -> x @ presentation`` over S."""
    return smith_over_dvr(presentation, ring).length


# -- solving ------------------------------------------------------------------

def solve_left(matrix: np.ndarray, rhs: np.ndarray, ring, *,
               integral: bool = True) -> Optional[np.ndarray]:
    """
    Some X with ``X @ matrix == rhs``, or None when there is none.

    :param integral: require X to have entries in S instead of K.
    """
    single = rhs.ndim == 1
    rhs = as_rows(rhs)
    if rhs.shape[1] != matrix.shape[1]:
        raise UsageError(f'dimension mismatch: {matrix.shape} vs {rhs.shape}')

    sf = smith_form(matrix, ring, left=True, rhs=rhs)
    nrows = matrix.shape[0]
    out = zeros(rhs.shape[0], nrows, ring)
    for q, row in enumerate(sf.rhs):
        if any(bool(x) for x in row[sf.rank:]):
            return None
        for k in range(sf.rank):
            z = row[k] / sf.diagonal[k]
            if integral and z and ring.val(z) < 0:
                return None
            out[q, k] = z
    solution = out @ sf.left if nrows else out
    return solution[0] if single else solution


def solve_over_dvr(matrix: np.ndarray, vector: np.ndarray, ring
                   ) -> Optional[np.ndarray]:
    """Some x over S with ``matrix @ x == vector``, or None."""
    if matrix.shape[0] != len(vector):
        raise UsageError(
            f'dimension mismatch: {matrix.shape} vs {len(vector)}')
    return solve_left(matrix.T, np.asarray(vector, dtype=object), ring)


def left_kernel(matrix: np.ndarray, ring) -> np.ndarray:
    """An S-basis (as rows) of {x in S^n : x @ matrix == 0}."""
    sf = smith_form(matrix, ring, left=True)
    return sf.left[sf.rank:]


def express_in_basis(vectors: np.ndarray, basis: np.ndarray, ring
                     ) -> np.ndarray:
    """Coordinates over K of row vectors in terms of linearly independent rows."""
    coords = solve_left(basis, vectors, ring, integral=False)
    if coords is None:
        raise DomainError('vectors do not lie in the span of the basis')
    return coords


def colength(sub: np.ndarray, sup: np.ndarray, ring) -> Valuation:
    """
    S-length of span(sup) / span(sub) for lattices given by generating rows.

    :raise DomainError: when ``sub`` is not contained in ``sup``.
    """
    sup_basis = row_basis(sup, ring)
    coords = express_in_basis(sub, sup_basis, ring)
    if min_valuation(coords, ring) < 0:
        raise DomainError('sub-lattice is not contained in the super-lattice')
    return module_length(coords, ring)


def is_contained(sub: np.ndarray, sup: np.ndarray, ring) -> bool:
    try:
        colength(sub, sup, ring)
    except DomainError:
        return False
    return True


def same_lattice(a: np.ndarray, b: np.ndarray, ring) -> bool:
    return is_contained(a, b, ring) and is_contained(b, a, ring)


def row_basis(generators: np.ndarray, ring) -> np.ndarray:
    """An S-basis of the lattice spanned by the given rows."""
    sf = smith_form(generators, ring, left=True)
    # rows of U @ G past the rank vanish
    return sf.left[:sf.rank] @ generators


def integral_preimage(functionals: np.ndarray, ring
                      ) -> Tuple[np.ndarray, int]:
    """
    The lattice of c in S^N with ``c @ functionals`` integral.

    :return: an S-basis as rows and the colength of the lattice in S^N.
    """
    n = functionals.shape[0]
    if functionals.shape[1] == 0:
        return identity(n, ring), 0
    low = min_valuation(functionals, ring)
    shift = 0 if low is PLUS_INFINITY else max(0, -low)
    scaled = functionals * ring.power(shift)

    sf = smith_form(scaled, ring, left=True)
    rows, total = [], 0
    for k in range(n):
        e = max(0, shift - sf.valuations[k]) if k < sf.rank else 0
        total += e
        rows.append(sf.left[k] * ring.power(e))
    return (np.vstack(rows) if rows else zeros(0, 0, ring)), total


# -- modular elimination ------------------------------------------------------

def residue(x, p: int, precision: int) -> int:
    """The class of a p-integral rational modulo p^precision."""
    x = Fraction(x)
    q = p ** precision
    if x.denominator % p == 0:
        raise DomainError(f'{x} is not p-integral for p = {p}')
    return x.numerator * pow(x.denominator, -1, q) % q


def residues(matrix: np.ndarray, p: int, precision: int) -> np.ndarray:
    flat = [residue(x, p, precision) for x in np.asarray(matrix).reshape(-1)]
    return np.array(flat, dtype=np.int64).reshape(np.shape(matrix))


def modular_smith_exponents(matrix: np.ndarray, p: int, precision: int
                            ) -> List[int]:
    """
    Valuations below ``precision`` of the elementary divisors of an integral
    matrix, from its residues modulo p^precision.

    Pivots are taken stage by stage: all pivots of valuation v come before
    those of valuation v + 1, so only row operations are needed.
    """
    q = p ** precision
    if q * q >= np.iinfo(np.int64).max // 4:
        raise UsageError(f'modulus {p}^{precision} is too large for int64')
    a = np.array(matrix, dtype=np.int64) % q
    out: List[int] = []
    for v in range(precision):
        pv = p ** v
        while a.size:
            hits = np.argwhere((a // pv) % p != 0)
            if not len(hits):
                break
            r, c = hits[0]
            inverse = pow(int(a[r, c] // pv), -1, q)
            factors = (a[:, c] // pv) * inverse % q
            a = (a - np.outer(factors, a[r]) % q) % q
            a = np.delete(np.delete(a, r, axis=0), c, axis=1)
            out.append(v)
    logger.debug(f'modular smith form mod {p}^{precision}: {len(out)} '
                 f'divisors below the precision')
    return out


def modular_image_length(columns: np.ndarray, moduli: Sequence[int], p: int
                         ) -> int:
    """
    Length of the image of S^N -> ⊕ S/p^(m_k), x -> x @ columns.

    This is the colength in S^N of the lattice cut out by the congruences
    x @ columns[:, k] = 0 mod p^(m_k). Columns with m_k <= 0 are dropped.
    """
    moduli = np.asarray(moduli, dtype=np.int64)
    keep = moduli > 0
    if not keep.any():
        return 0
    columns, moduli = np.asarray(columns, dtype=np.int64)[:, keep], \
        moduli[keep]
    top = int(moduli.max())
    scale = np.array([p ** int(top - m) for m in moduli], dtype=np.int64)
    scaled = columns % p ** top * scale % p ** top
    nonzero = scaled.any(axis=0)
    exponents = modular_smith_exponents(scaled[:, nonzero], p, top)
    return sum(top - d for d in exponents)


# -- homology -----------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class ModuleDescription:
    # rank of the free part
    free_rank: int

    # exponents k of the cyclic factors S/s^k, ascending and positive
    torsion: Tuple[int, ...]

    @staticmethod
    def of_exponents(exponents: Sequence[int]) -> 'ModuleDescription':
        """Read the encoding of :attr:`exponents` back; zero means free."""
        return ModuleDescription(
            free_rank=sum(1 for e in exponents if e == 0),
            torsion=tuple(sorted(e for e in exponents if e > 0)))

    @property
    def exponents(self) -> Tuple[int, ...]:
        return (0,) * self.free_rank + self.torsion

    @property
    def length(self) -> Valuation:
        if self.free_rank:
            return PLUS_INFINITY
        return sum(self.torsion)

    def __str__(self):
        parts = ['S'] * self.free_rank + [f'S/s^{e}' for e in self.torsion]
        return ' + '.join(parts) if parts else '0'


@dataclasses.dataclass
class Homology:
    module: ModuleDescription

    # S-basis of the cycles, as rows
    cycles: np.ndarray

    # boundaries in cycle coordinates, one per row
    relations: np.ndarray

    ring: Any

    def coordinates(self, cycle: np.ndarray) -> np.ndarray:
        coords = solve_left(self.cycles, cycle, self.ring)
        if coords is None:
            raise DomainError('not a cycle')
        return coords

    def is_boundary(self, cycle: np.ndarray) -> bool:
        coords = self.coordinates(cycle)
        if is_zero_matrix(coords):
            return True
        if self.relations.shape[0] == 0:
            return False
        return solve_left(self.relations, coords, self.ring) is not None


def homology(d_in: np.ndarray, d_out: np.ndarray, ring) -> Homology:
    """
    Homology at the middle of ``C' --d_in--> C --d_out--> C''``.

    Cochains are rows, so ``d_in`` has shape (dim C', dim C) and ``d_out``
    has shape (dim C, dim C'').
    """
    if d_in.shape[1] != d_out.shape[0]:
        raise UsageError(f'dimension mismatch: {d_in.shape}, {d_out.shape}')
    cycles = left_kernel(d_out, ring)
    if d_in.shape[0]:
        relations = solve_left(cycles, d_in, ring) \
            if cycles.shape[0] else None
        if relations is None:
            if is_zero_matrix(d_in):
                relations = zeros(d_in.shape[0], cycles.shape[0], ring)
            else:
                raise InternalConsistencyError(
                    'boundaries are not cycles: the differentials do not '
                    'compose to zero')
    else:
        relations = zeros(0, cycles.shape[0], ring)

    report = smith_form(relations, ring).report() \
        if relations.shape[0] else SmithReport((), cycles.shape[0])
    module = ModuleDescription(
        free_rank=report.free_rank_defect,
        torsion=tuple(e for e in report.elementary_divisor_valuations
                      if e > 0))
    return Homology(module=module, cycles=cycles, relations=relations,
                    ring=ring)
