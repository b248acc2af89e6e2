"""
The Wedderburn embedding T≀G -> Γ = End_S(T) and the chain order Λ.

Elements of Γ are g×g object matrices over K. Maps act on the right:
row m of a matrix holds the image of the m-th basis vector of T, and the
product ``a @ b`` is the map "first a, then b". The basis of T is fixed by
the tower and carries weights, the t-valuations of its members, which
are pairwise incongruent modulo g. For the cyclic towers the basis is
(t^0, ..., t^(g-1)) with weights 0, ..., g-1.

Λ consists of the f in Γ preserving every power of the maximal ideal of
T. For weights 0, ..., g-1 it has the S-basis ε_{i,j}, the matrix with the
single entry s^under(i+j) at (i, over(i+j)), where i = g·under(i) + over(i)
is the Euclidean split.
"""
import dataclasses
from typing import Sequence, Union

import numpy as np

from galoisties import exact
from galoisties.errors import UsageError
from galoisties.exact import identity, zeros
from galoisties.logging import get_logger

logger = get_logger(__name__)

# a family of elements of Γ, as a list of matrices or as the rows of an
# array of flattened matrices
Lattice = Union[Sequence[np.ndarray], np.ndarray]


@dataclasses.dataclass(frozen=True)
class IndexSplit:
    i: int
    g: int
    under: int
    over: int


def split(i: int, g: int) -> IndexSplit:
    """Euclidean split i = g·under + over with over in [0, g-1]."""
    if g <= 0:
        raise UsageError(f'modulus must be positive, got {g}')
    q, r = divmod(i, g)
    return IndexSplit(i=i, g=g, under=q, over=r)


def under(i: int, g: int) -> int:
    return split(i, g).under


def over(i: int, g: int) -> int:
    return split(i, g).over


def underline_sum(x: int, y: int, g: int) -> int:
    """Sum of under(x + i·y, g) over i in [0, g-1]."""
    return sum(under(x + i * y, g) for i in range(g))


# -- ε-basis --------------------------------------------------------------------

def eps(i: int, j: int, tower) -> np.ndarray:
    """ε_{i,j}: maps t^i to t^over(i+j)·s^under(i+j) and kills t^l, l != i."""
    g = tower.g
    if not 0 <= i < g:
        raise UsageError(f'row index {i} outside [0, {g - 1}]')
    k = split(i + j, g)
    out = zeros(g, g, tower.ring)
    out[i, k.over] = tower.ring.power(k.under)
    return out


def ddot_power(j: int, tower) -> np.ndarray:
    """ẗ^j = sum of ε_{i,j} over i; ẗ itself is ε-shifted multiplication by t."""
    out = zeros(tower.g, tower.g, tower.ring)
    for i in range(tower.g):
        out = out + eps(i, j, tower)
    return out


def eps_coordinates(f: np.ndarray, tower) -> np.ndarray:
    """The coefficients a_{i,j} of f = sum a_{i,j} ε_{i,j}, j in [0, g-1]."""
    g, ring = tower.g, tower.ring
    a = np.empty((g, g), dtype=object)
    for i in range(g):
        for j in range(g):
            k = split(i + j, g)
            a[i, j] = f[i, k.over] / ring.power(k.under)
    return a


def from_eps_coordinates(a: np.ndarray, tower) -> np.ndarray:
    g, ring = tower.g, tower.ring
    out = zeros(g, g, ring)
    for i in range(g):
        for j in range(g):
            k = split(i + j, g)
            out[i, k.over] = ring.element(a[i, j]) * ring.power(k.under)
    return out


def eps_basis(tower) -> np.ndarray:
    """The flattened ε_{i,j} as rows, in the order i·g + j."""
    return np.vstack([flatten(eps(i, j, tower))
                      for i in range(tower.g) for j in range(tower.g)])


# -- the embedding ----------------------------------------------------------------

_IMAGES = {
    't': 't_dot',
    'sigma': 'sigma_dot',
    'u': 'u_dot',
    'v': 'v_dot',
}


def wedderburn_image(generator: str, tower) -> np.ndarray:
    """
    Matrix of a generator of T≀G, or of ẗ.

    :param generator: ``t`` and ``sigma`` for the cyclic towers, ``u`` and
      ``v`` for the appendix tower, ``ddot_t`` for ẗ = ddot_power(1).
    :raise UsageError: if the tower does not provide the generator.
    """
    if generator == 'ddot_t':
        return ddot_power(1, tower)
    attr = _IMAGES.get(generator)
    image = getattr(tower, attr, None) if attr else None
    if image is None:
        raise UsageError(f'generator {generator!r} is not available for '
                         f'{tower}')
    return image


def xi_generators(tower) -> np.ndarray:
    """
    The S-basis ṫ^j σ̇^i of Ξ, the image of T≀G, as flattened rows.

    T≀G is free over T on G, and T is free over S on the powers of t.
    """
    t_dot = wedderburn_image('t', tower)
    sigma_dot = wedderburn_image('sigma', tower)
    rows = []
    sigma_power = identity(tower.g, tower.ring)
    for _ in range(tower.g):
        t_power = identity(tower.g, tower.ring)
        for _ in range(tower.g):
            rows.append(flatten(t_power @ sigma_power))
            t_power = t_power @ t_dot
        sigma_power = sigma_power @ sigma_dot
    return np.vstack(rows)


# -- ideals of Λ ------------------------------------------------------------------

def ideal_exponents(k: int, tower) -> np.ndarray:
    """
    Entry-wise valuation bounds cutting out ẗ^k Λ.

    f lies in ẗ^k Λ iff val_s(f[m, n]) >= c[m, n] = ceil((w_m + k - w_n) / g),
    w being the weights of the basis. For weights 0, ..., g-1 this is the
    condition val_s(a_{i,j}) >= -under(j - k) on the ε-coordinates.
    """
    w, g = tower.weights, tower.g
    out = np.empty((g, g), dtype=object)
    for m in range(g):
        for n in range(g):
            out[m, n] = -under(w[n] - w[m] - k, g)
    return out


def ideal_membership(f: np.ndarray, k: int, tower) -> bool:
    """Whether f lies in ẗ^k Λ; k may be negative."""
    c = ideal_exponents(k, tower)
    ring = tower.ring
    return all(not f[m, n] or ring.val(f[m, n]) >= c[m, n]
               for m in range(tower.g) for n in range(tower.g))


def in_lambda(f: np.ndarray, tower) -> bool:
    return ideal_membership(f, 0, tower)


def ideal_basis(k: int, tower) -> np.ndarray:
    """An S-basis of ẗ^k Λ as flattened rows: scaled matrix units."""
    c = ideal_exponents(k, tower).reshape(-1)
    out = zeros(len(c), len(c), tower.ring)
    for q, e in enumerate(c):
        out[q, q] = tower.ring.power(e)
    return out


def lambda_basis(tower) -> np.ndarray:
    return ideal_basis(0, tower)


def gamma_basis(tower) -> np.ndarray:
    return identity(tower.g * tower.g, tower.ring)


# -- lattices ---------------------------------------------------------------------

def flatten(f: np.ndarray) -> np.ndarray:
    return np.asarray(f, dtype=object).reshape(-1)


def unflatten(row: np.ndarray, g: int) -> np.ndarray:
    return np.asarray(row, dtype=object).reshape(g, g)


def as_lattice_rows(lattice: Lattice, g: int) -> np.ndarray:
    """
    Flattened rows. An array of shape (g, g) is one g x g matrix, a 3-d
    array is a stack of matrices and other 2-d arrays hold rows already.
    """
    if not isinstance(lattice, np.ndarray):
        return np.vstack([flatten(f) for f in lattice])
    if lattice.shape == (g, g):
        return flatten(lattice).reshape(1, -1)
    if lattice.ndim == 3:
        return lattice.reshape(lattice.shape[0], -1)
    return lattice


def colength(sub_basis: Lattice, super_basis: Lattice, tower):
    """
    S-length of span(super_basis) / span(sub_basis).

    Bases are lists of matrices or arrays of flattened matrices; spanning
    families are accepted as well.

    :raise DomainError: when the sub-lattice is not contained in the other.
    """
    sub = as_lattice_rows(sub_basis, tower.g)
    sup = as_lattice_rows(super_basis, tower.g)
    length = exact.colength(sub, sup, tower.ring)
    logger.debug(f'colength of {sub.shape[0]} in {sup.shape[0]} generators: '
                 f'{length}')
    return length


def same_lattice(a: Lattice, b: Lattice, tower) -> bool:
    return exact.same_lattice(as_lattice_rows(a, tower.g),
                              as_lattice_rows(b, tower.g),
                              tower.ring)
