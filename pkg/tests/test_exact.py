import random
from collections import namedtuple
from fractions import Fraction

import numpy as np
import pytest

from conftest import Raises, case_name
from galoisties.errors import DomainError, UsageError
from galoisties.exact import PLUS_INFINITY, ModuleDescription, RationalDVR, \
    check_odd_prime, colength, homology, identity, integral_preimage, \
    modular_image_length, modular_smith_exponents, module_length, residue, \
    same_lattice, smith_form, smith_over_dvr, solve_over_dvr, to_matrix, \
    val_p, zeros

Z3 = RationalDVR(3)

VCase = namedtuple('CaseValP', 'x,p,expected,raises,name')


@pytest.fixture(scope='function')
def val_case(request) -> VCase:
    return request.param


class TestValuations:
    cases = [
        VCase(name='six at three', x=6, p=3, expected=1, raises=None),
        VCase(name='zero', x=0, p=3, expected=PLUS_INFINITY, raises=None),
        VCase(name='denominator', x=Fraction(2, 9), p=3, expected=-2,
              raises=None),
        VCase(name='unit', x=Fraction(7, 5), p=3, expected=0, raises=None),
        VCase(name='not a prime', x=6, p=4, expected=None,
              raises=Raises(UsageError, {'match': 'not a prime'})),
    ]

    @pytest.mark.parametrize('val_case', cases, indirect=True, ids=case_name)
    def test_val_p(self, val_case: VCase):
        case = val_case
        if case.raises:
            with pytest.raises(case.raises.exc, **case.raises.kwargs):
                val_p(case.x, case.p)
            return

        assert val_p(case.x, case.p) == case.expected

    def test_valuation_laws(self):
        rng = random.Random(20)
        for _ in range(1000):
            x = Fraction(rng.randint(-500, 500), rng.randint(1, 500))
            y = Fraction(rng.randint(-500, 500), rng.randint(1, 500))
            assert val_p(x * y, 3) == val_p(x, 3) + val_p(y, 3)
            assert val_p(x + y, 3) >= min(val_p(x, 3), val_p(y, 3))

    def test_plus_infinity(self):
        assert PLUS_INFINITY > 10 ** 9
        assert 5 < PLUS_INFINITY
        assert PLUS_INFINITY + 3 is PLUS_INFINITY
        assert min(PLUS_INFINITY, 4) == 4

    @pytest.mark.parametrize('p', [2, 4, 9, True, 3.0])
    def test_check_odd_prime(self, p):
        with pytest.raises(UsageError, match='p must be an odd prime'):
            check_odd_prime(p)

    def test_rational_dvr_uniformizer(self):
        assert RationalDVR(3, Fraction(-48)).uniformizer == -48
        with pytest.raises(DomainError):
            RationalDVR(3, Fraction(9))


class TestSmith:
    def test_identity(self):
        report = smith_over_dvr(identity(3, Z3), Z3)
        assert report.elementary_divisor_valuations == (0, 0, 0)
        assert report.length == 0

    def test_diagonal(self):
        m = to_matrix([[9, 0], [0, 3]], Z3)
        assert smith_over_dvr(m, Z3).elementary_divisor_valuations == (1, 2)

    def test_negative_entry(self):
        with pytest.raises(DomainError):
            smith_over_dvr(to_matrix([[Fraction(1, 3)]], Z3), Z3)

    def test_module_length(self):
        assert module_length(to_matrix([[9]], Z3), Z3) == 2
        assert module_length(zeros(1, 1, Z3), Z3) is PLUS_INFINITY

    def test_invariant_under_unimodular_operations(self):
        rng = random.Random(4)
        for _ in range(100):
            m = to_matrix([[rng.choice([0, 1, 3, 9, 2]) * rng.randint(-3, 3)
                            for _ in range(3)] for _ in range(3)], Z3)
            left, right = identity(3, Z3), identity(3, Z3)
            for i in range(3):
                for j in range(i + 1, 3):
                    left[i, j] = Fraction(rng.randint(-5, 5), 2)
                    right[j, i] = Fraction(rng.randint(-5, 5))
            assert smith_over_dvr(left @ m @ right, Z3) == \
                smith_over_dvr(m, Z3)

    def test_length_is_additive(self):
        rng = random.Random(6)
        for _ in range(100):
            a = to_matrix([[3 ** rng.randint(0, 3) * rng.choice([1, 2])
                            for _ in range(2)] for _ in range(2)], Z3)
            b = to_matrix([[3 ** rng.randint(1, 2)]], Z3)
            block = zeros(3, 3, Z3)
            block[:2, :2] = a
            block[2, 2] = b[0, 0]
            assert module_length(block, Z3) == \
                module_length(a, Z3) + module_length(b, Z3)

    def test_transforms(self):
        rng = random.Random(3)
        m = to_matrix([[rng.randint(-9, 9) for _ in range(4)]
                       for _ in range(3)], Z3)
        sf = smith_form(m, Z3, left=True, right=True)
        d = sf.left @ m @ sf.right
        for i in range(3):
            for j in range(4):
                assert d[i, j] == (sf.diagonal[i] if i == j and i < sf.rank
                                   else 0)


class TestSolve:
    def test_solvable(self):
        x = solve_over_dvr(to_matrix([[3]], Z3), [Fraction(9)], Z3)
        assert list(x) == [3]

    def test_unsolvable_over_s(self):
        assert solve_over_dvr(to_matrix([[3]], Z3), [Fraction(1)], Z3) \
            is None

    def test_identity(self):
        b = [Fraction(2), Fraction(-6), Fraction(5, 7)]
        assert list(solve_over_dvr(identity(3, Z3), b, Z3)) == b

    def test_dimension_mismatch(self):
        with pytest.raises(UsageError):
            solve_over_dvr(identity(2, Z3), [Fraction(1)], Z3)


class TestLattices:
    def test_colength(self):
        sub = to_matrix([[3, 0], [0, 1]], Z3)
        assert colength(sub, identity(2, Z3), Z3) == 1
        assert colength(identity(2, Z3), identity(2, Z3), Z3) == 0
        with pytest.raises(DomainError):
            colength(identity(2, Z3), sub, Z3)

    def test_same_lattice(self):
        a = to_matrix([[1, 1], [0, 1]], Z3)
        assert same_lattice(a, identity(2, Z3), Z3)
        assert not same_lattice(a * Fraction(3), identity(2, Z3), Z3)

    def test_integral_preimage(self):
        functionals = to_matrix([[Fraction(1, 3)], [0]], Z3)
        basis, length = integral_preimage(functionals, Z3)
        assert length == 1
        assert same_lattice(basis, to_matrix([[3, 0], [0, 1]], Z3), Z3)


class TestModular:
    def test_residue(self):
        assert residue(Fraction(1, 2), 3, 2) == 5
        assert residue(-1, 3, 2) == 8
        with pytest.raises(DomainError):
            residue(Fraction(1, 3), 3, 2)

    def test_diagonal(self):
        m = np.diag([1, 3, 9]).astype(np.int64)
        assert modular_smith_exponents(m, 3, 4) == [0, 1, 2]
        assert modular_smith_exponents(m, 3, 2) == [0, 1]

    def test_against_exact_smith(self):
        rng = random.Random(7)
        for _ in range(200):
            rows = [[rng.choice([0, 1, 3, 9, -2, 6, 27]) * rng.randint(-4, 4)
                     for _ in range(4)] for _ in range(4)]
            exact = sorted(v for v in smith_form(to_matrix(rows, Z3), Z3)
                           .valuations if v < 8)
            modular = sorted(modular_smith_exponents(
                np.array(rows, dtype=np.int64), 3, 8))
            assert modular == exact

    def test_modulus_too_large(self):
        with pytest.raises(UsageError):
            modular_smith_exponents(np.zeros((1, 1), dtype=np.int64), 3, 30)

    def test_image_length(self):
        assert modular_image_length(np.array([[1], [0]]), [2], 3) == 2
        assert modular_image_length(np.array([[3], [0]]), [2], 3) == 1
        assert modular_image_length(np.array([[1], [1]]), [0], 3) == 0
        assert modular_image_length(np.array([[1, 0], [0, 1]]), [1, 2], 3) \
            == 3


class TestHomology:
    def test_module_description(self):
        m = ModuleDescription.of_exponents([0, 2, 1])
        assert m.free_rank == 1
        assert m.torsion == (1, 2)
        assert str(m) == 'S + S/s^1 + S/s^2'
        assert m.length is PLUS_INFINITY
        assert str(ModuleDescription(0, ())) == '0'

    def test_cyclic_cokernel(self):
        h = homology(to_matrix([[3]], Z3), zeros(1, 0, Z3), Z3)
        assert str(h.module) == 'S/s^1'
        assert h.is_boundary(to_matrix([[6]], Z3)[0])
        assert not h.is_boundary(to_matrix([[1]], Z3)[0])

    def test_not_composable(self):
        with pytest.raises(UsageError):
            homology(identity(2, Z3), identity(3, Z3), Z3)
