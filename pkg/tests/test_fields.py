from collections import namedtuple
from fractions import Fraction

import pytest

from conftest import Raises, case_name
from galoisties.errors import PreconditionError, UsageError
from galoisties.exact import PLUS_INFINITY, identity, matrices_equal, \
    to_matrix
from galoisties.fields import AmbientField, build_tower, \
    cyclotomic_discriminant_valuation, galois_generator, make_pi, \
    minimal_polynomial, parameter_table, polynomial_tower, trace_norm, val_at


class TestFieldArithmetic:
    def test_inverse(self):
        field = AmbientField(3, 2)
        x = field.zeta(2) * 3 + field.zeta(5) - 7
        assert x * x.inverse() == 1
        assert (x / x) == field.one

    def test_zeta_order(self):
        field = AmbientField(3, 2)
        assert field.zeta() ** 9 == 1
        assert field.zeta() ** 3 != 1

    def test_cyclotomic_minimal_polynomial(self):
        field = AmbientField(3, 2)
        assert minimal_polynomial(field.zeta()) == [1, 0, 0, 1, 0, 0, 1]

    def test_val_theta(self):
        field = AmbientField(3, 2)
        assert field.val_theta(field.theta()) == 1
        assert field.val_theta(field.element(3)) == 6
        assert field.val_theta(field.zero) is PLUS_INFINITY


class TestUniformizers:
    def test_pi_1_is_p(self):
        assert make_pi(3, 1) == 3

    def test_pi_2(self):
        field = AmbientField(3, 2)
        expected = (field.zeta() - 1) * (field.zeta(-1) - 1)
        assert make_pi(3, 2, field) == expected
        assert minimal_polynomial(make_pi(3, 2, field)) == [-3, 9, -6, 1]

    @pytest.mark.slow
    def test_pi_3_norm(self):
        tower = build_tower(3, 3, 'pi')
        norm = trace_norm(tower, tower.t_gen, 'norm')
        assert norm == tower.s_gen
        coefficients = minimal_polynomial(tower.t_gen)
        assert len(coefficients) == 10
        assert abs(coefficients[0]) == 3
        assert all(c % 3 == 0 for c in coefficients[:-1])

    def test_level_zero(self):
        with pytest.raises(UsageError):
            make_pi(3, 0)


class TestTowers:
    def test_golden_matrices(self, tower32):
        assert matrices_equal(tower32.t_dot, to_matrix(
            [[0, 1, 0], [0, 0, 1], [3, -9, 6]]))
        assert matrices_equal(tower32.sigma_dot, to_matrix(
            [[1, 0, 0], [6, -5, 1], [24, -21, 4]]))

    def test_ramification(self, tower32):
        assert tower32.b == 1
        assert tower32.ramification.different_valuation == 4
        assert tower32.ramification.discriminant_valuation == 4
        assert val_at(tower32, tower32.sigma(tower32.t_gen) - tower32.t_gen,
                      't') == 2

    def test_jump_is_independent_of_the_generator(self, tower32):
        t = tower32.t_gen
        sigma = galois_generator(tower32)
        for k in range(1, tower32.g):
            assert val_at(tower32, sigma.power(k)(t) - t, 't') == 2

    def test_theta_tower(self, theta32):
        assert (theta32.b, theta32.b_bar, theta32.b_under) == (2, 2, 0)
        assert theta32.ring.val(theta32.ring.element(3)) == 2

    def test_sigma_has_order_g(self, tower32, tower52):
        for tower in (tower32, tower52):
            power = identity(tower.g, tower.ring)
            for _ in range(tower.g):
                power = power @ tower.sigma_dot
            assert matrices_equal(power, identity(tower.g, tower.ring))
            assert galois_generator(tower).order == tower.g

    def test_trace_and_norm(self, tower32):
        t = tower32.t_gen
        assert trace_norm(tower32, tower32.ambient.one) == 3
        assert trace_norm(tower32, t) == 6
        assert trace_norm(tower32, t, 'norm') == 3

    def test_val_s(self, tower32):
        assert val_at(tower32, tower32.ambient.element(3), 's') == 1
        with pytest.raises(UsageError):
            val_at(tower32, tower32.ambient.one, 'w')

    def test_discriminant_of_phi9(self):
        assert cyclotomic_discriminant_valuation(3, 2) == 9

    def test_unknown_kind(self):
        with pytest.raises(UsageError):
            build_tower(3, 2, 'lambda')


PCase = namedtuple('CaseParameters', 'p,n,kind,expected,raises,name')


@pytest.fixture(scope='function')
def parameter_case(request) -> PCase:
    return request.param


class TestParameterTable:
    cases = [
        PCase(name='pi 3 2', p=3, n=2, kind='cyclotomic-pi',
              expected=(1, 1, 0, 1), raises=None),
        PCase(name='theta 3 2', p=3, n=2, kind='cyclotomic-theta',
              expected=(2, 2, 0, 2), raises=None),
        PCase(name='pi 5 2', p=5, n=2, kind='cyclotomic-pi',
              expected=(1, 1, 0, 1), raises=None),
        PCase(name='formula pi 3 3', p=3, n=3, kind='lubin-tate-formula',
              expected=(4, 1, 1, 3), raises=None),
        PCase(name='formula theta 5 3', p=5, n=3, kind='lubin-tate-formula',
              expected=(24, 4, 4, 20), raises=None),
        PCase(name='even prime', p=2, n=2, kind='cyclotomic-pi',
              expected=None, raises=Raises(UsageError)),
        PCase(name='level one', p=3, n=1, kind='cyclotomic-pi',
              expected=None, raises=Raises(UsageError)),
        PCase(name='unknown kind', p=3, n=2, kind='kummer',
              expected=None, raises=Raises(UsageError)),
    ]

    @pytest.mark.parametrize('parameter_case', cases, indirect=True,
                             ids=case_name)
    def test_parameters(self, parameter_case: PCase):
        case = parameter_case
        uniformizer = 'theta' if case.name.startswith('formula theta') \
            else 'pi'
        if case.raises:
            with pytest.raises(case.raises.exc, **case.raises.kwargs):
                parameter_table(case.p, case.n, case.kind, uniformizer)
            return

        table = parameter_table(case.p, case.n, case.kind, uniformizer)
        assert (table.b, table.b_bar, table.b_under, table.val_s_p) == \
            case.expected
        assert table.ramification.different_valuation == \
            (case.p - 1) * (1 + table.b)


class TestPolynomialTower:
    def test_root_tower(self, root_tower):
        assert root_tower.b == 1
        assert root_tower.sigma_dot is None
        assert root_tower.ring.uniformizer == -48
        with pytest.raises(UsageError):
            galois_generator(root_tower)

    def test_not_eisenstein(self):
        with pytest.raises(PreconditionError):
            polynomial_tower(3, (1, 3, 3, 1))

    def test_wrong_degree(self):
        with pytest.raises(UsageError):
            polynomial_tower(3, (3, 1))

    def test_mu_t(self, root_tower):
        assert root_tower.mu_t == tuple(Fraction(c) for c in (48, -18, 3, 1))
