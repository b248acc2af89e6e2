import types
from fractions import Fraction

import numpy as np
import pytest

from galoisties.appendix import KNOWN_CHAINS, build_appendix_tower, \
    check_conjecture_i, colength_chain, conjecture_valuation, \
    derivation_order, gamma_lambda_colength, intersect, lambda_d, \
    lambda_de, load_matrix, reduced_matrices, run_appendix, same_order, \
    xi_batch, xi_colength, xi_colength_formula
from galoisties.errors import InternalConsistencyError, ResourceError, \
    UsageError
from galoisties.exact import PLUS_INFINITY, matrices_equal
from galoisties.report import EVIDENCE, PASS


@pytest.fixture(scope='module')
def appendix3():
    return build_appendix_tower(3)


class TestTower:
    def test_shifts(self, appendix3):
        u, v, sigma = appendix3.u, appendix3.v, appendix3.sigma
        assert appendix3.val_u(sigma(u) - u) == 2
        assert appendix3.val_u(sigma(v) - v) == 7
        assert appendix3.val_u(u) == 1
        assert appendix3.val_u(v) == 3

    def test_matrices(self, appendix3):
        assert appendix3.u_dot.shape == (9, 9)
        assert matrices_equal(appendix3.u_dot @ appendix3.v_dot,
                              appendix3.v_dot @ appendix3.u_dot)
        assert appendix3.weights == (0, 3, 6, 1, 4, 7, 2, 5, 8)

    def test_too_large(self):
        with pytest.raises(ResourceError):
            build_appendix_tower(11)


class TestConjecture:
    def test_identity(self, appendix3):
        assert conjecture_valuation(appendix3, 0) is PLUS_INFINITY

    def test_all_elements(self, appendix3):
        checks = check_conjecture_i(appendix3, threads=2)
        assert len(checks) == 10
        assert all(c.status == EVIDENCE for c in checks)
        assert [c.name for c in checks[:3]] == \
            ['tau = sigma^0', 'tau = sigma^1', 'tau = sigma^2']
        assert checks[0].actual == '+inf'
        assert checks[-1].actual == 'holds for 9 of 9'


class TestColengths:
    def test_formulas(self, appendix3):
        assert xi_colength_formula(3) == 99
        assert xi_colength_formula(5) == 850
        assert gamma_lambda_colength(appendix3) == 36

    def test_chain(self, appendix3):
        chain, checks = colength_chain(appendix3, precision=6)
        assert chain == KNOWN_CHAINS[3] == (0, 18, 45, 36)
        assert all(c.status == PASS for c in checks), \
            [c for c in checks if c.status != PASS]

    def test_xi_colength(self, appendix3):
        assert xi_colength(appendix3, 6) == 99
        with pytest.raises(InternalConsistencyError):
            xi_colength(appendix3, 2)

    def test_orders(self, appendix3):
        d = lambda_d(appendix3, 6)
        de = lambda_de(appendix3, 6)
        assert d.colength() == 45
        assert de.colength() == 63
        assert same_order(de, intersect(de, d))
        assert not same_order(d, de)
        assert de.contains(xi_batch(appendix3, 6)).all()

    def test_order_of_generators(self, appendix3):
        d = derivation_order(appendix3, appendix3.u_dot, appendix3.v_dot, 6)
        assert same_order(d, lambda_d(appendix3, 6))

    def test_precision_too_low(self, appendix3):
        with pytest.raises(UsageError, match='precision'):
            lambda_d(appendix3, 1).colength()
        with pytest.raises(UsageError):
            intersect(lambda_d(appendix3, 5), lambda_d(appendix3, 6))

    def test_lattice_guard(self):
        stand_in = types.SimpleNamespace(p=7, g=49)
        with pytest.raises(ResourceError):
            colength_chain(stand_in, force=False)

    @pytest.mark.slow
    def test_chain_p5(self):
        tower = build_appendix_tower(5)
        chain, checks = colength_chain(tower, precision=6)
        assert chain == (100, 100, 350, 300)
        assert all(c.status == PASS for c in checks)


class TestReducedMatrices:
    def test_p3(self, appendix3):
        checks = reduced_matrices(appendix3, precision=6)
        assert all(c.status == PASS for c in checks), \
            [c for c in checks if c.status != PASS]
        assert checks[0].name == 'u_dot equals the displayed matrix'
        assert checks[2].name == 'sigma^5_dot equals the displayed matrix'

    def test_displayed_sigma_is_a_power(self, appendix3):
        u = appendix3.u
        assert appendix3.sigma.power(5)(u) == u * 4 - u * u

        displayed = load_matrix('sigma_dot', 3)
        assert displayed[1, 0] == Fraction(-24876, 7217)
        assert matrices_equal(appendix3.sigma_power_dot(5), displayed)
        assert not matrices_equal(appendix3.sigma_dot, displayed)

    def test_load(self):
        m = load_matrix('u_dd', 3)
        assert m.shape == (9, 9)
        assert m.dtype == np.dtype(object)
        with pytest.raises(UsageError):
            load_matrix('u_dd', 11)
        with pytest.raises(UsageError):
            load_matrix('w_dd', 3)

    def test_no_reductions(self):
        with pytest.raises(UsageError):
            reduced_matrices(types.SimpleNamespace(p=7))


class TestRunAppendix:
    def test_unknown_check(self):
        with pytest.raises(UsageError):
            run_appendix(3, 'everything')

    def test_conjecture(self):
        checks = run_appendix(3, 'conjecture')
        assert len(checks) == 10
