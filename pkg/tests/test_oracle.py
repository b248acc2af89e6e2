import pytest

from galoisties import cohom
from galoisties.errors import DomainError, ResourceError, UsageError
from galoisties.exact import RationalDVR, identity, matrices_equal, zeros
from galoisties.oracle import BarCochain, BarComplex, CyclicAction, \
    align_products, bar_checks, bar_cohomology, bar_cup, classical_checks, \
    classical_comparison, classical_ext, classical_homology, \
    cyclotomic_action, independent_lift, lift_checks, tower_action, \
    xi_product_image_length
from galoisties.report import PASS


def _all_pass(checks):
    return all(c.status == PASS for c in checks)


class TestCyclicAction:
    def test_tower_action(self, tower32):
        action = tower_action(tower32)
        assert (action.rank, action.order) == (3, 3)
        assert matrices_equal(action.trace @ action.difference,
                              zeros(3, 3, tower32.ring))

    def test_no_galois_action(self, root_tower):
        with pytest.raises(UsageError):
            tower_action(root_tower)

    def test_wrong_order(self):
        ring = RationalDVR(3)
        with pytest.raises(UsageError, match='order'):
            CyclicAction(name='trivial', ring=ring, rank=1, order=2,
                         generator=identity(1, ring),
                         multiplications=[identity(1, ring)])

    def test_cyclotomic(self):
        action = cyclotomic_action(3, 2)
        assert (action.rank, action.order) == (6, 6)
        assert str(classical_ext(action, 0)) == 'S'


class TestClassical:
    def test_degrees(self, tower32):
        action = tower_action(tower32)
        assert [str(classical_ext(action, i)) for i in range(4)] == \
            ['S', 'S/s^1', 'S/s^1', 'S/s^1']

    def test_checks(self, tower32, theta32):
        assert _all_pass(classical_checks(tower32, 4))
        assert _all_pass(classical_checks(theta32, 3))

    def test_odd_generators_p5(self, tower52):
        # one odd generator survives, the other three are zero
        action = tower_action(tower52)
        assert str(classical_ext(action, 1)) == 'S/s^1'
        presentation = cohom.ring_presentation(tower52)
        assert sum(g.annihilator
                   for g in presentation.odd_generators) == 1
        assert str(classical_ext(action, 2)) == \
            f'S/s^{presentation.even_annihilator}'

    def test_negative_degree(self, tower32):
        with pytest.raises(UsageError):
            classical_ext(tower_action(tower32), -1)


class TestBar:
    def test_checks(self, tower32):
        checks = bar_checks(tower32, 2)
        assert _all_pass(checks), [c for c in checks if c.status != PASS]

    @pytest.mark.slow
    def test_checks_degree3(self, tower32):
        assert _all_pass(bar_checks(tower32, 3))

    def test_size_guard(self, tower32):
        action = tower_action(tower32)
        with pytest.raises(ResourceError):
            bar_cohomology(action, 3, max_coordinates=100)
        with pytest.raises(ResourceError):
            BarComplex(action, max_coordinates=10).check_size(2)

    def test_cup_needs_cocycles(self, tower32):
        action = tower_action(tower32)
        complex_ = BarComplex(action)
        unit = BarCochain(0, zeros(1, 3, action.ring)[0])
        unit.values[0] = action.ring.one
        t = BarCochain(0, zeros(1, 3, action.ring)[0])
        t.values[1] = action.ring.one
        assert complex_.is_cocycle(unit)
        assert not complex_.is_cocycle(t)
        with pytest.raises(DomainError):
            bar_cup(complex_, unit, t)

    def test_value_arity(self, tower32):
        complex_ = BarComplex(tower_action(tower32))
        a = BarCochain(1, zeros(1, 9, tower32.ring)[0])
        with pytest.raises(UsageError):
            complex_.value(a, (0, 1, 2))

    def test_product_image_length(self, tower32, theta32):
        assert xi_product_image_length(tower32) == 0
        assert xi_product_image_length(theta32) == 1


class TestProductAlignment:
    def test_comparison_commutes(self, theta32):
        maps = cohom.resolution_elements(theta32)
        comparison = classical_comparison(theta32, maps)
        action = comparison.action
        assert matrices_equal(maps.beta @ comparison.first, action.difference)
        assert matrices_equal(maps.alpha @ comparison.second,
                              comparison.first @ action.trace)

    def test_comparison_degrees(self, tower32):
        comparison = classical_comparison(tower32)
        with pytest.raises(UsageError, match='degrees 1 and 2'):
            comparison.ext_cochain(identity(3, tower32.ring)[0], 3)

    def test_nonvanishing_products(self, theta32):
        bar = bar_cohomology(tower_action(theta32), 2)
        alignment = align_products(theta32, bar)
        assert alignment.mismatched == ()
        assert alignment.unit is not None
        assert alignment.nonzero == ((0, 1), (1, 0))

    def test_products_are_classes(self, theta32):
        maps = cohom.resolution_elements(theta32)
        comparison = classical_comparison(theta32, maps)
        h2 = classical_homology(comparison.action, 2)
        square = comparison.ext_cochain(cohom.product_cochain(theta32, 0, 0),
                                        2)
        mixed = comparison.ext_cochain(cohom.product_cochain(theta32, 0, 1),
                                       2)
        assert h2.is_boundary(square)
        assert not h2.is_boundary(mixed)

    def test_vanishing_products(self, tower32):
        bar = bar_cohomology(tower_action(tower32), 2)
        alignment = align_products(tower32, bar)
        assert (alignment.mismatched, alignment.nonzero) == ((), ())

    def test_checks_with_products(self, theta32):
        checks = bar_checks(theta32, 2)
        assert _all_pass(checks), [c for c in checks if c.status != PASS]
        names = [c.name for c in checks]
        assert 'H^1 products: bar cup equals Yoneda product' in names
        assert 'nonzero H^1 products' in names


class TestIndependentLift:
    def test_checks(self, tower32, theta32):
        assert _all_pass(lift_checks(tower32))
        assert _all_pass(lift_checks(theta32))

    def test_lower_component(self, tower32):
        one = identity(3, tower32.ring)
        for k in (0, 2):
            lift = independent_lift(tower32, one[k])
            assert matrices_equal(one[0] @ lift.lower, one[k])

    def test_not_a_cocycle(self, tower32):
        with pytest.raises(DomainError):
            independent_lift(tower32, identity(3, tower32.ring)[1])
