import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equigenus.catalog import catalog, catalog_cpn
from equigenus.exact import MU, LaurentPoly, RationalFunc, rf_is_constant
from equigenus.genus import PontryaginData, l_genus, twisted_signature
from equigenus.localization import (
    FixedPoint,
    Lemma2ConsistencyError,
    NonPrimitiveActionWarning,
    S1ManifoldData,
    a_hat_factor,
    check_rigidity,
    equivariant_a_hat,
    equivariant_elliptic_genus,
    equivariant_signature,
    equivariant_twisted_signature,
    is_two_balanced,
    lemma2_verify,
    point,
    product_manifold,
    signature_factor,
    vanishes_at_infinity,
    weight_sum,
)
from equigenus.rseries import BundleExpr, expand_R

import oracles

F = Fraction
T = BundleExpr.tangent()
S2 = catalog_cpn((0, 1), "s2")
CP2 = catalog_cpn((0, 1, 2), "cp2")
CP3 = catalog_cpn((0, 1, 2, 3), "cp3")
CP2_WEIGHTS = [(1, 2), (-1, 1), (-2, -1)]


def t(m):
    return LaurentPoly.character(m)


def random_manifold(rng, n, k):
    fps = tuple(
        FixedPoint(tuple(rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(n)), rng.choice([1, -1]))
        for _ in range(k)
    )
    return S1ManifoldData(2 * n, fps)


manifolds = st.builds(
    lambda seed, n, k: random_manifold(random.Random(seed), n, k),
    st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4),
)


class TestDataModel:
    def test_zero_weight(self):
        with pytest.raises(ValueError, match="zero weight"):
            FixedPoint((0, 1))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="weight-list length"):
            S1ManifoldData(4, (FixedPoint((1,)),))

    def test_needs_fixed_points(self):
        with pytest.raises(ValueError):
            S1ManifoldData(2, ())


class TestEquivariantSignature:
    def test_s2(self):
        assert equivariant_signature(S2) == 0

    def test_cp2_constant(self):
        assert rf_is_constant(equivariant_signature(CP2)) == 1

    def test_cp2_spot_terms(self):
        terms = [signature_factor(FixedPoint(w)).at_lambda(2) for w in CP2_WEIGHTS]
        assert terms == [5, -9, 5]
        assert terms == [oracles.signature_term_at(w, 2) for w in CP2_WEIGHTS]

    def test_cp2_twisted_by_2t(self):
        r = equivariant_twisted_signature(CP2, 2 * T)
        assert rf_is_constant(r) is None
        for lam, expected in ((2, F(45)), (3, F(640, 9))):
            oracle = sum(2 * oracles.tangent_char_at(w, lam) * oracles.signature_term_at(w, lam)
                         for w in CP2_WEIGHTS)
            assert oracle == expected
            assert r.at_lambda(lam) == expected

    @settings(max_examples=25, deadline=None)
    @given(manifolds, st.sampled_from([2, 3, F(1, 2), -2]))
    def test_matches_pointwise_sum(self, M, lam):
        r = equivariant_signature(M)
        expected = sum(oracles.signature_term_at(fp.weights, lam, fp.sign) for fp in M.fixed_points)
        assert r.at_lambda(lam) == expected


class TestEllipticGenus:
    def test_s2_vanishes(self):
        assert all(c == 0 for c in equivariant_elliptic_genus(S2, 4))

    def test_cp2(self):
        phi = equivariant_elliptic_genus(CP2, 1)
        assert rf_is_constant(phi[0]) == 1
        assert rf_is_constant(phi[1]) is None
        assert phi[1].at_lambda(2) == 45 and phi[1].at_lambda(3) == F(640, 9)

    def test_order_zero(self):
        assert list(equivariant_elliptic_genus(CP2, 0)) == [equivariant_signature(CP2)]

    @pytest.mark.parametrize("name", sorted(catalog()))
    def test_matches_symbolic_route(self, name):
        M = catalog()[name]
        phi = equivariant_elliptic_genus(M, 2)
        for i, R in enumerate(expand_R(2)):
            assert phi[i] == equivariant_twisted_signature(M, R)

    @pytest.mark.parametrize("name", sorted(catalog()))
    def test_index_is_a_character(self, name):
        # each coefficient is an honest character: no poles off 0, and its
        # value at lambda = 1 is the non-equivariant twisted signature
        M = catalog()[name]
        for i, c in enumerate(equivariant_elliptic_genus(M, 3)):
            assert c.is_laurent() and c.is_even()
            if M.pontryagin is not None:
                assert c.at_lambda(1) == twisted_signature(M.pontryagin, expand_R(3)[i])

    @pytest.mark.parametrize("name", sorted(catalog()))
    def test_q0_rigid(self, name):
        M = catalog()[name]
        c = rf_is_constant(equivariant_elliptic_genus(M, 0)[0])
        assert c is not None
        if M.pontryagin is not None:
            assert c == l_genus(M.pontryagin)


class TestAHat:
    def test_s2(self):
        assert equivariant_a_hat(S2) == 0

    def test_cp2_at_two(self):
        r = equivariant_a_hat(CP2)
        assert r(2) == F(-4, 45)
        assert [oracles.a_hat_term_at(w, 2) for w in CP2_WEIGHTS] == [F(8, 45), F(-4, 9), F(8, 45)]
        assert vanishes_at_infinity(r)

    @settings(max_examples=40, deadline=None)
    @given(manifolds)
    def test_vanishes_at_infinity(self, M):
        assert vanishes_at_infinity(equivariant_a_hat(M))

    @settings(max_examples=25, deadline=None)
    @given(manifolds)
    def test_matches_pointwise_sum(self, M):
        expected = sum(oracles.a_hat_term_at(fp.weights, 3, fp.sign) for fp in M.fixed_points)
        assert equivariant_a_hat(M)(3) == expected


class TestSignFlip:
    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-4, 4).filter(bool), min_size=1, max_size=3), st.data())
    def test_flip_one_weight_negates_factors(self, w, data):
        j = data.draw(st.integers(0, len(w) - 1))
        flipped = list(w)
        flipped[j] = -flipped[j]
        a, b = FixedPoint(tuple(w)), FixedPoint(tuple(flipped))
        assert signature_factor(b) == -signature_factor(a)
        assert a_hat_factor(b) == -a_hat_factor(a)
        for R in expand_R(2):
            assert equivariant_twisted_signature(S1ManifoldData(2 * len(w), (b,)), R) == \
                -equivariant_twisted_signature(S1ManifoldData(2 * len(w), (a,)), R)


class TestBalance:
    def test_s2(self):
        r = is_two_balanced(S2)
        assert r.parities == (1, 1) and r.balanced and r.primitive

    def test_cp2(self):
        r = is_two_balanced(CP2)
        assert r.parities == (1, 0, 1) and not r.balanced

    def test_cp2_doubled(self):
        with pytest.warns(NonPrimitiveActionWarning):
            r = is_two_balanced(catalog_cpn((0, 2, 4)))
        assert r.balanced and r.weight_gcd == 2 and not r.primitive

    def test_cp3(self):
        assert is_two_balanced(CP3).balanced

    def test_sign_choice_irrelevant(self):
        a = S1ManifoldData(4, (FixedPoint((1, 2)), FixedPoint((-1, -2))))
        assert is_two_balanced(a).parities == (1, 1)


class TestRigidity:
    def test_s2(self):
        v = check_rigidity(S2, 4)
        assert v.rigid and v.constants == (0,) * 5

    def test_cp2(self):
        v = check_rigidity(CP2, 1)
        assert v.rigid_through == 0 and not v.rigid
        (l1, v1), (l2, v2) = v.witnesses[1].samples
        assert (l1, v1, l2, v2) == (2, 45, 3, F(640, 9))
        assert v.pontryagin_agrees == (True, None)

    def test_cp3(self):
        v = check_rigidity(CP3, 2)
        assert v.rigid and v.constants == (0, 0, 0)
        assert v.pontryagin_agrees == (True, True, True)
        assert v.balance.balanced and not v.flags

    def test_doubled_cp2_flagged(self):
        v = check_rigidity(catalog_cpn((0, 2, 4)), 1)
        assert not v.rigid and v.balance.balanced
        assert any("weight gcd" in f for f in v.flags)

    def test_inconsistent_pontryagin_flagged(self):
        bad = S1ManifoldData(4, CP2.fixed_points, PontryaginData(4, {(1,): 6}))
        v = check_rigidity(bad, 0)
        assert v.pontryagin_agrees == (False,) and not v.consistent

    def test_witness_values_differ(self):
        for w in check_rigidity(catalog()["cp4"], 2).witnesses.values():
            (_, a), (_, b) = w.samples
            assert a != b


class TestLemma2:
    def test_divisible_example(self):
        A = 2 + 3 * (t(2) + t(-2))
        B = 3 * (t(1) + t(-1)) + t(3) + t(-3)
        rep = lemma2_verify(A, B)
        assert rep.symmetric and rep.divisible and rep.parity_difference == 0
        assert rep.quotient == 1 - t(-3)
        one_minus_t = 1 - t(1)
        assert one_minus_t**3 * rep.quotient == A - B

    def test_not_divisible(self):
        rep = lemma2_verify(t(1) + t(-1), t(3) + t(-3))
        assert rep.symmetric and not rep.divisible and rep.quotient is None
        # only (1-t)^2 divides: f = -t^-3 (t^2-1)^2 (t^2+1)
        f = rep.difference
        assert f == -t(-3) * (t(2) - 1) ** 2 * (t(2) + 1)

    def test_equal(self):
        A = 4 + t(1) + t(-1)
        rep = lemma2_verify(A, A)
        assert rep.divisible and rep.parity_difference == 0

    @pytest.mark.parametrize("bad", [MU, 1 + t(1), -t(1) - t(-1), F(1, 2) * (t(1) + t(-1))])
    def test_non_character_rejected(self, bad):
        with pytest.raises(ValueError):
            lemma2_verify(bad, LaurentPoly.const(1))

    def test_weight_sum(self):
        assert weight_sum(2 + 3 * (t(2) + t(-2))) == 6

    def test_randomized(self):
        rng = random.Random(20261018)
        cube = (1 - t(1)) ** 3
        for _ in range(100):
            # t^3 P(t) = -P(1/t)  <=>  b_{-3-i} = -b_i
            P = LaurentPoly()
            for i in rng.sample(range(-1, 5), rng.randint(1, 3)):
                b = rng.choice([-3, -2, -1, 1, 2, 3])
                P = P + b * (t(i) - t(-3 - i))
            f = cube * P
            base = sum((rng.randint(0, 2) * (t(m) + t(-m)) for m in range(1, 5)), LaurentPoly.const(rng.randint(0, 3)))
            A = base + LaurentPoly({e: c for e, c in f.items() if c > 0})
            B = base + LaurentPoly({e: -c for e, c in f.items() if c < 0})
            rep = lemma2_verify(A, B)
            assert rep.symmetric and rep.divisible
            assert rep.parity_difference == 0
            assert rep.quotient == P

    def test_consistency_error_type(self):
        assert issubclass(Lemma2ConsistencyError, AssertionError)


class TestProduct:
    def test_s2xs2(self):
        M = product_manifold(S2, S2)
        assert M.dim == 4
        assert sorted(fp.weights for fp in M.fixed_points) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
        assert M.pontryagin.numbers == {}

    def test_point_is_identity(self):
        M = product_manifold(CP2, point())
        assert M.fixed_points == CP2.fixed_points and M.pontryagin.numbers == CP2.pontryagin.numbers

    def test_signature_factorizes(self):
        for A, B in [(S2, S2), (CP2, S2), (CP2, CP2), (CP3, S2)]:
            assert equivariant_signature(product_manifold(A, B)) == \
                equivariant_signature(A) * equivariant_signature(B)

    def test_cp2xcp2_numbers(self):
        # p(CP2 x CP2) = (1+3a)(1+3b) with a^2 = b^2 = 1: p1^2 = 18 a b -> 18, p2 = 9
        M = product_manifold(CP2, CP2)
        assert M.pontryagin.numbers == {(1, 1): 18, (2,): 9}
        assert l_genus(M.pontryagin) == 1


def test_point_a_hat_is_empty_product():
    assert equivariant_a_hat(point()) == 1
    assert not vanishes_at_infinity(equivariant_a_hat(point()))
