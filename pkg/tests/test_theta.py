import cmath
import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ceresa3 import theta as th

ZERO_CHAR = th.ThetaChar((0, 0, 0), (0, 0, 0))
DOC_TAU = th.generic_tau()


def naive_theta(a, b, tau, R=5):
    """Plain triple loop over a cube; independent of the vectorized code."""
    g = len(a)
    s = 0j
    for n in itertools.product(range(-R, R + 1), repeat=g):
        v = [n[i] + a[i] for i in range(g)]
        q = sum(v[i] * tau[i][j] * v[j] for i in range(g) for j in range(g))
        s += cmath.exp(1j * math.pi * q + 2j * math.pi * sum(v[i] * b[i] for i in range(g)))
    return s


@st.composite
def taus(draw):
    x = draw(st.lists(st.floats(-0.5, 0.5), min_size=3, max_size=3))
    # off-diagonal real parts bounded away from 0 keep the point off the decomposable locus
    x += [s * m for s, m in zip(draw(st.lists(st.sampled_from([-1, 1]), min_size=3, max_size=3)),
                                draw(st.lists(st.floats(0.05, 0.5), min_size=3, max_size=3)))]
    y = draw(st.lists(st.floats(-0.2, 0.2), min_size=3, max_size=3))
    d = draw(st.lists(st.floats(0.8, 1.5), min_size=3, max_size=3))
    Y = np.diag(d)
    Y[0, 1] = Y[1, 0] = y[0]
    Y[0, 2] = Y[2, 0] = y[1]
    Y[1, 2] = Y[2, 1] = y[2]
    X = np.zeros((3, 3))
    for (i, j), v in zip([(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)], x):
        X[i, j] = X[j, i] = v
    return th.PeriodMatrix(X + 1j * Y)


class TestCharacteristics:
    def test_counts(self):
        assert len(th.enumerate_even()) == 36
        assert len(th.enumerate_odd()) == 28
        assert len(th.enumerate_all()) == 64
        assert 2 ** 2 * (2 ** 3 + 1) == 36

    def test_parity(self):
        assert ZERO_CHAR.is_even
        assert not th.ThetaChar((1, 0, 0), (1, 0, 0)).is_even
        assert th.ThetaChar((1, 0, 0), (1, 0, 0)) not in th.enumerate_even()

    def test_parse(self):
        assert th.ThetaChar.parse("[101;011]") == th.ThetaChar((1, 0, 1), (0, 1, 1))
        with pytest.raises(ValueError):
            th.ThetaChar((2, 0, 0), (0, 0, 0))


class TestPeriodMatrix:
    def test_not_symmetric(self):
        t = 1j * np.eye(3)
        t[0, 1] = 0.1
        with pytest.raises(th.ValidationError, match="symmetric"):
            th.PeriodMatrix(t)

    def test_not_positive(self):
        with pytest.raises(th.ValidationError, match="positive definite"):
            th.PeriodMatrix(np.diag([1j, -1j, 1j]))

    def test_json(self):
        t = th.PeriodMatrix.from_json(DOC_TAU.to_json())
        assert np.array_equal(t.tau, DOC_TAU.tau)

    def test_lambda_bound(self):
        Y = np.array([[1.0, 0.9, 0.0], [0.9, 1.0, 0.0], [0.0, 0.0, 1.0]])
        lam = th.lambda_min_lower_bound(Y)
        assert 0 < lam <= np.linalg.eigvalsh(Y).min()
        # Gershgorin fails here (1 - 0.95 - 0.95 < 0), bisection must take over
        Y2 = np.array([[1.0, 0.95, 0.95], [0.95, 1.0, 0.95], [0.95, 0.95, 1.0]])
        lam2 = th.lambda_min_lower_bound(Y2)
        assert 0 < lam2 <= np.linalg.eigvalsh(Y2).min()
        assert lam2 > 0.9 * np.linalg.eigvalsh(Y2).min()


class TestThetaConstant:
    def test_odd_is_exactly_zero(self):
        v = th.theta_constant(th.ThetaChar((1, 0, 0), (1, 0, 0)), DOC_TAU)
        assert v.value == 0 and v.radius == 0

    def test_diagonal_oracle(self):
        v = th.theta_constant(ZERO_CHAR, 1j * np.eye(3), 1e-14)
        oracle = float(mpmath.pi ** 0.25 / mpmath.gamma(0.75)) ** 3
        assert abs(v.value - oracle) < 1e-8
        assert abs(v.value - th.theta_1d(0, 0, 1j) ** 3) < 1e-12

    def test_integer_shift_periodicity(self):
        shifted = DOC_TAU + 2 * np.diag([1, 0, 0])
        a = th.theta_constant(ZERO_CHAR, DOC_TAU).value
        b = th.theta_constant(ZERO_CHAR, shifted).value
        assert abs(a - b) < 1e-11

    def test_precision_unreachable(self):
        with pytest.raises(ValueError, match="precision unreachable"):
            th.theta_constant(ZERO_CHAR, 0.01j * np.eye(3), 1e-300)

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            th.theta_constant(ZERO_CHAR, DOC_TAU, 0)

    @settings(max_examples=20)
    @given(taus(), st.sampled_from(th.enumerate_even()))
    def test_against_naive_oracle(self, tau, ch):
        v = th.theta_constant(ch, tau, 1e-12).value
        ref = naive_theta(list(ch.a), list(ch.b), tau.tau.tolist())
        assert abs(v - ref) < 1e-10

    @given(taus(), st.sampled_from(th.enumerate_even()), st.sampled_from([1e-4, 1e-7, 1e-10]))
    def test_eps_refinement(self, tau, ch, eps):
        a = th.theta_constant(ch, tau, eps).value
        b = th.theta_constant(ch, tau, eps / 10).value
        assert abs(a - b) <= 1.1 * eps

    @settings(max_examples=10)
    @given(taus())
    def test_characteristic_integer_shifts(self, tau):
        t = tau.tau.tolist()
        for ch in th.enumerate_even()[:6]:
            a, b = list(ch.a), list(ch.b)
            base = th.theta_constant(ch, tau, 1e-13).value
            for m, n in (((1, 0, 0), (0, 0, 0)), ((0, -1, 1), (1, 0, 2))):
                shifted = naive_theta([a[i] + m[i] for i in range(3)],
                                      [b[i] + n[i] for i in range(3)], t)
                phase = cmath.exp(2j * math.pi * sum(a[i] * n[i] for i in range(3)))
                assert abs(shifted - phase * base) < 1e-9

    def test_block_factorization(self):
        t1 = 0.2 + 1.1j
        T2 = np.array([[0.1 + 1.0j, 0.3 + 0.2j], [0.3 + 0.2j, -0.2 + 1.3j]])
        tau = th.block_tau(t1, T2)
        for ch in th.enumerate_even():
            a, b = list(ch.a), list(ch.b)
            one = th.theta_1d(a[0], b[0], t1)
            two = naive_theta(a[1:], b[1:], T2.tolist(), R=8)
            assert abs(th.theta_constant(ch, tau, 1e-12).value - one * two) < 1e-10

    def test_mpmath_path_agrees(self):
        ch = th.ThetaChar((1, 0, 0), (0, 1, 1))
        lo = th.theta_constant(ch, DOC_TAU, 1e-12).value
        hi = th.theta_constant(ch, DOC_TAU, 1e-25, precision=30).value
        assert abs(complex(hi) - lo) < 1e-12


class TestChi18:
    def test_diagonal_vanishes(self):
        assert abs(th.chi18(1j * np.eye(3)).value) < 1e-12

    def test_block_vanishes(self):
        tau = th.block_tau(1j, 1j * np.eye(2))
        assert abs(th.chi18(tau).value) < 1e-12

    def test_block_generic_vanishes(self):
        tau = th.block_tau(0.3 + 1.2j, np.array([[1j, 0.3], [0.3, 1.1j]]))
        assert abs(th.chi18(tau).value) < 1e-12

    def test_documented_tau_value_with_mpmath(self):
        c = th.chi18(DOC_TAU)
        hi = th.chi18(DOC_TAU, 1e-20, precision=30)
        assert abs(complex(hi.value) - c.value) < 1e-6 * abs(c.value)
        assert c.rel_err < 1e-6

    @given(taus(), st.permutations(range(3)))
    def test_permutation_invariance(self, tau, perm):
        P = np.eye(3)[:, list(perm)]
        a = th.chi18(tau)
        b = th.chi18(tau.conjugated(P))
        assert abs(a.log_abs - b.log_abs) < 1e-8

    def test_min_null_reducible(self):
        m = th.min_theta_null(1j * np.eye(3))
        assert m.modulus < 1e-10 and m.hyperelliptic_candidate

    def test_min_null_generic(self):
        m = th.min_theta_null(DOC_TAU)
        assert m.modulus > 1e-4 and not m.hyperelliptic_candidate

    def test_min_null_block_is_odd_times_odd(self):
        tau = th.block_tau(0.3 + 1.2j, np.array([[1j, 0.3], [0.3, 1.1j]]))
        ch = th.min_theta_null(tau).char
        first_odd = (ch.mu[0] * ch.nu[0]) % 2 == 1
        rest_odd = (ch.mu[1] * ch.nu[1] + ch.mu[2] * ch.nu[2]) % 2 == 1
        assert first_odd and rest_odd


class TestTransforms:
    def test_zero_shift_exact(self):
        r = th.transform_check(DOC_TAU, "translation", np.zeros((3, 3)))
        assert r.rel_deviation == 0

    def test_translation(self):
        r = th.transform_check(DOC_TAU, "translation", np.diag([1, 0, 0]))
        assert r.rel_deviation < 1e-9

    def test_translation_offdiagonal(self):
        S = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        assert th.transform_check(DOC_TAU, "translation", S).rel_deviation < 1e-9

    def test_inversion(self):
        assert th.transform_check(DOC_TAU, "inversion").rel_deviation < 1e-6

    @given(taus())
    def test_inversion_random(self, tau):
        assert th.transform_check(tau, "inversion").rel_deviation < 1e-6

    def test_rejects_bad_shift(self):
        with pytest.raises(th.ValidationError):
            th.transform_check(DOC_TAU, "translation", np.diag([0.5, 0, 0]))
        with pytest.raises(ValueError):
            th.transform_check(DOC_TAU, "rotation")


class TestCusp:
    def test_slope_tau11(self):
        fit = th.cusp_order(DOC_TAU, [1.0 + 0.5 * k for k in range(7)])
        assert abs(fit.slope - 2) <= 0.1

    def test_slope_tau22(self):
        assert abs(th.cusp_order(DOC_TAU, direction=1).slope - 2) <= 0.1

    def test_control(self):
        assert abs(th.cusp_order(DOC_TAU, control=True).slope) <= 0.01

    def test_sixteen_characteristics_carry_the_cusp(self):
        # each even characteristic with a1 = 1/2 decays like q1^(1/8); 16 of them give order 2
        assert sum(1 for c in th.enumerate_even() if c.mu[0] == 1) == 16

    def test_bad_samples(self):
        with pytest.raises(ValueError):
            th.cusp_order(DOC_TAU, [2.0, 1.0])

    def test_unreachable_t(self):
        with pytest.raises(ValueError, match="increase precision or lower t"):
            th.cusp_order(DOC_TAU, [100.0, 200.0, 300.0, 400.0])
