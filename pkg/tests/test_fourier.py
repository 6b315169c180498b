import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from qasym.fourier import (SQRT2PI, DecayProfile, HorizontalStrip, complex_quad,
                           default_profile_for, gaussian_symbol, inverse_fourier,
                           make_symbol, standard_symbol)


class TestComplexQuad:
    def test_closed_form_oscillator(self):
        # oracle: int_0^1 e^{ix} dx = (e^i - 1)/i
        val, err, _ = complex_quad(lambda x: cmath.exp(1j * x), 0.0, 1.0)
        exact = (cmath.exp(1j) - 1.0) / 1j
        assert val == pytest.approx(exact, rel=1e-12)
        assert abs(val - exact) <= max(err, 1e-13)

    def test_matches_scipy_componentwise(self):
        f = lambda x: cmath.exp(-x * x) * (math.cos(3 * x) + 1j * x)
        val, _, _ = complex_quad(f, -2.0, 5.0)
        re, _ = quad(lambda x: f(x).real, -2.0, 5.0)
        im, _ = quad(lambda x: f(x).imag, -2.0, 5.0)
        assert val == pytest.approx(re + 1j * im, rel=1e-12)


class TestDecayProfile:
    def test_envelope_dominates_standard_symbol(self, rng):
        beta, mu = 1.3, 3.5
        f = standard_symbol(beta, mu)
        prof = DecayProfile(C=1.0, mu=mu, beta=beta)
        for m in rng.uniform(-40, 40, size=200):
            assert abs(f(m)) <= float(prof.bound(m)) * (1 + 1e-12)
        ok, worst, _ = prof.certify(f, rng.uniform(-40, 40, size=400))
        assert ok and worst <= 1.0 + 1e-12

    def test_certify_flags_violations(self):
        prof = DecayProfile(C=1.0, mu=3.0, beta=1.0)
        too_big = lambda m: 3.0 * np.exp(-np.abs(m))
        ok, worst, _ = prof.certify(too_big, np.linspace(-5, 5, 101))
        assert not ok and worst > 1.0

    def test_cutoff_controls_true_tail(self):
        # oracle: numeric strip-weighted tail of the envelope itself
        prof = DecayProfile(C=2.0, mu=3.0, beta=0.7)
        for bprime in (0.0, 0.3):
            for tol in (1e-8, 1e-12):
                M = prof.cutoff(bprime, tol)
                tail, _ = quad(lambda m: float(prof.bound(m))
                               * math.exp(bprime * m), M, np.inf)
                assert 2.0 / SQRT2PI * tail <= tol * (1 + 1e-6)

    def test_validation(self):
        with pytest.raises(ValueError):
            DecayProfile(C=1.0, mu=0.9, beta=1.0)   # needs mu > 1
        with pytest.raises(ValueError):
            DecayProfile(C=1.0, mu=2.0, beta=-1.0)
        with pytest.raises(ValueError):
            DecayProfile(C=0.0, mu=2.0, beta=1.0)


class TestInverseFourier:
    def test_gaussian_closed_form(self):
        # oracle: (2pi)^{-1/2} int e^{-m^2} e^{izm} dm = e^{-z^2/4}/sqrt(2)
        prof = default_profile_for("gaussian", 1.0, 3.0)
        for z in (0.0, 0.5, -1.2, 0.3 + 0.2j, 2.0 - 0.4j):
            res = inverse_fourier(gaussian_symbol(), z, prof,
                                  strip=HorizontalStrip(0.5), tol=1e-12)
            exact = cmath.exp(-z * z / 4.0) / math.sqrt(2.0)
            assert res.value == pytest.approx(exact, rel=1e-9, abs=1e-11)

    def test_standard_symbol_against_direct_quadrature(self):
        beta, mu = 1.0, 3.0
        f = standard_symbol(beta, mu)
        prof = DecayProfile(C=1.0, mu=mu, beta=beta)
        for z in (0.0, 1.0, -2.5):
            res = inverse_fourier(f, z, prof, tol=1e-12)
            re, _ = quad(lambda m: (f(m) * cmath.exp(1j * z * m)).real,
                         -np.inf, np.inf, limit=400)
            assert res.value.real == pytest.approx(re / SQRT2PI, abs=1e-9)
            assert abs(res.value.imag) < 1e-9   # even symbol, real z

    def test_error_estimate_is_honest(self):
        prof = default_profile_for("gaussian", 1.0, 3.0)
        res = inverse_fourier(gaussian_symbol(), 0.7, prof, tol=1e-10)
        exact = cmath.exp(-0.7 * 0.7 / 4.0) / math.sqrt(2.0)
        assert abs(res.value - exact) <= 10.0 * res.error_estimate + 1e-15

    def test_cutoff_grows_as_tol_shrinks(self):
        prof = DecayProfile(C=1.0, mu=3.0, beta=1.0)
        f = standard_symbol(1.0, 3.0)
        r1 = inverse_fourier(f, 0.3, prof, tol=1e-6)
        r2 = inverse_fourier(f, 0.3, prof, tol=1e-12)
        assert r2.cutoff > r1.cutoff

    def test_strip_limits_imaginary_part(self):
        prof = DecayProfile(C=1.0, mu=3.0, beta=1.0)
        strip = HorizontalStrip(0.5)
        f = standard_symbol(1.0, 3.0)
        with pytest.raises(ValueError):
            inverse_fourier(f, 0.3 + 0.9j, prof, strip=strip)

    @given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.floats(-0.4, 0.4))
    def test_linearity(self, a, b, zi):
        z = 0.4 + zi * 1j
        prof = DecayProfile(C=3.0, mu=3.0, beta=1.0)
        strip = HorizontalStrip(0.6)
        f = standard_symbol(1.0, 3.0)
        g = make_symbol("oscillating", 1.0, 3.0)
        fg = lambda m: a * f(m) + b * g(m)
        lhs = inverse_fourier(fg, z, prof, strip=strip, tol=1e-11).value
        rhs = a * inverse_fourier(f, z, prof, strip=strip, tol=1e-11).value \
            + b * inverse_fourier(g, z, prof, strip=strip, tol=1e-11).value
        assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-9)
