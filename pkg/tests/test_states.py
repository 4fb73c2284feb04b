"""State construction, truncation verdicts and time evolution."""

import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from gksqueeze import (
    AsymptoticSeriesWarning,
    DivergentSeriesError,
    SqueezedParams,
    StateClass,
    TruncationError,
    TruncationPolicy,
    build_squeezed,
    convergence_check,
    evolve,
    gk_coherent,
    gk_coherent_dual,
    harmonic,
    hydrogen,
    mandel_q,
    nonlinearity_factorial,
    poschl_teller,
    quadrature_variances,
    square_well,
    trapped_ion,
    trapped_ion_nonlinearity,
)

ALL = list(StateClass)


def squeezed_vacuum(r, phi, n_max):
    """Textbook amplitudes on |2n>, up to the sign convention of the phase."""
    out = []
    for n in range(n_max + 1):
        log_mag = 0.5 * math.lgamma(2 * n + 1) - n * math.log(2) - math.lgamma(n + 1)
        mag = math.exp(log_mag + n * math.log(math.tanh(r)))
        out.append(mag * np.exp(1j * n * phi) / math.sqrt(math.cosh(r)))
    return np.array(out)


class TestHarmonicClosedForm:
    @pytest.mark.parametrize("r", [0.3, 1.0, 2.0])
    @pytest.mark.parametrize("phi", [0.0, 0.8])
    def test_class_one_is_squeezed_vacuum(self, r, phi):
        st = build_squeezed(StateClass.I, harmonic(), SqueezedParams(r, phi))
        ref = squeezed_vacuum(r, phi, st.truncation)
        np.testing.assert_allclose(st.coeffs, ref, rtol=1e-11, atol=1e-15)

    def test_p0_value(self):
        st = build_squeezed("I", harmonic(), SqueezedParams(1.0))
        assert st.probabilities[0] == pytest.approx(0.64805427366, rel=1e-10)

    def test_norm_constant(self):
        st = build_squeezed("I", harmonic(), SqueezedParams(1.0))
        assert st.norm_constant == pytest.approx(0.805018, rel=1e-6)

    def test_alpha_phase(self):
        st = build_squeezed("I", harmonic(), SqueezedParams(0.7, 0.0, 0.4))
        n = np.arange(st.truncation + 1)
        np.testing.assert_allclose(np.angle(st.coeffs), np.angle(np.exp(-0.4j * 2 * n)), atol=1e-12)


class TestBruteForce:
    def test_poschl_teller_class_two_against_exact_rationals(self):
        r, N = 1.0, 11
        st = build_squeezed("II", poschl_teller(5), SqueezedParams(r))
        assert st.truncation == N
        t2 = (math.tanh(r) / 2) ** 2
        terms = []
        for n in range(N + 1):
            jack = 1
            for k in range(1, 2 * n + 1):
                jack *= k * (k + 5)
            ratio = Fraction(math.factorial(2 * n) ** 2, math.factorial(n) ** 2 * jack)
            terms.append(float(ratio) * t2**n)
        p = np.array(terms) / sum(terms)
        np.testing.assert_allclose(st.probabilities, p, rtol=1e-12)

    def test_hydrogen_class_one_against_exact_rationals(self):
        r = 1.0
        st = build_squeezed("I", hydrogen(), SqueezedParams(r))
        t2 = (math.tanh(r) / 2) ** 2
        terms = []
        for n in range(st.truncation + 1):
            jack = Fraction(1)
            for k in range(1, 2 * n + 1):
                jack *= Fraction(k * (k + 2), (k + 1) ** 2)
            terms.append(float(jack / math.factorial(n) ** 2) * t2**n)
        p = np.array(terms) / sum(terms)
        np.testing.assert_allclose(st.probabilities, p, rtol=1e-12)


class TestClassIdentities:
    # [eps_m]! = (m!)^2/[e_m]! makes III mirror II and IV mirror I in magnitude
    @pytest.mark.parametrize(
        "spec, pair",
        [
            (poschl_teller(5), ("II", "III")),
            (square_well(), ("II", "III")),
            (hydrogen(), ("I", "IV")),
            (trapped_ion(0.5), ("I", "IV")),
        ],
    )
    def test_magnitudes_coincide(self, spec, pair):
        p = SqueezedParams(1.0, 0.3, 0.9)
        a = build_squeezed(pair[0], spec, p)
        b = build_squeezed(pair[1], spec, p)
        assert a.truncation == b.truncation
        np.testing.assert_allclose(np.abs(a.coeffs), np.abs(b.coeffs), rtol=1e-12)

    def test_phases_differ_for_non_self_dual(self):
        p = SqueezedParams(1.0, 0.0, 0.9)
        a = build_squeezed("II", poschl_teller(5), p)
        b = build_squeezed("III", poschl_teller(5), p)
        assert np.max(np.abs(a.coeffs - b.coeffs)) > 1e-3


class TestVacuum:
    @pytest.mark.parametrize("cls", ALL)
    def test_r_zero_exact(self, cls):
        st = build_squeezed(cls, hydrogen(), SqueezedParams(0.0, 1.0, 2.0))
        assert st.is_vacuum and st.coeffs.tolist() == [1.0]
        assert st.amplitudes().tolist() == [1.0]


class TestDivergence:
    @pytest.mark.parametrize(
        "cls, spec",
        [("I", poschl_teller(5)), ("IV", square_well()), ("II", hydrogen()), ("III", hydrogen())],
    )
    def test_divergent_classes_refuse(self, cls, spec):
        with pytest.raises(DivergentSeriesError) as info:
            build_squeezed(cls, spec, SqueezedParams(0.5))
        assert info.value.report.verdict == "divergent"

    def test_force_truncate_labels_state(self):
        st = build_squeezed("II", hydrogen(), SqueezedParams(0.5), force_truncate=7)
        assert st.forced and st.truncation == 7
        assert st.probabilities.sum() == pytest.approx(1.0)

    def test_cap_too_small_is_truncation_error(self):
        with pytest.raises(TruncationError):
            build_squeezed("I", harmonic(), SqueezedParams(2.0), TruncationPolicy(max_n=5))

    def test_ratio_estimate_tracks_tanh_squared(self):
        for r in (0.5, 1.0, 2.0):
            rep = convergence_check("I", harmonic(), r)
            assert rep.verdict == "convergent"
            assert rep.ratio_estimate == pytest.approx(math.tanh(r) ** 2, rel=0.05)

    def test_check_does_not_raise_on_divergence(self):
        rep = convergence_check("II", hydrogen(), 0.1)
        assert rep.verdict == "divergent" and rep.ratio_estimate > 1

    def test_looser_tolerance_truncates_earlier(self):
        p = SqueezedParams(1.0)
        tight = build_squeezed("I", harmonic(), p)
        loose = build_squeezed("I", harmonic(), p, TruncationPolicy(tol=1e-8))
        assert loose.truncation < tight.truncation
        assert loose.probabilities[0] == pytest.approx(tight.probabilities[0], rel=1e-7)

    def test_tail_bound_below_tolerance(self):
        st = build_squeezed("I", harmonic(), SqueezedParams(1.5))
        assert 0 < st.tail_bound < 1e-14


class TestAsymptotic:
    def test_regrowth_is_flagged(self):
        with pytest.warns(AsymptoticSeriesWarning):
            st = build_squeezed("II", trapped_ion(0.1), SqueezedParams(0.5, 0.0, 1.5))
        assert st.convergence.asymptotic
        assert st.convergence.regrowth_index > st.truncation

    def test_large_late_bump_does_not_move_truncation(self):
        # terms regrow by many orders near a Laguerre zero; keep the early cut
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            st = build_squeezed("II", trapped_ion(0.1), SqueezedParams(0.1, 0.0, 1.5))
        assert st.truncation < 50 and st.convergence.asymptotic
        assert quadrature_variances(st)[0] < 0.5

    def test_negligible_bump_is_not_asymptotic(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            st = build_squeezed("I", trapped_ion(0.5), SqueezedParams(1.0))
        assert not st.convergence.asymptotic


class TestEvolve:
    @pytest.mark.parametrize("cls", ["I", "II"])
    def test_evolve_equals_rebuild(self, cls):
        spec = poschl_teller(5) if cls == "II" else harmonic()
        st = build_squeezed(cls, spec, SqueezedParams(1.0, 0.2, 0.5))
        moved = evolve(st, 0.9)
        ref = build_squeezed(cls, spec, SqueezedParams(1.0, 0.2, -0.4))
        np.testing.assert_allclose(moved.coeffs, ref.coeffs, atol=1e-12)
        assert moved.params.alpha == pytest.approx(-0.4)

    def test_evolve_composes_and_keeps_distribution(self):
        st = build_squeezed("III", poschl_teller(5), SqueezedParams(1.0))
        a = evolve(evolve(st, 0.4), 1.1)
        b = evolve(st, 1.5)
        np.testing.assert_allclose(a.coeffs, b.coeffs, atol=1e-12)
        np.testing.assert_allclose(a.probabilities, st.probabilities, rtol=1e-15)


class TestParams:
    @pytest.mark.parametrize("kw", [{"r": -0.1}, {"r": math.inf}, {"r": 1.0, "alpha": math.nan}])
    def test_invalid_params(self, kw):
        with pytest.raises(ValueError):
            SqueezedParams(**kw)

    def test_xi(self):
        assert SqueezedParams(1.0, math.pi / 2).xi == pytest.approx(1j * math.tanh(1.0))

    @pytest.mark.parametrize("kw", [{"tol": 0}, {"tol": 2}, {"tail_window": 0}, {"max_n": 2}])
    def test_invalid_policy(self, kw):
        with pytest.raises(ValueError):
            TruncationPolicy(**kw)

    @pytest.mark.parametrize("text, cls", [("I", "I"), ("classIII", "III"), ("4", "IV"), ("ii", "II")])
    def test_class_parse(self, text, cls):
        assert StateClass.parse(text) is StateClass(cls)

    def test_class_parse_rejects(self):
        with pytest.raises(ValueError):
            StateClass.parse("V")


class TestCoherent:
    def test_harmonic_is_poissonian(self):
        z = 1.3 * np.exp(0.4j)
        st = gk_coherent(harmonic(), z)
        n = st.levels
        p = np.array([math.exp(-abs(z) ** 2 + 2 * k * math.log(abs(z)) - math.lgamma(k + 1)) for k in n])
        np.testing.assert_allclose(st.probabilities, p, rtol=1e-12)
        np.testing.assert_allclose(np.angle(st.coeffs[1:4]), 0.4 * n[1:4], atol=1e-12)

    def test_dual_of_harmonic_same(self):
        a = gk_coherent(harmonic(), 0.8, alpha=0.3)
        b = gk_coherent_dual(harmonic(), 0.8, alpha=0.3)
        np.testing.assert_allclose(a.coeffs, b.coeffs, atol=1e-15)

    def test_hydrogen_radius_of_convergence(self):
        assert gk_coherent(hydrogen(), 0.9).convergence.verdict == "convergent"
        with pytest.raises(DivergentSeriesError):
            gk_coherent(hydrogen(), 1.1)

    def test_zero_is_vacuum(self):
        assert gk_coherent(poschl_teller(3), 0).coeffs.tolist() == [1.0]


class TestNonlinearityFactorial:
    def test_harmonic_is_pure_phase(self):
        for n in range(6):
            v = nonlinearity_factorial(harmonic(), +1, 0.3, n)
            assert v == pytest.approx(np.exp(-0.3j * n))
            assert nonlinearity_factorial(harmonic(), "-", 0.3, n) == pytest.approx(np.exp(0.3j * n))

    def test_magnitude_is_product_of_nonlinearity(self):
        # sqrt([e_n]!/n!) = prod |f(k)| when e_k = k f(k)^2
        f = trapped_ion_nonlinearity(0.1)
        s = trapped_ion(0.1)
        for n in range(1, 10):
            prod = math.prod(abs(f(k)) for k in range(1, n + 1))
            assert abs(nonlinearity_factorial(s, 1, 0.0, n)) == pytest.approx(prod, rel=1e-12)

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            nonlinearity_factorial(harmonic(), 0, 0.0, 2)


class TestTrappedIonPoles:
    def test_class_one_sum_includes_pole_bump(self):
        # e_n has a pole near the first zero of L_n^0(eta^2); the class I
        # series grows into it and then decays, so the bump is part of the sum
        eta, r, n_top = 0.3, 1.0, 60
        st = build_squeezed("I", trapped_ion(eta), SqueezedParams(r))
        assert not st.convergence.asymptotic
        x = mpmath.mpf(eta) ** 2
        t2 = mpmath.tanh(r) ** 2 / 4
        log_jack = [mpmath.mpf(0)]
        for k in range(1, 2 * n_top + 1):
            f = mpmath.laguerre(k, 1, x) / ((k + 1) * mpmath.laguerre(k, 0, x))
            log_jack.append(log_jack[-1] + mpmath.log(k * f**2))
        w = [mpmath.exp(log_jack[2 * n] - 2 * mpmath.loggamma(n + 1)) * t2**n for n in range(n_top + 1)]
        z = mpmath.fsum(w)
        mean = mpmath.fsum(2 * n * wn for n, wn in enumerate(w)) / z
        mean2 = mpmath.fsum((2 * n) ** 2 * wn for n, wn in enumerate(w)) / z
        q = float((mean2 - mean**2) / mean - 1)
        assert mandel_q(st) == pytest.approx(q, rel=1e-9)
        assert q < -0.8

    def test_pole_beyond_cap_is_flagged(self):
        with pytest.warns(AsymptoticSeriesWarning):
            st = build_squeezed("I", trapped_ion(0.02), SqueezedParams(1.0))
        assert st.convergence.asymptotic
