"""Photon statistics and quadrature variances against closed forms and dense operators."""

import math

import numpy as np
import pytest

from gksqueeze import (
    SqueezedParams,
    a_squared_expectation,
    build_squeezed,
    gk_coherent,
    harmonic,
    hydrogen,
    is_squeezed,
    mandel_q,
    number_moments,
    photon_distribution,
    poschl_teller,
    quadrature_variances,
    statistics,
    trapped_ion,
)
from gksqueeze.acceptance import class_one_a2_oracle
from gksqueeze.states import ConvergenceReport, FockState
from gksqueeze.stats import a_expectation


def dense_moments(amp):
    """<n>, <n^2>, <a^2>, dx^2, dp^2 from explicit matrices on a padded space."""
    dim = amp.size + 3
    psi = np.zeros(dim, dtype=complex)
    psi[: amp.size] = amp
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    n_op = a.conj().T @ a
    x = (a + a.conj().T) / math.sqrt(2)
    p = (a - a.conj().T) / (1j * math.sqrt(2))

    def ev(op):
        return psi.conj() @ op @ psi

    var = lambda op: (ev(op @ op) - ev(op) ** 2).real
    return ev(n_op).real, ev(n_op @ n_op).real, ev(a @ a), var(x), var(p)


def fock(n):
    rep = ConvergenceReport("convergent", 0.0, 1, 0)
    return FockState(np.array([n]), np.zeros(1), np.zeros(1), 0, rep)


class TestHarmonicClosedForms:
    @pytest.mark.parametrize("r", [0.1, 0.7, 1.0, 2.0])
    def test_mean_and_mandel(self, r):
        st = build_squeezed("I", harmonic(), SqueezedParams(r))
        mean, _ = number_moments(st)
        assert mean == pytest.approx(math.sinh(r) ** 2, rel=1e-12)
        assert mandel_q(st) == pytest.approx(math.cosh(2 * r), abs=1e-8)

    @pytest.mark.parametrize("phi, alpha", [(0.0, 0.0), (0.5, 0.0), (0.0, 1.1), (1.0, 2.3)])
    def test_a_squared_phase(self, phi, alpha):
        r = 1.0
        st = build_squeezed("I", harmonic(), SqueezedParams(r, phi, alpha))
        expected = np.exp(1j * (phi - 2 * alpha)) * math.sinh(r) * math.cosh(r)
        assert a_squared_expectation(st) == pytest.approx(expected, abs=1e-12)

    def test_variances_at_r_one(self):
        st = build_squeezed("I", harmonic(), SqueezedParams(1.0))
        var_x, var_p = quadrature_variances(st)
        assert var_x == pytest.approx(math.exp(2) / 2, rel=1e-12)
        assert var_p == pytest.approx(math.exp(-2) / 2, rel=1e-12)

    def test_alpha_window_formula(self):
        r = 1.0
        for alpha in np.linspace(0, 3.5, 15):
            st = build_squeezed("I", harmonic(), SqueezedParams(r, 0.0, alpha))
            expected = math.sinh(r) ** 2 + 0.5 + math.sinh(r) * math.cosh(r) * math.cos(2 * alpha)
            assert quadrature_variances(st)[0] == pytest.approx(expected, abs=1e-12)


class TestDenseOracle:
    @pytest.mark.parametrize(
        "cls, spec",
        [
            ("I", harmonic()),
            ("II", poschl_teller(5)),
            ("III", poschl_teller(5)),
            ("I", hydrogen()),
            ("IV", trapped_ion(0.5)),
        ],
    )
    def test_moments_match_operators(self, cls, spec):
        st = build_squeezed(cls, spec, SqueezedParams(0.8, 0.3, 1.2))
        mean, mean2, a2, vx, vp = dense_moments(st.amplitudes())
        assert number_moments(st) == pytest.approx((mean, mean2), rel=1e-12)
        assert a_squared_expectation(st) == pytest.approx(a2, abs=1e-12)
        assert quadrature_variances(st) == pytest.approx((vx, vp), abs=1e-12)

    def test_coherent_mean_field_subtracted(self):
        st = gk_coherent(harmonic(), 1.2 * np.exp(0.7j))
        _, _, _, vx, vp = dense_moments(st.amplitudes())
        assert quadrature_variances(st) == pytest.approx((vx, vp), abs=1e-12)
        assert quadrature_variances(st) == pytest.approx((0.5, 0.5), abs=1e-12)
        assert a_expectation(st) == pytest.approx(1.2 * np.exp(0.7j), abs=1e-12)


class TestClosedFormASquared:
    @pytest.mark.parametrize("spec", [harmonic(), hydrogen()])
    def test_generic_matches_class_one_sum(self, spec):
        st = build_squeezed("I", spec, SqueezedParams(1.0, 0.0, 0.7))
        assert a_squared_expectation(st) == pytest.approx(
            class_one_a2_oracle(spec, 1.0, 0.7, st.truncation), abs=1e-12
        )


class TestDistribution:
    def test_parity_and_sum(self):
        st = build_squeezed("II", poschl_teller(5), SqueezedParams(1.5))
        p = photon_distribution(st)
        assert np.all(p[1::2] == 0)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_has_undefined_q(self):
        st = build_squeezed("I", harmonic(), SqueezedParams(0.0))
        assert mandel_q(st) is None
        rep = statistics(st)
        assert rep.Q is None and rep.var_x == 0.5 and not rep.x_squeezed

    def test_number_state(self):
        st = fock(3)
        assert mandel_q(st) == -1
        assert quadrature_variances(st) == pytest.approx((3.5, 3.5))

    def test_threshold_is_strict(self):
        assert is_squeezed(0.4999999)
        assert not is_squeezed(0.5)


class TestReport:
    def test_report_fields(self):
        st = build_squeezed("I", harmonic(), SqueezedParams(1.0))
        rep = statistics(st)
        assert rep.p_squeezed and not rep.x_squeezed
        assert rep.Q == pytest.approx(math.cosh(2), abs=1e-8)
        assert 0 <= rep.moment_error < 1e-10

    def test_forced_state_has_unbounded_error(self):
        st = build_squeezed("II", hydrogen(), SqueezedParams(0.5), force_truncate=5)
        assert statistics(st).moment_error == math.inf
