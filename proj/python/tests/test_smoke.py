import numpy as np
import pytest

import gstwdp


def test_pdf_matches_oracle():
    p = gstwdp.ChannelParams(K=15, gamma_ratio=0.9, m=5, omega_s=1)
    ch = gstwdp.GsTwdp(p)
    for x in (0.3, 1.0, 1.8):
        ref = gstwdp.oracle_envelope_pdf(x, p)
        assert ch.envelope_pdf(x) == pytest.approx(ref, rel=1e-7)


def test_vectorized_cdf_is_monotone():
    ch = gstwdp.GsTwdp(gstwdp.ChannelParams(K=5, gamma_ratio=0.5, m=2))
    x = np.linspace(0.0, 10.0, 101)
    f = ch.envelope_cdf(x)
    assert f.shape == x.shape
    assert f[0] == 0.0
    assert np.all(np.diff(f) >= 0)
    assert f[-1] == pytest.approx(1.0, abs=1e-6)


def test_moments_and_mgf():
    ch = gstwdp.GsTwdp(gstwdp.ChannelParams(K=3, gamma_ratio=0.2, m=1.5, omega_s=2.0))
    assert ch.moment(2) == pytest.approx(2.0, rel=1e-8)
    assert ch.mgf(1e-8) == pytest.approx(1.0, abs=1e-6)


def test_k_zero_m_one_is_k_distribution():
    ch = gstwdp.GsTwdp(gstwdp.ChannelParams(K=0, m=1, omega_s=1))
    x = 0.7
    ref = 4 * x * gstwdp.bessel_k(0.0, 2 * x)
    assert ch.envelope_pdf(x) == pytest.approx(ref, rel=1e-10)


def test_tj_values():
    assert gstwdp.tj_coefficient(3, 5, 0.9) == pytest.approx(0.520571491826627, rel=1e-12)
    # Gamma = 0 reduces to t_j = 1
    assert gstwdp.tj_coefficient(7, 5, 0.0) == pytest.approx(1.0, rel=1e-14)


def test_sampling_is_seeded():
    p = gstwdp.ChannelParams(K=10, gamma_ratio=0.5, m=3)
    a = gstwdp.sample_envelope(p, n=2000, seed=42)
    b = gstwdp.sample_envelope(p, n=2000, seed=42)
    c = gstwdp.sample_envelope(p, n=2000, seed=43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.mean(a**2) == pytest.approx(1.0, rel=0.1)


def test_asep_ordering():
    p = gstwdp.ChannelParams(K=15, gamma_ratio=0.9, m=5, omega_s=100.0)
    chernoff = gstwdp.asep(p, "chernoff")
    chiani = gstwdp.asep(p, "chiani")
    exact = gstwdp.asep(p, "quad")
    assert chernoff >= chiani
    assert chernoff >= exact
    mean, se = gstwdp.asep_montecarlo(p, n=20000, seed=3)
    assert se > 0
    assert abs(mean - exact) < 5 * se


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        gstwdp.ChannelParams(K=-1.0)
    with pytest.raises(gstwdp.DomainError):
        gstwdp.ChannelParams(gamma_ratio=1.5)


def test_small_fit_runs():
    p = gstwdp.ChannelParams(K=5, gamma_ratio=0.3, m=4)
    r = gstwdp.sample_envelope(p, n=3000, seed=7)
    res = gstwdp.fit(r, grid_points=3, iterations=20, starts=1, max_points=200)
    assert res["epsilon"] >= 0
    assert 0 <= res["params"].gamma_ratio <= 1
    assert res["diagnostics"]["grid_evaluations"] == 27
