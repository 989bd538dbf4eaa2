import numpy as np
import pytest

from vdspec import (
    GaussianParams,
    Spectrum,
    analytic_gaussian_spectrum,
    centered_grid,
    compare,
    exact_spectrum,
    gaussian_packet,
    superpose,
)


@pytest.fixture(scope="module")
def grid():
    return centered_grid(8192, 0.1)


@pytest.fixture(scope="module")
def packet():
    return GaussianParams(x0=-140.0, sigma_x=25.0, k0=1.0)


def test_exact_spectrum_matches_analytic_gaussian(grid, packet):
    wf = gaussian_packet(grid, packet)
    k = np.linspace(packet.k0 - 5 / (2 * packet.sigma_x), packet.k0 + 5 / (2 * packet.sigma_x), 801)
    spec = exact_spectrum(wf, k)
    ref = analytic_gaussian_spectrum(packet, k)
    assert np.max(np.abs(spec.density - ref)) < 1e-8 * ref.max()


def test_exact_spectrum_parseval_on_dense_grid(grid, packet):
    wf = gaussian_packet(grid, packet)
    k = np.arange(packet.k0 - 0.35, packet.k0 + 0.35, 1e-3)
    spec = exact_spectrum(wf, k)
    total = np.sum(spec.density) * 1e-3
    assert abs(total - 1.0) < 1e-6


def test_exact_spectrum_peak_value():
    grid = centered_grid(16384, 0.1)  # sigma = 50 needs the wider domain
    p = GaussianParams(x0=-140.0, sigma_x=50.0, k0=1.0)
    wf = gaussian_packet(grid, p)
    spec = exact_spectrum(wf, np.array([1.0]))
    expected = np.sqrt(2 * p.sigma_x**2 / np.pi)  # about 39.894
    assert abs(spec.density[0] - expected) < 1e-6 * expected


def test_exact_spectrum_amplitude_linearity(grid):
    a = gaussian_packet(grid, GaussianParams(x0=-120.0, sigma_x=20.0, k0=0.9))
    b = gaussian_packet(grid, GaussianParams(x0=100.0, sigma_x=28.0, k0=-0.4))
    ca, cb = 0.6 - 0.1j, 0.3 + 0.8j
    k = np.linspace(-1.5, 1.5, 301)
    amp_sum = exact_spectrum(superpose(a, b, ca, cb), k).amplitude
    amp_parts = ca * exact_spectrum(a, k).amplitude + cb * exact_spectrum(b, k).amplitude
    assert np.max(np.abs(amp_sum - amp_parts)) < 1e-12


def test_exact_spectrum_odd_state_zero_at_origin(grid):
    c = 1 / np.sqrt(2)
    a = gaussian_packet(grid, GaussianParams(x0=-140.0, sigma_x=25.0, k0=0.5))
    b = gaussian_packet(grid, GaussianParams(x0=140.0, sigma_x=25.0, k0=-0.5))
    odd = superpose(a, b, c, -c)
    spec = exact_spectrum(odd, np.array([0.0]))
    assert spec.density[0] < 1e-12


def test_analytic_gaussian_spectrum_closed_form_values():
    p = GaussianParams(x0=-250.0, sigma_x=50.0, k0=1.0)
    peak = analytic_gaussian_spectrum(p, np.array([p.k0]))[0]
    assert abs(peak - np.sqrt(2 * p.sigma_x**2 / np.pi)) < 1e-12
    # 2 sigma^2 (0.01)^2 = 0.5 for sigma = 50
    ratio = analytic_gaussian_spectrum(p, np.array([p.k0 + 0.01]))[0] / peak
    assert abs(ratio - np.exp(-0.5)) < 1e-12
    k = np.arange(p.k0 - 0.3, p.k0 + 0.3, 1e-4)
    assert abs(np.sum(analytic_gaussian_spectrum(p, k)) * 1e-4 - 1.0) < 1e-9


def _spectrum(k, density):
    return Spectrum(k=np.asarray(k, float), density=np.asarray(density, float))


def test_compare_identity():
    k = np.linspace(0, 2, 101)
    s = _spectrum(k, np.exp(-((k - 1) ** 2) * 100))
    rep = compare(s, s)
    assert rep.l1 == 0.0
    assert rep.l2_rel == 0.0
    assert rep.sup_rel == 0.0
    assert abs(rep.overlap - 1.0) < 1e-12
    assert rep.peak_k_a == rep.peak_k_b == 1.0


def test_compare_scaled_copy():
    k = np.linspace(0, 2, 101)
    d = np.exp(-((k - 1) ** 2) * 100)
    rep = compare(_spectrum(k, d), _spectrum(k, 2 * d))
    assert abs(rep.l2_rel - 1.0) < 1e-12
    assert abs(rep.overlap - 1.0) < 1e-12


def test_compare_disjoint_supports():
    k = np.linspace(-2, 2, 401)
    a = np.exp(-((k + 1) ** 2) * 400)
    b = np.exp(-((k - 1) ** 2) * 400)
    rep = compare(_spectrum(k, a), _spectrum(k, b))
    assert rep.overlap < 1e-12
    assert rep.peak_k_a == -1.0
    assert rep.peak_k_b == 1.0


def test_compare_region_restricts_metrics():
    k = np.linspace(-2, 2, 401)
    a = np.exp(-((k + 1) ** 2) * 400) + np.exp(-((k - 1) ** 2) * 400)
    b = np.exp(-((k + 1) ** 2) * 400) + 2 * np.exp(-((k - 1) ** 2) * 400)
    left_only = compare(_spectrum(k, a), _spectrum(k, b), region=(-2.0, 0.0))
    assert left_only.l2_rel < 1e-12
    both = compare(_spectrum(k, a), _spectrum(k, b))
    assert both.l2_rel > 0.1


def test_compare_support_floor():
    k = np.linspace(0, 1, 101)
    a = np.where(k < 0.5, 1.0, 1e-6)
    b = np.where(k < 0.5, 1.0, 2e-6)  # differences live below the floor
    rep = compare(_spectrum(k, a), _spectrum(k, b), support_floor=1e-3)
    assert rep.l2_rel == 0.0
    assert rep.n_support == int(np.count_nonzero(k < 0.5))


def test_compare_grid_mismatch_rejected():
    a = _spectrum(np.linspace(0, 1, 50), np.ones(50))
    b = _spectrum(np.linspace(0, 1, 51), np.ones(51))
    with pytest.raises(ValueError, match="k grid"):
        compare(a, b)
    c = _spectrum(np.linspace(0, 1, 50) + 1e-6, np.ones(50))
    with pytest.raises(ValueError, match="k grid"):
        compare(a, c)


def test_compare_empty_region_rejected():
    a = _spectrum(np.linspace(0, 1, 50), np.ones(50))
    with pytest.raises(ValueError, match="region"):
        compare(a, a, region=(5.0, 6.0))
