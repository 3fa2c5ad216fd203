"""Smoke tests for the _nastlib python bindings."""

import math

import numpy as np

import _nastlib as nl

LRD = {"c1": 1.0, "beta1": 0.75, "beta2": 4.0, "c2": 1.0}
OU = {"c1": 1.0, "beta1": 1.0, "beta2": 1.0, "c2": 1.0}


def test_density_and_covariance():
    assert abs(nl.eval_density("param-lrd", LRD, 1.0) - 1.0 / 16.0) < 1e-12
    r = nl.covariance("param-lrd", OU, [0.0, 1.0])
    assert abs(r[0] - math.pi) < 1e-5
    assert abs(r[1] - math.pi * math.exp(-1.0)) < 1e-5


def test_wavelet_and_sigma():
    assert abs(nl.wavelet_fourier("cauchy", {"alpha": 0.05}, 1.0) - math.exp(-1)) < 1e-12
    s0 = nl.variance_sigma_j("generalized-fbm", {"H": 0.5}, "mexican-hat", {}, 0)
    s1 = nl.variance_sigma_j("generalized-fbm", {"H": 0.5}, "mexican-hat", {}, 1)
    assert abs(s1 / s0 - 2.0) < 0.01


def test_simulation_reproducible():
    a = nl.gaussian_stationary("param-lrd", LRD, 4096, 1.0, 42)
    b = nl.gaussian_stationary("param-lrd", LRD, 4096, 1.0, 42)
    assert np.array_equal(a, b)
    assert a.shape == (4096,)
    f = nl.fbm(0.3, 2048, 1.0, 7)
    assert f[0] == 0.0


def test_cwt_of_cosine():
    n = 4096
    k0 = 128
    lam0 = 2.0 * math.pi * k0 / n
    x = np.cos(lam0 * np.arange(n))
    y = nl.cwt(x, "mexican-hat", {}, 2, 1.0)
    # amplitude is |Psi(4 lam0)| for the normalized bank; compare shape only
    amp = np.max(np.abs(y))
    assert amp > 0
    # zero-mean filter kills constants
    z = nl.cwt(np.full(n, 5.0), "mexican-hat", {}, 2, 1.0)
    assert np.max(np.abs(z)) < 1e-10


def test_nast_modulus_symmetry():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(2048)
    a = nl.nast(x, "daubechies-4", {}, [1, 3], ["modulus", "modulus"])
    b = nl.nast(-x, "daubechies-4", {}, [1, 3], ["modulus", "modulus"])
    assert np.allclose(a, b, atol=1e-12)


def test_hermite_and_kappa():
    ex = nl.hermite_expand("modulus", 1.0)
    assert ex["rank"] == 2
    assert abs(ex["coeffs"][0] - math.sqrt(2.0 / math.pi)) < 1e-8
    assert abs(ex["coeffs"][2] - 1.0 / math.sqrt(math.pi)) < 1e-8
    kr = nl.kappa("param-lrd", LRD, "daubechies-4", {}, 1)
    assert abs(kr["kappa_series"] / kr["kappa_integral"] - 1.0) < 0.01


def test_ks():
    rng = np.random.default_rng(1)
    stat, p = nl.ks_test(rng.standard_normal(2000), "standard-normal")
    assert p > 0.01
    stat, p = nl.ks_test(rng.standard_normal(2000), "standardized-chi2-chaos")
    assert p < 1e-6


if __name__ == "__main__":
    fails = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"[PASS] {name}")
            except AssertionError as e:
                print(f"[FAIL] {name}: {e}")
                fails += 1
    raise SystemExit(1 if fails else 0)
