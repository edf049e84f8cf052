"""Both kernel implementations must satisfy the same contract."""

import subprocess
import sys

import numpy as np
import pytest

import ddfen
import ddfen.kernels
import oracles
from ddfen import _dcca_numpy
from ddfen.dcca import dccc

try:
    from ddfen import _dcca_cy
except ImportError:  # pure-python install
    _dcca_cy = None

KERNELS = [pytest.param(_dcca_numpy, id="numpy")]
if _dcca_cy is not None:
    KERNELS.append(pytest.param(_dcca_cy, id="cython"))


def _random_profiles(rng, k, length):
    x = rng.standard_normal((k, length))
    return np.cumsum(x - x.mean(axis=1, keepdims=True), axis=1)


@pytest.mark.parametrize("impl", KERNELS)
def test_kernel_matches_literal_sums(impl):
    rng = np.random.default_rng(99)
    for _ in range(10):
        k = int(rng.integers(2, 5))
        length = int(rng.integers(20, 60))
        w = int(rng.integers(3, 9))
        profiles = _random_profiles(rng, k, length)
        got = impl.pair_cross_sums(profiles, w)
        for i in range(k):
            for j in range(i, k):
                ri = np.concatenate([
                    oracles.box_residuals_oracle(profiles[i].tolist(), b, w)
                    for b in range(1, length - w + 2)])
                rj = np.concatenate([
                    oracles.box_residuals_oracle(profiles[j].tolist(), b, w)
                    for b in range(1, length - w + 2)])
                want = float(np.dot(ri, rj))
                assert got[i, j] == pytest.approx(want, rel=1e-10, abs=1e-12)


@pytest.mark.skipif(_dcca_cy is None, reason="compiled kernel not built")
def test_kernels_agree_with_each_other():
    rng = np.random.default_rng(5)
    for _ in range(20):
        k = int(rng.integers(2, 8))
        length = int(rng.integers(30, 300))
        w = int(rng.integers(3, 11))
        profiles = _random_profiles(rng, k, length)
        a = _dcca_numpy.pair_cross_sums(profiles, w)
        b = _dcca_cy.pair_cross_sums(profiles, w)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("impl", KERNELS)
def test_kernel_symmetry_and_psd_diagonal(impl):
    rng = np.random.default_rng(17)
    profiles = _random_profiles(rng, 5, 120)
    out = impl.pair_cross_sums(profiles, 10)
    assert np.array_equal(out, out.T)
    assert (np.diag(out) >= 0).all()


@pytest.mark.parametrize("impl", KERNELS)
def test_exact_unit_coefficients_per_kernel(impl, monkeypatch):
    # the +/-1 fixed points must hold bitwise under either kernel
    monkeypatch.setattr(ddfen.kernels, "pair_cross_sums",
                        impl.pair_cross_sums)
    rng = np.random.default_rng(123)
    for _ in range(25):
        n = int(rng.integers(20, 120))
        w = int(rng.integers(3, min(11, n)))
        x = rng.standard_normal(n) * float(rng.uniform(0.1, 50))
        assert dccc(x, x, w) == 1.0
        assert dccc(x, -x, w) == -1.0


def test_active_kernel_is_reported():
    assert ddfen.ACTIVE_KERNEL in ("cython", "numpy")
    assert ddfen.kernels.ACTIVE_KERNEL == ddfen.ACTIVE_KERNEL


def test_env_override_selects_numpy():
    code = "import ddfen; print(ddfen.ACTIVE_KERNEL)"
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "/usr/bin:/bin", "DDFEN_KERNEL": "numpy"},
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_env_override_rejects_unknown_kernel():
    code = "import ddfen"
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "/usr/bin:/bin", "DDFEN_KERNEL": "fortran"},
        capture_output=True, text=True)
    assert out.returncode != 0
    assert "DDFEN_KERNEL" in out.stderr
