import datetime as dt

import numpy as np
import pytest

from ddfen import (FactorSpec, InputError, chain_population_matrix,
                   deconvolve, generate_panel, plant_chain, plant_hub,
                   rank, threshold_network, weighted_degree)
from ddfen.pipeline import _pearson_matrix
from ddfen.synth import EPOCH


def pearson(panel):
    return np.corrcoef(panel.returns, rowvar=False)


# ---------------------------------------------------------------------------
# generate_panel

def test_identical_loadings_tiny_noise_correlate():
    spec = FactorSpec(loadings=np.array([[1.0], [1.0]]), length=1000,
                      noise_scale=0.01, seed=5)
    panel = generate_panel(spec)
    assert pearson(panel)[0, 1] > 0.99


def test_orthogonal_loadings_decorrelate():
    spec = FactorSpec(loadings=np.array([[1.0, 0.0], [0.0, 1.0]]),
                      length=1000, noise_scale=0.2, seed=6)
    panel = generate_panel(spec)
    assert abs(pearson(panel)[0, 1]) < 0.1


def test_seed_determinism():
    spec = FactorSpec(loadings=np.array([[1.0], [0.5], [0.2]]), length=300,
                      noise_scale=0.5, seed=42)
    a = generate_panel(spec)
    b = generate_panel(spec)
    assert np.array_equal(a.returns, b.returns)
    assert a.dates == b.dates
    assert a.codes == b.codes
    c = generate_panel(FactorSpec(loadings=spec.loadings, length=300,
                                  noise_scale=0.5, seed=43))
    assert not np.array_equal(a.returns, c.returns)


def test_panel_shape_dates_codes():
    spec = FactorSpec(loadings=np.array([[1.0], [0.3]]), length=50, seed=1)
    panel = generate_panel(spec)
    assert panel.returns.shape == (50, 2)
    assert panel.codes == ["A00", "A01"]
    assert panel.dates[0] == EPOCH
    assert panel.dates == [EPOCH + dt.timedelta(days=i) for i in range(50)]


def test_factor_spec_validation():
    with pytest.raises(InputError):
        FactorSpec(loadings=np.array([[1.0]]), length=3, seed=0)
    with pytest.raises(InputError):
        FactorSpec(loadings=np.array([1.0, 2.0]), length=10, seed=0)
    with pytest.raises(InputError):
        FactorSpec(loadings=np.array([[np.inf]]), length=10, seed=0)
    with pytest.raises(InputError):
        FactorSpec(loadings=np.array([[1.0]]), length=10, noise_scale=0.0,
                   seed=0)


# ---------------------------------------------------------------------------
# plant_chain

def test_chain_population_matrix_values():
    pop = chain_population_matrix(3, 0.8)
    assert pop.values[0, 2] == pytest.approx(0.64, abs=1e-15)
    assert pop.values[0, 1] == pytest.approx(0.8, abs=1e-15)
    assert np.diag(pop.values).tolist() == [1.0, 1.0, 1.0]


def test_chain_sample_matches_population():
    panel = plant_chain(n_assets=5, rho=0.7, length=5000, seed=9)
    sample = pearson(panel)
    pop = chain_population_matrix(5, 0.7).values
    assert np.abs(sample - pop).max() < 0.05


def test_chain_small_rho_decorrelates():
    panel = plant_chain(n_assets=4, rho=0.01, length=4000, seed=10)
    sample = pearson(panel)
    off = sample[~np.eye(4, dtype=bool)]
    assert np.abs(off).max() < 0.08


def test_chain_unit_variance_construction():
    panel = plant_chain(n_assets=6, rho=0.6, length=8000, seed=11)
    stds = panel.returns.std(axis=0)
    assert np.abs(stds - 1.0).max() < 0.05


def test_chain_validation():
    with pytest.raises(InputError):
        plant_chain(n_assets=2, rho=0.5, length=100, seed=0)
    with pytest.raises(InputError):
        plant_chain(n_assets=4, rho=1.0, length=100, seed=0)
    with pytest.raises(InputError):
        plant_chain(n_assets=4, rho=0.0, length=100, seed=0)


def test_chain_deconvolution_suppresses_indirect_edges():
    # on the analytic rho^|i-j| matrix the direct matrix must leave every
    # adjacent pair above every nonadjacent pair, with no sampling noise
    for rho in (0.5, 0.7, 0.9):
        for n in (4, 5, 6):
            pop = chain_population_matrix(n, rho)
            md = deconvolve(pop).values
            adjacent = [md[i, i + 1] for i in range(n - 1)]
            nonadjacent = [md[i, j] for i in range(n)
                           for j in range(i + 2, n)]
            assert min(adjacent) > max(nonadjacent), (rho, n)


# ---------------------------------------------------------------------------
# plant_hub

def test_hub_is_weighted_degree_rank_one():
    panel = plant_hub(n_assets=6, length=1200, seed=12)
    corr = _pearson_matrix(panel)
    net, _ = threshold_network(deconvolve(corr))
    ranking = rank(weighted_degree(net))
    assert ranking.rank_of("A00") == 1


def test_hub_leaves_are_symmetric():
    panel = plant_hub(n_assets=3, length=6000, seed=13)
    sample = pearson(panel)
    assert sample[0, 1] == pytest.approx(sample[0, 2], abs=0.05)
    # hub-leaf correlation strictly above leaf-leaf
    assert min(sample[0, 1], sample[0, 2]) > sample[1, 2] + 0.05


def test_hub_determinism():
    a = plant_hub(n_assets=5, length=400, seed=14)
    b = plant_hub(n_assets=5, length=400, seed=14)
    assert np.array_equal(a.returns, b.returns)


def test_hub_validation():
    with pytest.raises(InputError):
        plant_hub(n_assets=2, length=100, seed=0)
