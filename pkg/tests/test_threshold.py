import numpy as np
import pytest

from ddfen import (DirectMatrix, NumericalError, connected_component_count,
                   threshold_network)
from ddfen.errors import InputError


def direct(values, codes=None):
    values = np.asarray(values, dtype=float)
    return DirectMatrix(codes, values)


def offdiag_matrix(n, fill, diag=0.4):
    values = np.full((n, n), float(fill))
    np.fill_diagonal(values, diag)
    return values


def test_three_node_hand_example():
    values = np.array([
        [0.4, 0.9, 0.5],
        [0.9, 0.4, 0.2],
        [0.5, 0.2, 0.4],
    ])
    net, report = threshold_network(direct(values, ["A", "B", "C"]))
    assert report.row_maxima.tolist() == [0.9, 0.9, 0.5]
    assert report.sigma_min == 0.5
    assert net.edges == [(0, 1, 0.9), (0, 2, 0.5)]
    assert report.kept_edges == 2
    assert report.theta == pytest.approx(2 / 3, abs=1e-15)
    assert report.n_components == 1


def test_complete_equal_matrix_keeps_everything():
    net, report = threshold_network(direct(offdiag_matrix(5, 0.3)))
    assert report.theta == 1.0
    assert report.kept_edges == 10
    assert len(net.edges) == 10
    assert all(w == 0.3 for _, _, w in net.edges)


def test_star_row_max_structure():
    # node h carries every row maximum -> all (h, .) edges survive
    rng = np.random.default_rng(71)
    for _ in range(25):
        n = 6
        values = rng.uniform(0.05, 0.4, (n, n))
        values = (values + values.T) / 2
        h = int(rng.integers(n))
        values[h, :] = rng.uniform(0.6, 0.9, n)
        values[:, h] = values[h, :]
        np.fill_diagonal(values, 0.5)
        net, report = threshold_network(direct(values))
        spokes = {tuple(sorted((h, v))) for v in range(n) if v != h}
        kept = {(i, j) for i, j, _ in net.edges}
        assert spokes <= kept
        degrees = np.zeros(n, int)
        for i, j, _ in net.edges:
            degrees[i] += 1
            degrees[j] += 1
        assert degrees.min() >= 1


def test_no_isolated_node_on_random_inputs():
    rng = np.random.default_rng(72)
    for _ in range(200):
        n = int(rng.integers(2, 12))
        values = rng.uniform(0.01, 1.0, (n, n))
        values = (values + values.T) / 2
        net, report = threshold_network(direct(values))
        degrees = np.zeros(n, int)
        for i, j, _ in net.edges:
            degrees[i] += 1
            degrees[j] += 1
        assert degrees.min() >= 1
        assert report.n_components == connected_component_count(
            n, [(i, j) for i, j, _ in net.edges])


def test_cut_above_sigma_min_isolates_someone():
    rng = np.random.default_rng(73)
    for _ in range(100):
        n = int(rng.integers(3, 10))
        values = rng.uniform(0.01, 1.0, (n, n))
        values = (values + values.T) / 2
        _, report = threshold_network(direct(values))
        cut = report.sigma_min + 1e-9
        degrees = np.zeros(n, int)
        for i in range(n):
            for j in range(i + 1, n):
                if values[i, j] >= cut:
                    degrees[i] += 1
                    degrees[j] += 1
        assert degrees.min() == 0


def test_determinism_and_tie_keeping():
    values = offdiag_matrix(4, 0.25)
    net1, rep1 = threshold_network(direct(values))
    net2, rep2 = threshold_network(direct(values))
    assert net1.edges == net2.edges
    assert rep1.sigma_min == rep2.sigma_min
    # ties at exactly sigma_min are kept: all six equal edges survive
    assert len(net1.edges) == 6


def test_edge_weights_are_matrix_entries():
    rng = np.random.default_rng(74)
    values = rng.uniform(0.1, 0.9, (6, 6))
    values = (values + values.T) / 2
    net, _ = threshold_network(direct(values))
    for i, j, w in net.edges:
        assert w == values[i, j]


def test_negative_sigma_min_names_weakest_node():
    values = np.array([
        [0.3, 0.8, -0.1],
        [0.8, 0.3, -0.4],
        [-0.1, -0.4, 0.3],
    ])
    with pytest.raises(NumericalError) as exc:
        threshold_network(direct(values, ["AAA", "BBB", "CCC"]))
    assert "CCC" in str(exc.value)
    assert "-0.1" in str(exc.value)


def test_disconnected_output_is_reported():
    # two tight pairs, weak across: row maxima keep only the pair edges
    values = np.array([
        [0.5, 0.9, 0.1, 0.1],
        [0.9, 0.5, 0.1, 0.1],
        [0.1, 0.1, 0.5, 0.8],
        [0.1, 0.1, 0.8, 0.5],
    ])
    net, report = threshold_network(direct(values))
    assert {(i, j) for i, j, _ in net.edges} == {(0, 1), (2, 3)}
    assert report.n_components == 2


def test_rejects_tiny_matrix():
    with pytest.raises(InputError, match="at least two"):
        threshold_network(direct(np.array([[1.0]])))


def test_accepts_plain_ndarray():
    values = offdiag_matrix(3, 0.2)
    net, _ = threshold_network(values)
    assert len(net.edges) == 3
    assert net.codes == ["V00", "V01", "V02"]
