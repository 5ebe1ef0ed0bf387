import numpy as np
import pytest

from pronysar import DimensionError, assemble_blocks, pronyfy, simulate_born


def test_definition_small():
    np.testing.assert_array_equal(
        pronyfy([1, 2, 3, 4, 5]), [[1, 2, 3], [2, 3, 4], [3, 4, 5]]
    )


def test_brute_force_hankel():
    rng = np.random.default_rng(0)
    col = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    m = 7
    oracle = np.array([[col[i + j] for j in range(m)] for i in range(m)])
    np.testing.assert_array_equal(pronyfy(col), oracle)


def test_constant_vector_rank_one():
    d = pronyfy(np.full(9, 2.5))
    np.testing.assert_array_equal(d, 2.5 * np.ones((5, 5)))
    s = np.linalg.svd(d, compute_uv=False)
    assert s[1] / s[0] < 1e-15


def test_geometric_vector_rank_one():
    z = np.exp(1j * 0.83)
    col = z ** np.arange(15)
    s = np.linalg.svd(pronyfy(col), compute_uv=False)
    assert s[1] / s[0] < 1e-12


def test_linearity():
    rng = np.random.default_rng(1)
    u = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    v = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    alpha = 0.3 - 1.7j
    np.testing.assert_allclose(
        pronyfy(alpha * u + v), alpha * pronyfy(u) + pronyfy(v), rtol=1e-12
    )


def test_wrong_length():
    with pytest.raises(DimensionError):
        pronyfy([1, 2, 3, 4])
    with pytest.raises(DimensionError):
        pronyfy([1.0])
    with pytest.raises(DimensionError):
        pronyfy(np.ones((3, 3)))


def test_assemble_matches_columns(gotcha_geom, three_targets):
    cube = simulate_born(three_targets, gotcha_geom)
    blocks = assemble_blocks(cube)
    assert blocks.blocks.shape == (32, 20, 20)
    for n in (0, 13, 31):
        np.testing.assert_array_equal(blocks.blocks[n], pronyfy(cube.values[:, n]))
    # Hankel structure: equal anti-diagonals
    b = blocks.blocks[5]
    for i in range(19):
        np.testing.assert_array_equal(np.diag(np.fliplr(b), i), np.diag(np.fliplr(b), i)[0])


def test_single_target_rank_and_scale(gotcha_geom, single_target):
    cube = simulate_born([single_target], gotcha_geom)
    blocks = assemble_blocks(cube)
    y = np.asarray(single_target.position)
    for n in range(gotcha_geom.num_positions_N):
        s = np.linalg.svd(blocks.blocks[n], compute_uv=False)
        assert s[1] / s[0] < 1e-10
        r = np.linalg.norm(gotcha_geom.positions[n] - y)
        expected = gotcha_geom.num_freq_M * abs(single_target.reflectivity) / (4 * np.pi * r) ** 2
        assert s[0] == pytest.approx(expected, rel=1e-10)


def test_three_target_rank(gotcha_geom, three_targets):
    cube = simulate_born(three_targets, gotcha_geom)
    blocks = assemble_blocks(cube)
    for n in range(gotcha_geom.num_positions_N):
        s = np.linalg.svd(blocks.blocks[n], compute_uv=False)
        assert s[3] / s[0] < 1e-8
        assert s[2] / s[0] > 1e-8
