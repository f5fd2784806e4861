"""Transforms, operator symbols, and the per-wavenumber projector."""

import numpy as np
import pytest

from ibstab import spectral


def test_dft3_constant_field():
    n = 8
    u = np.full((3, n, n, n), 2.5)
    u_hat = spectral.dft3(u)
    assert u_hat[0, 0, 0, 0] == pytest.approx(n**3 * 2.5)
    u_hat[:, 0, 0, 0] = 0.0
    assert np.max(np.abs(u_hat)) < 1e-9


def test_dft3_single_cosine_mode():
    n = 8
    j = np.arange(n)
    u = np.zeros((3, n, n, n))
    u[0] = np.cos(2.0 * np.pi * j / n)[:, None, None]
    u_hat = spectral.dft3(u)
    assert u_hat[0, 1, 0, 0] == pytest.approx(n**3 / 2.0, abs=1e-9)
    assert u_hat[0, n - 1, 0, 0] == pytest.approx(n**3 / 2.0, abs=1e-9)
    u_hat[0, 1, 0, 0] = u_hat[0, n - 1, 0, 0] = 0.0
    assert np.max(np.abs(u_hat)) < 1e-9


def test_dft3_parseval_and_roundtrip():
    rng = np.random.default_rng(21)
    for _ in range(100):
        u = rng.standard_normal((3, 8, 8, 8))
        u_hat = spectral.dft3(u)
        lhs = float(np.sum(u * u))
        rhs = float(np.sum(np.abs(u_hat) ** 2)) / 8**3
        assert lhs == pytest.approx(rhs, rel=1e-12)
        back = spectral.idft3(u_hat).real
        assert np.max(np.abs(back - u)) < 1e-12 * max(1.0, np.max(np.abs(u)))


def test_dft2_boundary_constant_mode_parseval():
    m = 12
    f = np.full((3, m, m), -1.5)
    f_hat = spectral.dft2_boundary(f)
    assert f_hat[0, 0, 0] == pytest.approx(-1.5 * m * m)
    f_hat[:, 0, 0] = 0.0
    assert np.max(np.abs(f_hat)) < 1e-9

    k = np.arange(m)
    f = np.zeros((3, m, m))
    f[2] = np.sin(2.0 * np.pi * 3.0 * k / m)[None, :]
    f_hat = spectral.dft2_boundary(f)
    assert f_hat[2, 0, 3] == pytest.approx(-0.5j * m * m, abs=1e-9)

    rng = np.random.default_rng(2)
    f = rng.standard_normal((3, m, m))
    f_hat = spectral.dft2_boundary(f)
    assert float(np.sum(f * f)) == pytest.approx(
        float(np.sum(np.abs(f_hat) ** 2)) / m**2, rel=1e-12)
    back = spectral.idft2_boundary(f_hat).real
    np.testing.assert_allclose(back, f, atol=1e-13)


def test_symbol_formulas():
    n, h = 8, 0.25
    g = spectral.gradient_symbol(n, h)
    lap = spectral.laplacian_symbol(n, h)
    xi = np.arange(n)
    expected = np.sin(2.0 * np.pi * xi / n) / h
    np.testing.assert_allclose(g[0, :, 0, 0], expected, atol=1e-15)
    np.testing.assert_allclose(g[1, 0, :, 0], expected, atol=1e-15)
    np.testing.assert_allclose(g[2, 0, 0, :], expected, atol=1e-15)
    s2 = np.sin(np.pi * xi / n) ** 2
    want = -(4.0 / h**2) * (s2[:, None, None] + s2[None, :, None]
                            + s2[None, None, :])
    np.testing.assert_allclose(lap, want, atol=1e-12)
    assert np.all(lap <= 0.0)
    assert np.sum(lap == 0.0) == 1  # only the zero wavenumber


def test_projection_matrix_examples():
    n, h = 8, 1.0 / 8.0
    np.testing.assert_allclose(spectral.projection_matrix((0, 0, 0), n, h),
                               np.eye(3), atol=1e-15)
    np.testing.assert_allclose(spectral.projection_matrix((1, 0, 0), n, h),
                               np.diag([0.0, 1.0, 1.0]), atol=1e-14)


def test_projection_matrix_properties():
    n, h = 8, 1.0 / 8.0
    rng = np.random.default_rng(5)
    null_axis = {0, n // 2}
    for _ in range(50):
        xi = tuple(int(v) for v in rng.integers(0, n, size=3))
        pmat = spectral.projection_matrix(xi, n, h)
        np.testing.assert_allclose(pmat, pmat.conj().T, atol=1e-13)
        np.testing.assert_allclose(pmat @ pmat, pmat, atol=1e-13)
        grad = 1j * np.array([np.sin(2.0 * np.pi * x / n) / h for x in xi])
        np.testing.assert_allclose(pmat @ grad, 0.0, atol=1e-13)
        trace = float(np.trace(pmat).real)
        if all(x in null_axis for x in xi):
            assert trace == pytest.approx(3.0, abs=1e-13)
        else:
            assert trace == pytest.approx(2.0, abs=1e-13)


def test_null_symbol_modes_get_identity():
    n, h = 8, 0.125
    for x1 in (0, n // 2):
        for x2 in (0, n // 2):
            for x3 in (0, n // 2):
                pmat = spectral.projection_matrix((x1, x2, x3), n, h)
                np.testing.assert_allclose(pmat, np.eye(3), atol=1e-15)


def test_operator_symbols_match_matrices():
    n, h = 8, 0.125
    ops = spectral.OperatorSymbols(n, h)
    np.testing.assert_allclose(ops.grad, 1j * ops.grad_factor, atol=1e-15)
    rng = np.random.default_rng(9)
    v_hat = spectral.dft3(rng.standard_normal((3, n, n, n)))
    proj = ops.project(v_hat)
    for xi in [(0, 0, 0), (1, 0, 0), (3, 5, 2), (4, 4, 4), (7, 1, 6)]:
        pmat = spectral.projection_matrix(xi, n, h)
        np.testing.assert_allclose(proj[(slice(None),) + xi],
                                   pmat @ v_hat[(slice(None),) + xi],
                                   atol=1e-9)


def test_rfft_layout_consistent_with_full():
    n, h = 8, 0.125
    full = spectral.laplacian_symbol(n, h)
    half = spectral.laplacian_symbol(n, h, rfft=True)
    np.testing.assert_allclose(half, full[..., : n // 2 + 1], atol=1e-15)
    gfull = spectral.gradient_symbol(n, h)
    ghalf = spectral.gradient_symbol(n, h, rfft=True)
    np.testing.assert_allclose(ghalf, gfull[..., : n // 2 + 1], atol=1e-15)
