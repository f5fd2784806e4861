"""Force laws and their half-step updates."""

import numpy as np
import pytest

from ibstab.coupling import LagrangianSheet
from ibstab.forcing import (ForcingModel, membrane_force, membrane_step,
                            target_force_update)


def test_model_validation():
    ForcingModel("target", 10.0)
    ForcingModel("membrane", 1.0, "moving")
    ForcingModel("target", 0.0)  # free fluid, used by the harness
    with pytest.raises(ValueError):
        ForcingModel("target", -1.0)
    with pytest.raises(ValueError):
        ForcingModel("target", 10.0, "moving")
    with pytest.raises(ValueError):
        ForcingModel("banana", 10.0)
    with pytest.raises(ValueError):
        ForcingModel("membrane", 1.0, "sideways")


def test_target_update_rest_and_constant():
    rng = np.random.default_rng(3)
    f_prev = rng.standard_normal((3, 16, 16))
    same = target_force_update(f_prev, np.zeros_like(f_prev), 5.0, 0.1)
    np.testing.assert_array_equal(same, f_prev)
    c = np.full_like(f_prev, 2.0)
    out = target_force_update(np.zeros_like(f_prev), c, 5.0, 0.1)
    np.testing.assert_allclose(out, -0.1 * 5.0 * 2.0, atol=1e-15)


def test_target_update_composition_and_linearity():
    rng = np.random.default_rng(5)
    f_prev = rng.standard_normal((3, 12, 12))
    u = rng.standard_normal((3, 12, 12))
    two_small = target_force_update(
        target_force_update(f_prev, u, 7.0, 0.05), u, 7.0, 0.05)
    one_big = target_force_update(f_prev, u, 7.0, 0.10)
    np.testing.assert_allclose(two_small, one_big, atol=1e-14)

    f2 = rng.standard_normal((3, 12, 12))
    u2 = rng.standard_normal((3, 12, 12))
    a, b = 1.7, -0.4
    lhs = target_force_update(a * f_prev + b * f2, a * u + b * u2, 7.0, 0.05)
    rhs = (a * target_force_update(f_prev, u, 7.0, 0.05)
           + b * target_force_update(f2, u2, 7.0, 0.05))
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_membrane_step():
    rng = np.random.default_rng(7)
    x = rng.standard_normal((3, 10, 10))
    np.testing.assert_array_equal(membrane_step(x, np.zeros_like(x), 0.2), x)
    u = np.zeros_like(x)
    u[2] = 3.0
    moved = membrane_step(x, u, 0.25)
    np.testing.assert_allclose(moved[2], x[2] + 0.75, atol=1e-15)
    np.testing.assert_array_equal(moved[0], x[0])
    twice = membrane_step(membrane_step(x, u, 0.1), u, 0.1)
    np.testing.assert_allclose(twice, membrane_step(x, u, 0.2), atol=1e-14)


def test_membrane_force_planar_rest_state():
    sheet = LagrangianSheet(8, 2, (0.2, -0.3, 0.5))
    k_st = 50.0
    f = membrane_force(sheet.x0, k_st, sheet.h_b, 1.0)
    # the rest coordinates are affine only up to roundoff, and the force
    # amplifies coordinate noise by K / h_b^2
    noise_floor = k_st / sheet.h_b**2 * 1e-14
    assert np.max(np.abs(f)) <= noise_floor


def test_membrane_force_eigenfunction():
    n, p, l, k_st = 8, 2, 1.0, 50.0
    sheet = LagrangianSheet(n, p, l=l)
    m = n * p
    a = 0.01
    k1 = np.arange(m)
    x = sheet.x0.copy()
    x[2] += a * np.sin(2.0 * np.pi * k1 / m)[:, None]
    f = membrane_force(x, k_st, sheet.h_b, l)
    profile = -(4.0 * a * k_st / sheet.h_b**2) * np.sin(np.pi / m) ** 2 \
        * np.sin(2.0 * np.pi * k1 / m)
    want = np.broadcast_to(profile[:, None], (m, m))
    noise_floor = k_st / sheet.h_b**2 * 1e-14
    np.testing.assert_allclose(f[2], want, atol=noise_floor)
    np.testing.assert_allclose(f[0], 0.0, atol=noise_floor)
    np.testing.assert_allclose(f[1], 0.0, atol=noise_floor)


def test_membrane_force_sums_to_zero():
    rng = np.random.default_rng(11)
    sheet = LagrangianSheet(8, 2)
    x = sheet.x0 + 0.01 * rng.standard_normal((3, 16, 16))
    f = membrane_force(x, 100.0, sheet.h_b, 1.0)
    scale = np.abs(f).max()
    for c in range(3):
        assert abs(f[c].sum()) <= 1e-12 * scale


def test_membrane_force_negative_semidefinite():
    rng = np.random.default_rng(13)
    sheet = LagrangianSheet(8, 2)
    for _ in range(5):
        delta = 1e-3 * rng.standard_normal((3, 16, 16))
        f = membrane_force(sheet.x0 + delta, 100.0, sheet.h_b, 1.0)
        assert float(np.sum(delta * f)) <= 1e-12
    f = membrane_force(sheet.x0 + 0.5, 100.0, sheet.h_b, 1.0)
    assert np.max(np.abs(f)) == 0.0  # rigid translation costs nothing
