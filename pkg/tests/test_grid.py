"""Lattice backend: stencil algebra, sampling, serialization, convergence."""

import math
import warnings

import numpy as np
import pytest

from stada.errors import DomainError
from stada.fields import AnalyticField, upsilon_gradient
from stada.grid import (
    AliasingWarning,
    GridField,
    central_difference,
    d_stencil,
    delta_stencil,
    grid_d,
    grid_derivative,
    grid_laplace,
    grid_upsilon,
    laplace_stencil,
    sample,
    upsilon_gradient_stencil,
    upsilon_stencil,
)
from stada.multivector import Multivector, basis_vector
from stada.scalars import FLOAT


def random_grid(n=6, h=0.5, seed=0):
    rng = np.random.default_rng(seed)
    vals = rng.normal(size=(16, n, n, n, n)) + 1j * rng.normal(size=(16, n, n, n, n))
    return GridField(n, h, vals)


def test_stencil_nilpotency_is_symbolic():
    h = 0.37
    assert d_stencil(h).compose(d_stencil(h)).is_zero()
    assert delta_stencil(h).compose(delta_stencil(h)).is_zero()


def test_composed_nilpotent_stencil_gives_exact_zero():
    f = random_grid()
    dd = d_stencil(f.h).compose(d_stencil(f.h))
    assert dd.apply(f).max_abs() == 0.0
    deldel = delta_stencil(f.h).compose(delta_stencil(f.h))
    assert deldel.apply(f).max_abs() == 0.0


def test_upsilon_stencils_identical():
    h = 0.25
    assert upsilon_stencil(h) == upsilon_gradient_stencil(h)


def test_laplace_stencils_close():
    h = 0.25
    base = laplace_stencil(h, "direct")
    for route in ("upsilon", "d_minus_delta", "de_rham"):
        assert base.isclose(laplace_stencil(h, route), 1e-12)


def test_derivative_of_constant_grid():
    f = GridField(4, 0.5, np.ones((16, 4, 4, 4, 4), dtype=complex))
    for mu in range(4):
        assert grid_derivative(f, mu).max_abs() == 0.0
    assert grid_d(f).max_abs() == 0.0


def test_sampling_matches_pointwise_eval():
    field = AnalyticField.plane_wave(
        Multivector.unit(FLOAT) + basis_vector(2, FLOAT), (1.0, 0.0, 0.0, 0.0))
    n, h = 4, math.pi / 2
    g = sample(field, n, h)
    for site in ((0, 0, 0, 0), (1, 2, 3, 0), (3, 3, 3, 3)):
        x = tuple(h * s for s in site)
        assert (g.eval(site) - field.eval(x)).max_abs() < 1e-13


def test_sample_requires_minimum_points():
    with pytest.raises(DomainError):
        sample(AnalyticField.zero(FLOAT), 2, 0.1)


def test_aliasing_warnings():
    wave = AnalyticField.plane_wave(Multivector.unit(FLOAT), (0.37, 0, 0, 0))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sample(wave, 8, 0.5)
    assert any(issubclass(w.category, AliasingWarning) for w in caught)
    poly = AnalyticField.monomial(Multivector.unit(FLOAT), (1, 0, 0, 0))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sample(poly, 8, 0.5)
    assert any(issubclass(w.category, AliasingWarning) for w in caught)
    # a matched wave is silent
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sample(AnalyticField.plane_wave(Multivector.unit(FLOAT), (1.0, 0, 0, 0)),
               8, math.pi / 4)


def test_grid_upsilon_converges_at_second_order():
    n = 16
    h1 = math.pi / 4  # box 4*pi, frequency 1 fits both spacings
    wave = AnalyticField.plane_wave(Multivector.unit(FLOAT), (1.0, 0.0, 0.0, 0.0))
    ana = upsilon_gradient(wave)
    errs = []
    for h in (h1, h1 / 2):
        gf = sample(wave, n, h)
        ga = sample(ana, n, h)
        errs.append((grid_upsilon(gf) - ga).max_abs())
    ratio = errs[0] / errs[1]
    assert 3.2 <= ratio <= 4.8


def test_grid_laplace_matches_analytic_within_truncation():
    n, h = 16, math.pi / 4
    wave = AnalyticField.plane_wave(Multivector.unit(FLOAT), (1.0, 0.0, 0.0, 0.0))
    gf = sample(wave, n, h)
    got = grid_laplace(gf)
    want = sample(AnalyticField.plane_wave(
        Multivector.unit(FLOAT).scale(-1.0), (1.0, 0.0, 0.0, 0.0)), n, h)
    rel = (got - want).max_abs()
    # composing two central differences gives the 2h-wide second difference;
    # its truncation at h = pi/4 is 1 - (2 - 2cos(2h)) / (4h^2) ~ 0.19
    bound = abs(1.0 - (2.0 - 2.0 * math.cos(2 * h)) / (4 * h * h)) + 0.01
    assert rel < bound
    # and it shrinks at second order when both spacings stay periodic
    gf2 = sample(wave, n, h / 2)
    want2 = sample(AnalyticField.plane_wave(
        Multivector.unit(FLOAT).scale(-1.0), (1.0, 0.0, 0.0, 0.0)), n, h / 2)
    rel2 = (grid_laplace(gf2) - want2).max_abs()
    assert 3.2 <= rel / rel2 <= 4.8


def test_pointwise_product_matches_multivector_product():
    f = random_grid(4, 0.5, seed=1)
    g = random_grid(4, 0.5, seed=2)
    prod = f.pointwise_product(g)
    site = (1, 2, 3, 0)
    assert (prod.eval(site) - f.eval(site) * g.eval(site)).max_abs() < 1e-12


def test_const_mult_and_star():
    f = random_grid(4, 0.5, seed=3)
    c = Multivector.basis(0b0011, FLOAT).scale(0.5 + 0.25j)
    site = (0, 1, 2, 3)
    left = f.mul_const(c, side="left")
    right = f.mul_const(c, side="right")
    assert (left.eval(site) - c * f.eval(site)).max_abs() < 1e-12
    assert (right.eval(site) - f.eval(site) * c).max_abs() < 1e-12
    from stada.exterior import hodge_star

    assert (f.hodge_star().eval(site) - hodge_star(f.eval(site))).max_abs() < 1e-13


def test_central_difference_plain_arrays():
    n, h = 8, math.pi / 4
    x = np.arange(n) * h
    grid = np.sin(x)[:, None, None, None] * np.ones((1, n, n, n))
    got = central_difference(grid, 0, h)
    want = np.cos(x)[:, None, None, None] * np.ones((1, n, n, n))
    assert np.abs(got - want).max() < 0.11  # second-order at this h


def test_json_roundtrip(tmp_path):
    f = random_grid(4, 0.5, seed=4)
    path = tmp_path / "field.json"
    f.save(str(path))
    g = GridField.load(str(path))
    assert g.n == f.n and g.h == f.h
    assert np.abs(g.values - f.values).max() == 0.0


def test_npz_roundtrip(tmp_path):
    f = random_grid(4, 0.5, seed=5)
    path = tmp_path / "field.npz"
    f.save(str(path))
    g = GridField.load(str(path))
    assert np.array_equal(g.values, f.values)


def test_shape_mismatch_rejected():
    with pytest.raises(DomainError):
        random_grid(4, 0.5) + random_grid(4, 0.25)
