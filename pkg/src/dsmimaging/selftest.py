"""Fast invariant checks runnable from an installed package (``dsm selftest``)."""

import math

import numpy as np

from .forward import add_awgn, assemble_msr
from .imaging import dsm_single, dsma, kirchhoff, plane_wave_bessel_check, psi2_map, psi3_map
from .metrics import exact_map, jaccard, threshold_map
from .scene import Scene, make_circle_array, make_direction_set, make_grid
from .specfun import bessel_j0, bessel_y0, green2d


def _series_j0(x, terms=40):
    return sum((-(x * x) / 4) ** k / math.factorial(k) ** 2 for k in range(terms))


def _checks():
    yield "J0(1) against power series", abs(bessel_j0(1.0) - _series_j0(1.0)) <= 1e-7
    yield "J0(0) = 1", bessel_j0(0.0) == 1.0

    xs = np.linspace(0.5, 50, 200)
    step = 1e-5 * np.maximum(1, xs)
    dj = (bessel_j0(xs + step) - bessel_j0(xs - step)) / (2 * step)
    dy = (bessel_y0(xs + step) - bessel_y0(xs - step)) / (2 * step)
    w = bessel_j0(xs) * dy - dj * bessel_y0(xs)
    yield "Wronskian 2/(pi x)", np.max(np.abs(w / (2 / (np.pi * xs)) - 1)) <= 1e-6

    rng = np.random.default_rng(0)
    z, x = rng.normal(size=2), rng.normal(size=2)
    yield "green2d symmetric", green2d(z, x, 3.0) == green2d(x, z, 3.0)

    scene = Scene.with_disks(0.4, [((0.3, -0.3), 0.03, 5), ((-0.4, -0.2), 0.03, 5)])
    k0 = scene.background.k0
    sensors = make_circle_array(3.0, 36)
    grid = make_grid((0, 0), 1.2, 0.049)
    msr = assemble_msr(scene, sensors, make_direction_set(12))
    gap = np.max(np.abs(kirchhoff(msr, grid, k0).values - dsma(msr, grid, k0).values))
    yield "NKM equals DSMA on shared data", gap <= 1e-9

    yield "PSI2 equals PSI3", np.array_equal(psi2_map(scene, grid).values, psi3_map(scene, grid).values)

    one = assemble_msr(scene, sensors, make_direction_set(1, math.pi))
    m1 = dsm_single(one, 0, grid, k0)
    m2 = dsm_single(one.scaled(2.5 - 1.5j), 0, grid, k0)
    yield "DSM invariant to complex scaling", np.max(np.abs(m1.values - m2.values)) <= 1e-12

    ex = exact_map(scene, grid)
    yield "Jaccard(exact, exact) = 100", jaccard(ex, ex, 0.5) == 100.0
    t = threshold_map(m1, 0.4)
    yield "threshold idempotent", np.array_equal(threshold_map(t, 0.4).values, t.values)

    a, b = add_awgn(msr, 20, 7), add_awgn(msr, 20, 7)
    yield "noise deterministic for a fixed seed", np.array_equal(a.values, b.values)

    yield "plane-wave average -> J0 (L=36)", plane_wave_bessel_check(36, (0.5, 0.2), (-0.3, 0.1), k0) <= 1e-6


def run_selftest(out=print):
    ok = True
    for name, passed in _checks():
        ok &= bool(passed)
        out(f"[{'PASS' if passed else 'FAIL'}] {name}")
    return ok
