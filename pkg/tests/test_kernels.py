"""Backend equivalence: the numba kernels must match the numpy fallbacks."""

import math

import numpy as np
import pytest

from pointbethe import _kernels
from pointbethe.bethe import bethe_state
from pointbethe.couplings import CouplingParameters
from pointbethe.permutations import symmetric_group

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA,
                                 reason="numba backend disabled or unavailable")


def _panel_inputs():
    rng = np.random.default_rng(0)
    grid = rng.uniform(-3, 3, (24, 4))
    grid[0] = (2.0, 0.0, 0.0, 1.5)
    grid[1] = (2.0, 0.5, 0.0, 0.0)
    panel = _kernels.sample_panel(1, 40)
    return grid, panel[:, 0].copy(), panel[:, 1].copy()


def _state_inputs(n=4):
    params = CouplingParameters(1.8, 0.0, 0.0, -0.6)
    k = np.array([1.9, 0.8, -0.3, -1.5])[:n]
    rng = np.random.default_rng(2)
    f = math.factorial(n)
    a = rng.normal(size=f) + 1j * rng.normal(size=f)
    return params, k, a


def test_backend_flag_is_exposed():
    assert _kernels.BACKEND in ("numba", "numpy")
    assert _kernels.HAVE_NUMBA == (_kernels.BACKEND == "numba")


@needs_numba
def test_panel_backends_agree():
    grid, us, vs = _panel_inputs()
    a = _kernels.factorization_panel_numpy(grid, us, vs)
    b = _kernels.factorization_panel_numba(grid, us, vs)
    assert np.allclose(a, b, atol=1e-13)


@needs_numba
def test_eval_grid_backends_agree():
    params, k, a = _state_inputs()
    state = bethe_state(params, k, a)
    tables = symmetric_group(len(k))
    rng = np.random.default_rng(3)
    points = rng.uniform(-3, 3, (200, len(k)))
    va = _kernels.eval_grid_numpy(points, k, state.table, tables.images,
                                  tables.lehmer_to_index)
    vb = _kernels.eval_grid_numba(points, k, state.table, tables.images,
                                  tables.lehmer_to_index)
    assert np.allclose(va, vb, atol=1e-12)


@needs_numba
def test_propagate_table_backends_agree():
    params, k, a = _state_inputs()
    tables = symmetric_group(len(k))
    srp, srm, stp, stm = _kernels.pair_amplitude_tables(params, k)
    args = (a, tables.decomp_flat, tables.decomp_offsets, tables.tmaps,
            tables.asc, srp, srm, stp, stm)
    ta = _kernels.propagate_table_numpy(*args)
    tb = _kernels.propagate_table_numba(*args)
    assert np.allclose(ta, tb, atol=1e-13)


def test_panel_marks_poles_with_inf():
    grid = np.array([[0.0, 0.0, 0.0, 0.0]])
    res = _kernels.factorization_panel(grid, np.array([1e-15]), np.array([1.0]))
    assert np.isinf(res).all()


def test_pair_amplitude_tables_layout():
    params = CouplingParameters(1.2, 0.0, 0.3, -0.4)
    k = np.array([0.9, -0.7, 1.6])
    srp, srm, stp, stm = _kernels.pair_amplitude_tables(params, k)
    from pointbethe.scattering import amplitudes
    amp = amplitudes(params, k[2] - k[0])
    assert srp[2, 0] == amp.s_r_plus
    assert srm[2, 0] == amp.s_r_minus
    assert stp[2, 0] == amp.s_t_plus
    assert stm[2, 0] == amp.s_t_minus
    assert srp[1, 1] == 0.0
