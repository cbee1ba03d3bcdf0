import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from surfcol import _accel
from surfcol.catalog import load_catalog

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def _arrays(system):
    tri = np.array(system.tri_eqs, dtype=np.int64).reshape(-1, 4)
    eqs = np.array(system.eq_vars, dtype=np.int64).reshape(-1, 2)
    return tri, eqs


def test_flag_parsing(monkeypatch):
    monkeypatch.setenv("SURFCOL_DISABLE_NUMBA", "1")
    assert not _accel.numba_enabled()
    monkeypatch.setenv("SURFCOL_DISABLE_NUMBA", "0")
    assert _accel.numba_enabled() == _accel.HAVE_NUMBA
    monkeypatch.delenv("SURFCOL_DISABLE_NUMBA")
    assert _accel.numba_enabled() == _accel.HAVE_NUMBA


@needs_numba
@pytest.mark.parametrize("entry", load_catalog(), ids=lambda e: e.name)
def test_brute_force_paths_agree(entry, x3, x4):
    tri, eqs = _arrays(entry.system)
    for t in (x3, x4):
        if t.size**entry.system.var_count > 10**6:
            continue
        a = _accel.brute_force_numpy(t.tensor, t.size, entry.system.var_count, tri, eqs)
        b = _accel.brute_force_numba(t.tensor, t.size, entry.system.var_count, tri, eqs)
        assert a == b


def test_brute_force_python_reference(x3):
    s = load_catalog()[1].system
    tri, eqs = _arrays(s)
    assert _accel._brute_force_py(x3.tensor, 3, s.var_count, tri, eqs) == 15
    assert _accel.brute_force_numpy(x3.tensor, 3, s.var_count, tri, eqs, chunk=7) == 15


def test_zero_variables(x3):
    empty = np.zeros((0, 4), dtype=np.int64), np.zeros((0, 2), dtype=np.int64)
    assert _accel.brute_force_numpy(x3.tensor, 3, 0, *empty) == 1


@needs_numba
@given(flat=st.lists(st.integers(0, 2), min_size=27, max_size=27))
def test_axiom2_paths_agree(flat):
    t = np.array(flat, dtype=np.int64).reshape(3, 3, 3)
    a = _accel.axiom2_failures_numpy(t)
    b = _accel.axiom2_failures_numba(t)
    assert np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_paths_agree(n):
    a, na, ea = _accel.enumerate_tensors(n, 10**7, use_numba=False)
    b, nb, eb = _accel.enumerate_tensors(n, 10**7, use_numba=True)
    assert np.array_equal(a, b) and na == nb and ea == eb


def test_enumeration_buffer_growth():
    a, _, _ = _accel.enumerate_tensors(3, 10**7, cap=1)
    assert len(a) == 12


def test_env_flag_in_subprocess():
    code = "from surfcol import _accel; print(_accel.numba_enabled())"
    env = {**os.environ, "SURFCOL_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
