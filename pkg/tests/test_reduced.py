import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from semitoric import series
from semitoric.errors import ComplexRootsError, OnSeparatrix
from semitoric.global_invariants import momentum_map
from semitoric.params import ModelParams
from semitoric.reduced import (OrbitType, ReducedLevel, edge_values, model_for, ordering_ok, orbit_sign, orbit_type,
                               reduced_hamiltonian, solve_roots)

P = ModelParams(1.0, 2.0, 0.5)
unit = st.floats(-0.999, 0.999)


@given(unit, unit, st.floats(0, 2 * math.pi))
def test_reduced_hamiltonian_matches_full(z1, z2, dth):
    p = ModelParams(1.3, 2.1, 0.45)
    L, H = momentum_map(z1, z2, dth, p)
    l, p2 = L / p.R1, p.R * (1 + z2)
    # sqrt((1 - z^2)) factors near the poles cost a few ulps
    assert reduced_hamiltonian(l, dth, p2, p) == pytest.approx(H, abs=1e-12)


@given(st.floats(-1.5, 1.5))
def test_edge_values(l):
    m = model_for(ReducedLevel(l, 0.0), P)
    assert edge_values(l, P) == pytest.approx([m.eval_A(x) for x in (0.0, l, 2 * P.R, l + 2.0)], abs=1e-13)


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_degree_four_cancels(l, h):
    assert abs(model_for(ReducedLevel(l, h), P).leading_residue) <= 1e-14


@given(st.floats(-0.05, 0.05), st.floats(-0.05, 0.05))
def test_roots_are_roots_and_ordered(l, h):
    assume(abs(l) > 1e-6 or abs(h) > 1e-6)
    r = solve_roots(ReducedLevel(l, h), P)
    assume(not r.complex_pair)
    m = model_for(ReducedLevel(l, h), P)
    for z in r.as_tuple():
        assert abs(m.eval_P(z)) < 1e-12
    if ordering_ok(r, l, P.R):
        assert m.eval_P(0.5 * (r.zeta2 + r.zeta3)) > 0


def test_ff_value_roots():
    # at the focus-focus value two roots merge at 0 and the third sits at rA^2 / (2 R t (1 - t))
    r = solve_roots(ReducedLevel(0.0, 0.0), P)
    assert r.zeta1 == pytest.approx(0.0, abs=1e-7)
    assert r.zeta2 == pytest.approx(0.0, abs=1e-7)
    assert r.zeta3 == pytest.approx(P.rA_squared / (2 * P.R * P.t * (1 - P.t)), rel=1e-12)


def test_series_roots_converge():
    errs = []
    for eps in (1e-2, 5e-3):
        z = solve_roots(ReducedLevel(0.6 * eps, -0.3 * eps), P).as_tuple()
        s = series.roots_lh(0.6 * eps, -0.3 * eps, P.R, P.t, order=2)
        errs.append(abs(z[0] - s[0]))
    assert errs[0] / errs[1] == pytest.approx(8, abs=1)


def test_orbit_types():
    assert orbit_type(ReducedLevel(0.01, 0.02), P) in set(OrbitType)
    with pytest.raises(OnSeparatrix):
        orbit_type(ReducedLevel(0.0, 0.0), P)


def test_orbit_sign_is_unit():
    assert abs(orbit_sign(ReducedLevel(0.02, 0.01), P)) == pytest.approx(1.0, abs=1e-6)


def test_strict_complex():
    lv = ReducedLevel(0.0, 3.0)
    r = solve_roots(lv, P)
    if r.complex_pair:
        with pytest.raises(ComplexRootsError):
            solve_roots(lv, P, strict=True)
