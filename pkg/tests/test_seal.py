import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qseal import (
    SealScheme,
    analyze_scheme,
    load_scheme,
    make_product_scheme,
    make_stringent_scheme,
    save_scheme,
)
from qseal.errors import DimensionMismatch, NormalizationError, ParseError, QmaxOutOfRange
from qseal.seal import dumps_scheme, is_stringent_pair, loads_scheme

qmax_values = st.floats(min_value=1e-3, max_value=1.0, allow_nan=False)


def test_stringent_perfect_seal():
    s = make_stringent_scheme(1.0)
    e2 = np.zeros(3)
    e2[2] = 1
    np.testing.assert_array_equal(s.psi0, np.kron([1, 0], e2))
    np.testing.assert_array_equal(s.psi1, np.kron([0, 1], e2))
    assert np.vdot(s.psi0, s.psi1) == 0


def test_stringent_amplitudes_by_hand():
    # expand the two ancilla-0/1 blocks and the |i>|2> term at q_max = 0.6
    s = make_stringent_scheme(0.6)
    w = math.sqrt(0.4) / 2
    r = math.sqrt(0.6)
    np.testing.assert_allclose(s.psi0.reshape(2, 3), [[w, w, r], [w, -w, 0]], atol=1e-16)
    np.testing.assert_allclose(s.psi1.reshape(2, 3), [[w, w, 0], [-w, w, r]], atol=1e-16)


def test_stringent_reductions():
    an = analyze_scheme(make_stringent_scheme(0.6))
    np.testing.assert_allclose(an.rho0, np.diag([0.8, 0.2]), atol=1e-15)
    np.testing.assert_allclose(an.rho1, np.diag([0.2, 0.8]), atol=1e-15)
    assert an.q_max == pytest.approx(0.6, abs=1e-12)


@pytest.mark.parametrize("bad", [0.0, -0.1, 1.0000001])
def test_qmax_range(bad, builtin):
    with pytest.raises(QmaxOutOfRange):
        builtin(bad)


def test_product_scheme_values():
    s = make_product_scheme(1.0)
    np.testing.assert_array_equal(s.psi0, [1, 0])
    np.testing.assert_array_equal(s.psi1, [0, 1])
    s = make_product_scheme(0.6)
    np.testing.assert_allclose(s.psi0, [math.sqrt(0.8), math.sqrt(0.2)], atol=1e-16)
    np.testing.assert_allclose(s.psi1, [math.sqrt(0.2), math.sqrt(0.8)], atol=1e-16)
    assert s.dim_a == 1
    assert analyze_scheme(s).q_max == pytest.approx(0.6, abs=1e-12)


def test_identical_states_have_zero_qmax():
    psi = make_stringent_scheme(0.3).psi0
    assert analyze_scheme(SealScheme(2, 3, psi, psi)).q_max == 0.0


def test_orthogonal_purifications_of_mixed_state():
    bell0 = np.array([1, 0, 0, 1]) / np.sqrt(2)
    bell1 = np.array([0, 1, 1, 0]) / np.sqrt(2)
    an = analyze_scheme(SealScheme(2, 2, bell0, bell1))
    assert np.vdot(bell0, bell1) == 0
    assert an.q_max == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(q_max=qmax_values)
def test_builtin_schemes_hit_qmax(q_max):
    for make in (make_stringent_scheme, make_product_scheme):
        assert analyze_scheme(make(q_max)).q_max == pytest.approx(q_max, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(q_max=qmax_values)
def test_builtin_reductions_share_diagonals_and_difference(q_max):
    st_an = analyze_scheme(make_stringent_scheme(q_max))
    pr_an = analyze_scheme(make_product_scheme(q_max))
    want = np.array([(1 + q_max) / 2, (1 - q_max) / 2])
    for a, b in ((st_an.rho0, pr_an.rho0), (st_an.rho1, pr_an.rho1)):
        np.testing.assert_allclose(np.diag(a).real, np.diag(b).real, atol=1e-12)
    np.testing.assert_allclose(np.diag(st_an.rho0).real, want, atol=1e-12)
    np.testing.assert_allclose(st_an.rho0 - st_an.rho1, pr_an.rho0 - pr_an.rho1, atol=1e-12)
    # the stringent reductions are diagonal, the product ones are pure
    np.testing.assert_allclose(st_an.rho0, np.diag(want), atol=1e-12)
    assert is_stringent_pair(st_an.rho0, st_an.rho1)
    if q_max < 1.0:
        assert not is_stringent_pair(pr_an.rho0, pr_an.rho1)


def test_scheme_validation():
    with pytest.raises(DimensionMismatch):
        SealScheme(1, 2, [1, 0], [0, 1])
    with pytest.raises(DimensionMismatch):
        SealScheme(2, 2, [1, 0], [0, 1])
    with pytest.raises(NormalizationError):
        SealScheme(2, 1, [0.9, 0], [0, 1])


def test_round_trip(tmp_path):
    s = make_stringent_scheme(0.6)
    path = tmp_path / "s.scheme"
    save_scheme(s, path)
    t = load_scheme(path)
    assert t == s
    assert t.psi0.tobytes() == s.psi0.tobytes()
    assert t.psi1.tobytes() == s.psi1.tobytes()


@settings(max_examples=40, deadline=None)
@given(dim_b=st.integers(2, 3), dim_a=st.integers(1, 3), seed=st.integers(0, 2**32 - 1))
def test_round_trip_random_complex(dim_b, dim_a, seed):
    r = np.random.default_rng(seed)
    states = []
    for _ in range(2):
        v = r.standard_normal(dim_b * dim_a) + 1j * r.standard_normal(dim_b * dim_a)
        states.append(v / np.linalg.norm(v))
    s = SealScheme(dim_b, dim_a, *states)
    assert loads_scheme(dumps_scheme(s)) == s


def test_unknown_field_is_parse_error():
    text = dumps_scheme(make_product_scheme(0.5)).replace('"dim_a"', '"dim_x"')
    with pytest.raises(ParseError) as info:
        loads_scheme(text)
    assert info.value.field == "dim_x"
    assert info.value.line == 3


@pytest.mark.parametrize("text, field", [
    ('{"dim_b": 2, "dim_a": 1, "psi0": [[1, 0], [0, 0]]}', "psi1"),
    ('{"dim_b": "2", "dim_a": 1, "psi0": [], "psi1": []}', "dim_b"),
    ('{"dim_b": 2, "dim_a": 1, "psi0": [[1, 0]], "psi1": [[0, 0], [1, 0]]}', "psi0"),
    ('{"dim_b": 2, "dim_a": 1, "psi0": [[1, 0], [0]], "psi1": [[0, 0], [1, 0]]}', "psi0"),
])
def test_malformed_fields(text, field):
    with pytest.raises(ParseError) as info:
        loads_scheme(text)
    assert info.value.field == field


def test_invalid_json_reports_line():
    with pytest.raises(ParseError) as info:
        loads_scheme('{\n  "dim_b": 2,\n  oops\n}')
    assert info.value.line == 3


def test_unnormalized_state_rejected():
    text = '{"dim_b": 2, "dim_a": 1, "psi0": [[0.9, 0], [0, 0]], "psi1": [[0, 0], [1, 0]]}'
    with pytest.raises(NormalizationError):
        loads_scheme(text)


def test_slightly_unnormalized_state_is_renormalized():
    v = 1 + 5e-9
    text = f'{{"dim_b": 2, "dim_a": 1, "psi0": [[{v!r}, 0], [0, 0]], "psi1": [[0, 0], [1, 0]]}}'
    s = loads_scheme(text)
    assert s.psi0[0] == 1.0
