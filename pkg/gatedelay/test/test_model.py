# The MIT License
# Copyright 2019 Innodata Labs
#
import pytest
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from gatedelay.model import State, TotalState, VectorField, ParamVectorField, ModelError, \
    WidthError, excitation_set, apply, is_stable, hamming, orbit_summary, iterate, coordinate_mask, \
    mask_coordinates
from gatedelay import data


NOT = data.not_gate()
CONST11 = data.const_field(2, 0b11)
RACE = data.race()


def s(text):
    return State.parse(text)


def fields(max_n=3):
    return st.integers(1, max_n).flatmap(lambda n: st.tuples(
        st.just(n),
        st.lists(st.integers(0, (1 << n) - 1), min_size=1 << n, max_size=1 << n),
    ))


def test_state_text():
    assert s('01') == State(1, 2)
    assert str(State(1, 2)) == '01'
    assert str(State(0, 0)) == ''
    assert s('10').coordinate(1) == 1
    assert s('10').coordinate(2) == 0
    assert s('10').bits == (1, 0)
    assert State.from_bits((1, 1, 0)) == s('110')


def test_state_errors():
    with pytest.raises(ModelError, match='bad bit character'):
        State.parse('2', 1)
    with pytest.raises(WidthError):
        State.parse('01', 1)
    with pytest.raises(ModelError):
        State.from_bits((0, 2))


def test_flip():
    assert s('00').flip(2) == s('01')
    assert s('00').flip(1, 2) == s('11')
    with pytest.raises(ModelError):
        s('00').flip(3)


def test_coordinate_masks():
    assert coordinate_mask(3, (1,)) == 0b100
    assert coordinate_mask(3, (1, 3)) == 0b101
    assert mask_coordinates(3, 0b011) == (2, 3)


def test_total_state():
    z = TotalState(s('1'), s('0'))
    assert z.joined() == s('10')
    assert TotalState.split(s('10'), 1, 1) == z
    assert str(z) == '10'
    with pytest.raises(WidthError):
        TotalState.split(s('10'), 2, 1)


def test_vector_field():
    assert NOT(s('0')) == s('1')
    assert apply(RACE, s('00')) == s('11')
    assert excitation_set(NOT, s('0')) == {1}
    assert excitation_set(RACE, s('00')) == {1, 2}
    assert excitation_set(RACE, s('01')) == frozenset()
    assert is_stable(RACE, s('10'))
    assert not is_stable(RACE, s('00'))
    assert RACE.stable_states() == (s('01'), s('10'), s('11'))
    assert NOT.stable_states() == ()

    with pytest.raises(WidthError):
        NOT(s('00'))


def test_vector_field_table_checks():
    with pytest.raises(ModelError):
        VectorField(1, [2, 0])
    with pytest.raises(ModelError):
        VectorField(1, [0])
    with pytest.raises(ModelError):
        VectorField(0, [0])


def test_vector_field_equality():
    g = VectorField.from_function(1, lambda w: State(1 - w.value, 1))
    assert g == NOT
    assert hash(g) == hash(NOT)
    assert g != data.identity(1)
    assert len({g, NOT, RACE}) == 2


def test_param_vector_field():
    buf = data.buffer()
    assert buf(s('0'), s('1')) == s('1')
    assert buf(s('1'), s('0')) == s('0')
    assert buf.section(s('1')) == data.const_field(1, 1)
    assert buf.section(s('0')) == data.const_field(1, 0)
    assert ParamVectorField.autonomous(RACE).as_vector_field() == RACE

    with pytest.raises(ModelError):
        buf.as_vector_field()
    with pytest.raises(ModelError):
        ParamVectorField(1, 1, [0, 1, 2, 0])


def test_hamming():
    assert hamming(s('00'), s('11')) == 2
    assert hamming(s('101'), s('101')) == 0
    with pytest.raises(WidthError):
        hamming(s('0'), s('00'))


def test_orbit_summary():
    orbit = orbit_summary(NOT, s('0'))
    assert (orbit.transient_len, orbit.period) == (0, 2)
    assert orbit.milestones == (s('0'), s('1'))
    assert not orbit.stabilizes

    orbit = orbit_summary(CONST11, s('00'))
    assert (orbit.transient_len, orbit.period) == (1, 1)
    assert orbit.milestones == (s('00'), s('11'))
    assert orbit.stabilizes

    orbit = orbit_summary(data.identity(2), s('10'))
    assert (orbit.transient_len, orbit.period) == (0, 1)


def test_iterate():
    assert iterate(NOT, s('0'), 0) == s('0')
    assert iterate(NOT, s('0'), 5) == s('1')
    assert iterate(NOT, s('0'), 100) == s('0')
    assert iterate(CONST11, s('01'), 7) == s('11')
    with pytest.raises(ValueError):
        iterate(NOT, s('0'), -1)


@given(fields())
@settings(max_examples=50, deadline=None)
def test_orbit_matches_iterates(field):
    n, table = field
    g = VectorField(n, table)
    for w in g.states():
        orbit = orbit_summary(g, w)
        for j in range(2 * (1 << n) + 2):
            assert orbit.at(j) == iterate(g, w, j)
        J, P = orbit.transient_len, orbit.period
        assert iterate(g, w, J) == iterate(g, w, J + P)
        assert len(set(orbit.milestones)) == J + P


@given(fields())
@settings(max_examples=50, deadline=None)
def test_stable_states(field):
    n, table = field
    g = VectorField(n, table)
    expected = tuple(w for w in g.states() if g(w) == w)
    assert g.stable_states() == expected
    assert np.array_equal(g.table, np.array(table))
