# The MIT License
# Copyright 2019 Innodata Labs
#
import itertools
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from gatedelay.model import State, VectorField, orbit_summary
from gatedelay.relations import reach, reach_graph
from gatedelay.properties import stable_reach, classify
from gatedelay.oracle import ResourceLimitError, MalformedLassoError, Walk, Lasso, \
    fair_supports, full_update_walk, is_fair_lasso, enumerate_lassos, lasso_behavior, \
    oracle_classify, milestone_decomposition, alignment_defects, constant_field_containment
from gatedelay.selftest import oracle_suite, randomized_suite
from gatedelay import data


NOT = data.not_gate()
CONST11 = data.const_field(2, 0b11)
RACE = data.race()
UNFAIR2 = data.unfair2()


def s(text):
    return State.parse(text)


def walk(*texts):
    return Walk(tuple(s(t) for t in texts))


def cases(max_n=3):
    return st.integers(1, max_n).flatmap(lambda n: st.tuples(
        st.lists(st.integers(0, (1 << n) - 1), min_size=1 << n, max_size=1 << n)
        .map(lambda table: VectorField(n, table)),
        st.integers(0, (1 << n) - 1).map(lambda x: State(x, n)),
    ))


def test_full_update_walk():
    assert full_update_walk(NOT, s('0'), 3) == walk('0', '1', '0', '1')
    assert full_update_walk(CONST11, s('00'), 2) == walk('00', '11', '11')
    assert str(walk('00', '11')) == '00,11'
    assert walk('00', '11').last == s('11')


def test_fair_supports():
    supports = fair_supports(NOT, s('0'))
    assert [sup.states for sup in supports] == [(s('0'), s('1'))]
    assert fair_supports(UNFAIR2, s('00')) == ()
    assert fair_supports(RACE, s('00')) == ()


def test_not_gate_lassos():
    lassos = enumerate_lassos(NOT, s('0'))
    assert lassos == [
        Lasso(walk('0'), (s('0'), s('1'))),
        Lasso(walk('0', '1'), (s('1'), s('0'))),
        Lasso(walk('0', '1', '0'), (s('0'), s('1'))),
    ]
    for lasso in lassos:
        assert not lasso.parking
        assert lasso.support == {s('0'), s('1')}
        assert is_fair_lasso(NOT, lasso)
    assert lasso_behavior(lassos[0], 4) == full_update_walk(NOT, s('0'), 4)


def test_race_lassos():
    lassos = enumerate_lassos(RACE, s('00'))
    assert lassos == [
        Lasso(walk('00', '01'), (s('01'),)),
        Lasso(walk('00', '10'), (s('10'),)),
        Lasso(walk('00', '11'), (s('11'),)),
    ]
    assert all(lasso.parking for lasso in lassos)
    assert lasso_behavior(lassos[0], 3) == walk('00', '01', '01', '01')


def test_unfair_cycle_is_not_a_lasso():
    lassos = enumerate_lassos(UNFAIR2, s('00'))
    assert lassos
    assert all(lasso.parking for lasso in lassos)
    assert {lasso.cycle[0] for lasso in lassos} == {s('10'), s('11')}
    assert Lasso(walk('00', '01', '00', '10'), (s('10'),)) in lassos
    assert not is_fair_lasso(UNFAIR2, Lasso(walk('00'), (s('00'), s('01'))))


def test_cycle_bound():
    assert enumerate_lassos(NOT, s('0'), cycle_bound=1) == []


def test_identity_parks_at_once():
    assert enumerate_lassos(data.identity(2), s('10')) == [Lasso(walk('10'), (s('10'),))]


def test_malformed_lassos():
    with pytest.raises(MalformedLassoError):
        is_fair_lasso(NOT, Lasso(walk('0'), (s('1'),)))
    with pytest.raises(MalformedLassoError):
        is_fair_lasso(NOT, Lasso(walk('0', '1'), (s('1'),)))
    with pytest.raises(MalformedLassoError):
        is_fair_lasso(RACE, Lasso(walk('00', '01', '11'), (s('11'),)))
    with pytest.raises(MalformedLassoError):
        is_fair_lasso(NOT, Lasso(walk('0'), ()))


def test_resource_limits():
    with pytest.raises(ResourceLimitError):
        oracle_classify(data.const_field(5, 0), State(0, 5))
    with pytest.raises(ResourceLimitError):
        enumerate_lassos(NOT, s('0'), limits=dict(max_nodes=2))
    assert len(enumerate_lassos(NOT, s('0'), limits=dict(max_nodes=12))) == 3
    with pytest.raises(ValueError):
        enumerate_lassos(NOT, s('0'), limits=dict(max_cycles=2))


def test_catalogue_fits_width_three():
    g = VectorField(3, [0b111, 0b010, 0b000, 0b101, 0b100, 0b000, 0b101, 0b000])
    w = s('101')
    lassos = enumerate_lassos(g, w)
    assert lassos
    assert {x for lasso in lassos for x in lasso.prefix} == reach(g, w)
    r = oracle_classify(g, w)
    assert r.stable_reachable == (s('100'),)
    assert not r.convergent


def test_oracle_classify():
    r = oracle_classify(RACE, s('00'))
    assert r.delay_sensitivity_causes == ('multiple_limits',)
    assert r.verdicts['semi_modular'].witness.u == s('00')
    assert r.verdicts['weakly_semi_modular'].witness.stable == s('01')
    assert not r.verdicts['tcgr'].holds

    r = oracle_classify(NOT, s('0'))
    assert r.delay_sensitivity_causes == ('oscillation',)
    assert r.tcgr_branch == 'b3'
    assert r.single_bit_change


def test_milestones_of_oscillation():
    w = walk('0', '1', '1', '0', '0', '0', '1', '1', '1')
    v = milestone_decomposition(NOT, w)
    assert v.holds
    d = v.witness
    assert d.indices == (0, 1, 3, 6)
    assert (d.transient_len, d.period) == (0, 2)
    assert d.transient == frozenset()
    assert d.permanent == {s('0'), s('1')}
    assert alignment_defects(w, d) == (1, 2, 3, 4, 5)
    assert alignment_defects(w, d, span=2) == (1,)

    w = full_update_walk(NOT, s('0'), 6)
    d = milestone_decomposition(NOT, w).witness
    assert d.indices == (0, 1, 2, 3, 4, 5, 6)
    assert alignment_defects(w, d) == ()


def test_milestones_of_stabilizing_orbit():
    w = walk('00', '10', '11', '11')
    d = milestone_decomposition(CONST11, w).witness
    assert d.indices == (0, 2)
    assert d.transient == {s('00'), s('10')}
    assert d.permanent == {s('11')}

    d = milestone_decomposition(data.identity(2), walk('10', '10')).witness
    assert d.indices == (0,)
    assert d.permanent == {s('10')}


def test_milestones_need_tcgr():
    v = milestone_decomposition(RACE, walk('00', '01'))
    assert not v.applicable
    with pytest.raises(MalformedLassoError):
        milestone_decomposition(CONST11, walk('11', '00'))


def test_constant_field_containment():
    v = constant_field_containment(CONST11, s('00'))
    assert v.holds
    assert v.witness == 3
    assert v.limit == s('11')

    # constant on M(00) = {00, 01} only
    g = VectorField(2, [0b01, 0b01, 0b00, 0b00])
    v = constant_field_containment(g, s('00'))
    assert v.holds
    assert v.limit == s('01')

    assert not constant_field_containment(NOT, s('0')).applicable


def _unrolled_steps(lassos):
    steps = set()
    for lasso in lassos:
        behavior = lasso_behavior(lasso, len(lasso.prefix) + len(lasso.cycle))
        steps.update((a, b) for a, b in zip(behavior, behavior.states[1:]) if a != b)
    return steps


@given(cases(max_n=3))
@settings(max_examples=80, deadline=None)
def test_lassos_cover_fair_behaviour(case):
    g, w = case
    lassos = enumerate_lassos(g, w)
    visited = set()
    for lasso in lassos:
        assert lasso.prefix[0] == w
        assert is_fair_lasso(g, lasso)
        visited.update(lasso.prefix)
        visited.update(lasso.cycle)
    assert visited == reach(g, w)
    assert _unrolled_steps(lassos) == reach_graph(g, w).proper_edges
    parked = {lasso.cycle[0] for lasso in lassos if lasso.parking}
    assert parked == set(stable_reach(g, w))
    cycles = {lasso.support for lasso in lassos if not lasso.parking}
    assert cycles == {frozenset(sup.states) for sup in fair_supports(g, w)}


@given(cases(max_n=3))
@settings(max_examples=80, deadline=None)
def test_full_update_extends_walks_fairly(case):
    g, w = case
    for lasso in enumerate_lassos(g, w):
        p = len(lasso.prefix)
        tail = full_update_walk(g, lasso.prefix.last, 1 << g.n)
        extended = lasso.prefix.states + tail.states[1:]
        for a, b in zip(extended[p - 1:], extended[p:]):
            # every excited coordinate has switched one step later
            assert a.value ^ b.value == g.excitation(a.value)
        orbit = orbit_summary(g, lasso.prefix.last)
        J = orbit.transient_len
        assert is_fair_lasso(g, Lasso(Walk(extended[:p + J]), orbit.milestones[J:]))


def test_trivially_hazard_free_lassos_fit_the_constant_field():
    cases_seen = 0
    for g, w in itertools.chain(data.all_cases(2), data.random_cases(3, 200, 5)):
        thf = classify(g, w).verdicts['trivially_hazard_free']
        v = constant_field_containment(g, w)
        assert v.applicable == thf.holds
        if thf.holds:
            cases_seen += 1
            assert v.holds, v.witness
            assert v.limit == thf.limit
    assert cases_seen > 0


def test_oracle_agreement_exhaustive():
    for n in (1, 2):
        result = oracle_suite(n)
        assert result.passed, result.violations[:3]


def test_oracle_agreement_random():
    result = randomized_suite(3, 500, 7, oracle=True)
    assert result.cases_run == 500
    assert result.passed, result.violations[:3]
