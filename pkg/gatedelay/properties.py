# The MIT License
# Copyright 2019 Innodata Labs
#
'''
Decision procedures for delay-insensitivity, hazard-freedom, semi-modularity
and the technical condition of good running (TCGR).

Every property that has two equivalent characterizations computes both and
raises DefectError when they disagree. Path-quantified properties are decided
on finite walks: any finite mu-walk extends to a fair path by switching all
excited coordinates at every later step.
'''
import logging
from collections import deque
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple
from gatedelay.model import State, DefectError, OrbitSummary, orbit_summary, hamming, \
    mask_coordinates
from gatedelay.relations import SccWitness, reach_graph, reach_before, coreach, \
    frozen_reach, accepting_scc, moves, is_mu_step

log = logging.getLogger(__name__)

OSCILLATION = 'oscillation'
MULTIPLE_LIMITS = 'multiple_limits'
NON_MONOTONOUS = 'non_monotonous'

PROPERTY_NAMES = (
    'delay_insensitive',
    'hazard_free',
    'trivially_hazard_free',
    'semi_modular',
    'weakly_semi_modular',
    'tcgr',
)


@dataclass(frozen=True)
class Verdict:
    '''Outcome of one decision; a failed verdict always carries a witness.'''
    holds: bool
    witness: Any = None
    causes: Tuple[str, ...] = ()
    limit: Optional[State] = None
    branch: Optional[str] = None
    applicable: bool = True

    @classmethod
    def not_applicable(cls, reason):
        return cls(False, reason, applicable=False)


@dataclass(frozen=True)
class MonotonyWitness:
    '''A walk on which coordinate goes value -> not value -> value.'''
    coordinate: int
    value: int
    walk: Tuple[State, ...]


@dataclass(frozen=True)
class SensitivityWitness:
    scc: Optional[SccWitness] = None
    limits: Tuple[State, ...] = ()


@dataclass(frozen=True)
class HazardWitness:
    walk: Optional[MonotonyWitness] = None
    limits: Tuple[State, ...] = ()


@dataclass(frozen=True)
class ImagePair:
    '''Two reachable states with different images.'''
    u: State
    u2: State


@dataclass(frozen=True)
class DisablingWitness:
    '''coordinate is excited in u, unchanged by the move u -> u2, and not excited in u2.'''
    u: State
    u2: State
    coordinate: int


@dataclass(frozen=True)
class EscapeWitness:
    '''A fair continuation from u that keeps coordinate at u's value forever.'''
    u: State
    coordinate: int
    stable: Optional[State] = None
    scc: Optional[SccWitness] = None


@dataclass(frozen=True)
class TargetChange:
    '''The move u -> u2 misses g(u) yet changes the target: g(u2) != g(u).'''
    u: State
    u2: State


def _graph(g, w, graph):
    return graph if graph is not None else reach_graph(g, w)


def is_mu_walk(g, states):
    return all(is_mu_step(g, a, b) for a, b in zip(states, states[1:]))


def stable_reach(g, w, graph=None):
    '''Equilibria reachable from w, ascending.'''
    graph = _graph(g, w, graph)
    return tuple(u for u in graph.sorted_nodes() if g.image(u.value) == u.value)


def all_paths_convergent(g, w, graph=None):
    scc = accepting_scc(g, _graph(g, w, graph))
    return Verdict(scc is None, scc)


def _switching_walk(g, graph, i, a):
    '''Shortest walk from the root on which coordinate i reads a, then not a, then a.'''
    want = (a, 1 - a, a)

    def advance(phase, u):
        if phase < 3 and u.coordinate(i) == want[phase]:
            return phase + 1
        return phase

    start = (graph.root, advance(0, graph.root))
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        u, phase = node
        if phase == 3:
            walk = []
            while node is not None:
                walk.append(node[0])
                node = parent[node]
            return tuple(reversed(walk))
        for v in graph.successors[u]:
            nxt = (v, advance(phase, v))
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    return None


def all_paths_monotonous(g, w, graph=None):
    '''Every fair path from w switches each coordinate at most once.'''
    graph = _graph(g, w, graph)
    for i in range(1, g.n + 1):
        for a in (0, 1):
            walk = _switching_walk(g, graph, i, a)
            if walk is not None:
                return Verdict(False, MonotonyWitness(i, a, walk))
    return Verdict(True)


def _unique_attractor(g, graph):
    '''The single equilibrium reachable from every state of the graph, if exactly one.'''
    found = []
    for x in g.stable_states():
        if x in graph.nodes and graph.nodes <= coreach(g, x):
            found.append(x)
    return found[0] if len(found) == 1 else None


def delay_insensitive(g, w, graph=None, convergent=None):
    graph = _graph(g, w, graph)
    if convergent is None:
        convergent = all_paths_convergent(g, w, graph)
    stables = stable_reach(g, w, graph)

    by_count = convergent.holds and len(stables) == 1
    attractor = _unique_attractor(g, graph) if convergent.holds else None
    by_coreach = attractor is not None
    if by_count != by_coreach:
        raise DefectError('delay-insensitivity-variants',
                          f'{g!r} at {w}: count={by_count}, coreach={by_coreach}')

    if by_count:
        return Verdict(True, limit=stables[0])

    causes = []
    if not convergent.holds:
        causes.append(OSCILLATION)
    if len(stables) > 1:
        causes.append(MULTIPLE_LIMITS)
    return Verdict(False, SensitivityWitness(convergent.witness, stables[:2]),
                   causes=tuple(causes))


def hazard_free(g, w, graph=None, monotonous=None):
    graph = _graph(g, w, graph)
    if monotonous is None:
        monotonous = all_paths_monotonous(g, w, graph)
    stables = stable_reach(g, w, graph)

    by_count = monotonous.holds and len(stables) == 1
    by_coreach = monotonous.holds and _unique_attractor(g, graph) is not None
    if by_count != by_coreach:
        raise DefectError('hazard-freedom-variants',
                          f'{g!r} at {w}: count={by_count}, coreach={by_coreach}')

    if by_count:
        return Verdict(True, limit=stables[0])

    causes = []
    if not monotonous.holds:
        causes.append(NON_MONOTONOUS)
    if len(stables) > 1:
        causes.append(MULTIPLE_LIMITS)
    return Verdict(False, HazardWitness(monotonous.witness, stables[:2]),
                   causes=tuple(causes))


def trivially_hazard_free(g, w, graph=None):
    '''g is constant on M(w); the constant is the limit.'''
    graph = _graph(g, w, graph)
    target = g(w)
    for u in graph.sorted_nodes():
        if g.image(u.value) != target.value:
            return Verdict(False, ImagePair(w, u))
    return Verdict(True, limit=target)


def _disabling_move(g, graph):
    '''Any move from a reachable u that leaves an excited coordinate unchanged but disables it.'''
    for u in graph.sorted_nodes():
        e = g.excitation(u.value)
        for y in moves(g, u.value):
            kept = e & ~(y ^ u.value)
            lost = kept & ~g.excitation(y)
            if lost:
                return DisablingWitness(u, State(y, g.n), mask_coordinates(g.n, lost)[0])
    return None


def _disabling_pair(g, graph):
    '''Two excited coordinates i != j of a reachable u where switching j alone disables i.'''
    for u in graph.sorted_nodes():
        e = g.excitation(u.value)
        for j in mask_coordinates(g.n, e):
            y = u.value ^ (1 << (g.n - j))
            lost = (e & ~(1 << (g.n - j))) & ~g.excitation(y)
            if lost:
                return DisablingWitness(u, State(y, g.n), mask_coordinates(g.n, lost)[0])
    return None


def semi_modular(g, w, graph=None):
    graph = _graph(g, w, graph)
    by_moves = _disabling_move(g, graph)
    by_pairs = _disabling_pair(g, graph)
    if (by_moves is None) != (by_pairs is None):
        raise DefectError('semi-modularity-variants',
                          f'{g!r} at {w}: moves={by_moves}, pairs={by_pairs}')
    if by_moves is None:
        return Verdict(True)
    return Verdict(False, by_moves)


def weakly_semi_modular(g, w, graph=None, coordinates=None):
    '''Along every fair path each coordinate eventually takes the value g gave it earlier.

    Fails when some reachable u with an excited coordinate i can continue
    fairly forever without switching i. coordinates restricts the quantified i.
    '''
    graph = _graph(g, w, graph)
    if coordinates is None:
        coordinates = range(1, g.n + 1)
    coordinates = frozenset(coordinates)
    for u in graph.sorted_nodes():
        for i in mask_coordinates(g.n, g.excitation(u.value)):
            if i not in coordinates:
                continue
            b = u.coordinate(i)
            frozen = frozen_reach(g, u, i, b)
            for x in frozen.sorted_nodes():
                if g.image(x.value) == x.value:
                    return Verdict(False, EscapeWitness(u, i, stable=x))
            scc = accepting_scc(g, frozen, freeze=(i, b))
            if scc is not None:
                return Verdict(False, EscapeWitness(u, i, scc=scc))
    return Verdict(True)


def _target_change(g, graph):
    for u in graph.sorted_nodes():
        target = g.image(u.value)
        for y in moves(g, u.value):
            if y != target and g.image(y) != target:
                return TargetChange(u, State(y, g.n))
    return None


def tcgr_branch(g, w, orbit):
    if g.image(w.value) == w.value:
        return 'b1'
    return 'b2' if orbit.stabilizes else 'b3'


def _tcgr_by_orbit(g, w, orbit):
    '''Between consecutive iterates, g is frozen at the next iterate.

    For each step j the states reachable from g^j(w) before reaching
    g^(j+1)(w) must all have image g^(j+1)(w). The orbit repeats with period
    P, so steps j < J + P cover every j; a stabilizing orbit stops at J.
    '''
    if g.image(w.value) == w.value:
        return True
    J, P = orbit.transient_len, orbit.period
    span = J if orbit.stabilizes else J + P
    for j in range(span):
        here, target = orbit.at(j), orbit.at(j + 1)
        for u in reach_before(g, here, target):
            if g.image(u.value) != target.value:
                return False
    return True


def tcgr(g, w, graph=None, orbit=None):
    '''Technical condition of good running: a move that misses g(u) never changes the target.'''
    graph = _graph(g, w, graph)
    if orbit is None:
        orbit = orbit_summary(g, w)
    direct = _target_change(g, graph)
    by_orbit = _tcgr_by_orbit(g, w, orbit)
    if (direct is None) != by_orbit:
        raise DefectError('tcgr-variants', f'{g!r} at {w}: direct={direct}, orbit={by_orbit}')
    if direct is not None:
        return Verdict(False, direct)
    return Verdict(True, branch=tcgr_branch(g, w, orbit))


def single_bit_change(g, w, orbit=None):
    '''Consecutive iterates of w differ in at most one coordinate.'''
    if orbit is None:
        orbit = orbit_summary(g, w)
    span = orbit.transient_len + orbit.period
    return all(hamming(orbit.at(j), orbit.at(j + 1)) <= 1 for j in range(span))


@dataclass
class PropertyReport:
    state: State
    stable: bool
    excited: Tuple[int, ...]
    reach_size: int
    stable_reachable: Tuple[State, ...]
    limit: Optional[State]
    verdicts: Dict[str, Verdict]
    single_bit_change: bool
    delay_sensitivity_causes: Tuple[str, ...]
    hazard_causes: Tuple[str, ...]
    hazardous_transition: Optional[Tuple[State, State]]
    orbit: OrbitSummary
    tcgr_branch: Optional[str]
    convergent: bool = True
    monotonous: bool = True
    trivial_limit: Optional[State] = None

    def holds(self, name):
        if name == 'single_bit_change':
            return self.single_bit_change
        return self.verdicts[name].holds


def lattice_violations(report):
    '''(law, details) for every implication the report breaks.'''
    h = report.holds
    orbit = report.orbit
    # g(w) = w or g(g(w)) = g(w): the orbit is stable from the first iterate on
    short_orbit = orbit.stabilizes and orbit.transient_len <= 1

    laws = [
        ('monotonous-implies-convergent',
         not report.monotonous or report.convergent),
        ('hazard-free-implies-delay-insensitive',
         not h('hazard_free') or h('delay_insensitive')),
        ('trivial-implies-hazard-free',
         not h('trivially_hazard_free') or h('hazard_free')),
        ('semi-modular-implies-weak',
         not h('semi_modular') or h('weakly_semi_modular')),
        ('trivial-implies-semi-modular',
         not h('trivially_hazard_free') or h('semi_modular')),
        ('hazard-free-implies-weak',
         not h('hazard_free') or h('weakly_semi_modular')),
        ('tcgr-implies-semi-modular',
         not h('tcgr') or h('semi_modular')),
        ('tcgr-stabilizing-implies-delay-insensitive',
         not (h('tcgr') and orbit.stabilizes)
         or (h('delay_insensitive') and report.limit == orbit.at(orbit.transient_len))),
        ('tcgr-short-orbit-iff-trivial',
         (h('tcgr') and short_orbit) == h('trivially_hazard_free')),
        ('limit-is-unique-stable',
         not h('delay_insensitive')
         or (len(report.stable_reachable) == 1 and report.limit == report.stable_reachable[0])),
        ('causes-iff-sensitive',
         bool(report.delay_sensitivity_causes) != h('delay_insensitive')),
        ('causes-iff-hazard',
         bool(report.hazard_causes) != h('hazard_free')),
        ('tcgr-branch',
         not h('tcgr') or report.tcgr_branch == tcgr_branch_of(report)),
    ]
    return [(law, f'at {report.state}') for law, ok in laws if not ok]


def tcgr_branch_of(report):
    orbit = report.orbit
    if orbit.transient_len == 0 and orbit.period == 1:
        return 'b1'
    return 'b2' if orbit.stabilizes else 'b3'


def classify(g, w, strict=True, wsm_coordinates=None):
    '''Decide every property of g at w and check the implications between them.'''
    graph = reach_graph(g, w)
    orbit = orbit_summary(g, w)

    convergent = all_paths_convergent(g, w, graph)
    monotonous = all_paths_monotonous(g, w, graph)
    di = delay_insensitive(g, w, graph, convergent)
    hf = hazard_free(g, w, graph, monotonous)
    verdicts = dict(
        delay_insensitive=di,
        hazard_free=hf,
        trivially_hazard_free=trivially_hazard_free(g, w, graph),
        semi_modular=semi_modular(g, w, graph),
        weakly_semi_modular=weakly_semi_modular(g, w, graph, wsm_coordinates),
        tcgr=tcgr(g, w, graph, orbit),
    )

    hazardous = None
    if di.holds and not hf.holds:
        hazardous = (w, di.limit)

    report = PropertyReport(
        state=w,
        stable=g.image(w.value) == w.value,
        excited=mask_coordinates(g.n, g.excitation(w.value)),
        reach_size=len(graph),
        stable_reachable=stable_reach(g, w, graph),
        limit=di.limit,
        verdicts=verdicts,
        single_bit_change=single_bit_change(g, w, orbit),
        delay_sensitivity_causes=di.causes,
        hazard_causes=hf.causes,
        hazardous_transition=hazardous,
        orbit=orbit,
        tcgr_branch=verdicts['tcgr'].branch,
        convergent=convergent.holds,
        monotonous=monotonous.holds,
        trivial_limit=verdicts['trivially_hazard_free'].limit,
    )

    if strict:
        violations = lattice_violations(report)
        if violations:
            law, details = violations[0]
            raise DefectError(law, f'{g!r} {details}')
    return report
