# The MIT License
# Copyright 2019 Innodata Labs
#
'''
Brute-force path semantics, used to referee the graph-based verdicts.

An infinite fair path is represented by a lasso: a finite prefix followed by
either a stable parking state (cycle of length one) or a proper cycle
repeated forever. Nothing here calls the graph algorithms of
gatedelay.relations or the deciders of gatedelay.properties; successors
are found by testing every candidate state, fair supports by testing every
subset of the reach set, and path properties by breadth-first search over
walks tracked by a small monitor.
'''
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Tuple
import numpy as np
from gatedelay.model import State, VectorField, orbit_summary, mask_coordinates
from gatedelay.relations import SccWitness
from gatedelay.properties import Verdict, PropertyReport, MonotonyWitness, \
    SensitivityWitness, HazardWitness, ImagePair, DisablingWitness, EscapeWitness, \
    TargetChange, OSCILLATION, MULTIPLE_LIMITS, NON_MONOTONOUS

log = logging.getLogger(__name__)

ORACLE_LIMITS = dict(
    max_width=4,
    max_nodes=1000000,
)


class ResourceLimitError(RuntimeError):
    pass


class MalformedLassoError(ValueError):
    '''A walk or lasso breaks the mu-relation or its own shape.'''


@dataclass(frozen=True)
class Walk:
    states: Tuple[State, ...]

    def __len__(self):
        return len(self.states)

    def __getitem__(self, k):
        return self.states[k]

    def __iter__(self):
        return iter(self.states)

    @property
    def last(self):
        return self.states[-1]

    def __str__(self):
        return ','.join(str(s) for s in self.states)


@dataclass(frozen=True)
class Lasso:
    '''prefix runs from the origin to cycle[0] inclusive; the cycle's return to cycle[0] is implicit.'''
    prefix: Walk
    cycle: Tuple[State, ...]

    @property
    def parking(self):
        return len(self.cycle) == 1

    @property
    def support(self):
        return frozenset(self.cycle)


@dataclass(frozen=True)
class MilestoneDecomposition:
    '''Walk indices k_m with walk[k_m] = g^m(w), and the walk's states before and from k_J.'''
    indices: Tuple[int, ...]
    transient: FrozenSet[State]
    permanent: FrozenSet[State]
    transient_len: int
    period: int


def _limits(limits):
    merged = dict(ORACLE_LIMITS)
    if limits:
        unknown = set(limits) - set(ORACLE_LIMITS)
        if unknown:
            raise ValueError(f'unknown oracle limits: {sorted(unknown)}')
        merged.update(limits)
    return merged


def _guard(g, limits):
    if g.n > limits['max_width']:
        raise ResourceLimitError(
            f'oracle handles width up to {limits["max_width"]}, field has width {g.n}')


def _is_step(g, x, y):
    return (x ^ y) & ~g.excitation(x) == 0


def _explore(g, w):
    '''Proper successors of every state reachable from w, found by trying every state.'''
    succ = {}
    todo = [w]
    while todo:
        x = todo.pop()
        if x in succ:
            continue
        succ[x] = tuple(y for y in range(1 << g.n) if y != x and _is_step(g, x, y))
        todo.extend(y for y in succ[x] if y not in succ)
    return succ


def _states(codes, n):
    return tuple(State(x, n) for x in codes)


def _trace(parent, node):
    path = []
    while node is not None:
        path.append(node)
        node = parent[node]
    return tuple(reversed(path))


def _fairness_targets(g, support):
    targets = []
    for i in range(1, g.n + 1):
        bit = 1 << (g.n - i)
        for a in (0, 1):
            met = [x for x in sorted(support)
                   if bool(x & bit) != a or not g.excitation(x) & bit]
            if not met:
                return None
            targets.append(((i, a), State(met[0], g.n)))
    return tuple(targets)


def _closure_within(start, edges, subset):
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in edges.get(x, ()):
            if y in subset and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _supports(g, succ):
    '''Every subset of the reach set that is strongly connected by proper edges and fair.'''
    pred = {}
    for x, ys in succ.items():
        for y in ys:
            pred.setdefault(y, []).append(x)
    found = []
    for k in range(2, len(succ) + 1):
        for combo in itertools.combinations(sorted(succ), k):
            subset = frozenset(combo)
            start = combo[0]
            if len(_closure_within(start, succ, subset)) != k:
                continue
            if len(_closure_within(start, pred, subset)) != k:
                continue
            targets = _fairness_targets(g, subset)
            if targets is not None:
                found.append((subset, targets))
    log.debug('%d fair supports among %d reachable states', len(found), len(succ))
    return found


def fair_supports(g, w, limits=None):
    '''Strongly connected fair subsets of M(w), smallest first.'''
    limits = _limits(limits)
    _guard(g, limits)
    g.check(w)
    return tuple(
        SccWitness(_states(sorted(s), g.n), targets)
        for s, targets in _supports(g, _explore(g, w.value))
    )


def full_update_walk(g, w, steps):
    '''w, g(w), ..., g^steps(w): every excited coordinate switches at the next step.'''
    g.check(w)
    x = w.value
    states = [x]
    for _ in range(steps):
        x = g.image(x)
        states.append(x)
    return Walk(_states(states, g.n))


def _check_walk(g, states):
    if not states:
        raise MalformedLassoError('empty walk')
    for s in states:
        g.check(s)
    for a, b in zip(states, states[1:]):
        if not _is_step(g, a.value, b.value):
            raise MalformedLassoError(f'{a} -> {b} is not a mu-step')


def is_fair_lasso(g, lasso):
    _check_walk(g, lasso.prefix.states)
    if not lasso.cycle:
        raise MalformedLassoError('empty cycle')
    if lasso.prefix.last != lasso.cycle[0]:
        raise MalformedLassoError(f'prefix ends at {lasso.prefix.last}, cycle starts at {lasso.cycle[0]}')
    if lasso.parking:
        x = lasso.cycle[0]
        if g.image(x.value) != x.value:
            raise MalformedLassoError(f'parking state {x} is not stable')
        return True
    closed = lasso.cycle + lasso.cycle[:1]
    for a, b in zip(closed, closed[1:]):
        g.check(b)
        if a == b or not _is_step(g, a.value, b.value):
            raise MalformedLassoError(f'{a} -> {b} is not a proper mu-step')
    return _fairness_targets(g, {x.value for x in lasso.cycle}) is not None


def _path_within(succ, subset, a, b):
    parent = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            return _trace(parent, x)
        for y in succ[x]:
            if y in subset and y not in parent:
                parent[y] = x
                queue.append(y)
    raise AssertionError(f'{b} unreachable from {a} inside a strongly connected support')


def _covering_cycle(succ, support, entry):
    '''Closed walk from entry through every proper edge inside support, without the final return.'''
    walk = [entry]
    covered = set()
    for x in sorted(support):
        for y in succ[x]:
            if y in support and (x, y) not in covered:
                path = _path_within(succ, support, walk[-1], x) + (y,)
                covered.update(zip(path, path[1:]))
                walk.extend(path[1:])
    walk.extend(_path_within(succ, support, walk[-1], entry)[1:])
    return tuple(walk[:-1])


def _tree(succ, w):
    parent = {w: None}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for y in succ[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    return parent


def _nearest(succ, start, goal):
    parent = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x in goal:
            return _trace(parent, x)
        for y in succ[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    return None


def _lasso_key(lasso):
    return (len(lasso.prefix), [s.value for s in lasso.prefix],
            len(lasso.cycle), [s.value for s in lasso.cycle])


def enumerate_lassos(g, w, cycle_bound=None, limits=None):
    '''Fair lassos from w that together visit every reachable state and every proper edge.

    A terminal is a stable state of M(w) (parked on) or a state of a fair support
    of at most cycle_bound states (circled by a cycle through every edge of the
    support). Each stable state and each support, entered at its least member,
    gets one lasso on a shortest prefix. Each proper edge (u, u') gets the shortest
    walk to u, the edge, and a shortest walk from u' to the nearest terminal.
    With a cycle_bound, edges from which no terminal is reachable are left out.
    '''
    limits = _limits(limits)
    _guard(g, limits)
    g.check(w)
    n = g.n
    succ = _explore(g, w.value)
    if cycle_bound is None:
        cycle_bound = len(succ)
    supports = [s for s, _ in _supports(g, succ) if len(s) <= cycle_bound]
    stables = [x for x in sorted(succ) if g.image(x) == x]
    terminals = set(stables).union(*supports)
    parent = _tree(succ, w.value)
    cycles = {}

    def cycle_at(x):
        if g.image(x) == x:
            return (x,)
        if x not in cycles:
            support = next(s for s in supports if x in s)
            cycles[x] = _covering_cycle(succ, support, x)
        return cycles[x]

    def candidates():
        for x in stables:
            yield _trace(parent, x), (x,)
        for support in supports:
            entry = min(support)
            yield _trace(parent, entry), _covering_cycle(succ, support, entry)
        for u in sorted(succ):
            for v in succ[u]:
                suffix = _nearest(succ, v, terminals)
                if suffix is not None:
                    yield _trace(parent, u) + suffix, cycle_at(suffix[-1])

    lassos = set()
    nodes = 0
    for walk, cycle in candidates():
        lasso = Lasso(Walk(_states(walk, n)), _states(cycle, n))
        if lasso in lassos:
            continue
        lassos.add(lasso)
        nodes += len(walk) + len(cycle)
        if nodes > limits['max_nodes']:
            raise ResourceLimitError(f'lassos from {w} exceed {limits["max_nodes"]} nodes')

    log.debug('%d fair lassos from %s (%d nodes)', len(lassos), w, nodes)
    return sorted(lassos, key=_lasso_key)


def lasso_behavior(lasso, steps):
    '''The first steps + 1 states of the infinite path the lasso stands for.'''
    states = list(lasso.prefix.states)
    cycle = lasso.cycle
    k = 1
    while len(states) <= steps:
        states.append(cycle[k % len(cycle)])
        k += 1
    return Walk(tuple(states[:steps + 1]))


def _monotony_witness(g, succ, w):
    # on a walk that is monotonous so far the switched coordinates are x ^ w
    parent = {w: None}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        switched = x ^ w
        for y in succ[x]:
            again = (x ^ y) & switched
            if again:
                i = mask_coordinates(g.n, again)[0]
                walk = _states(_trace(parent, x) + (y,), g.n)
                return MonotonyWitness(i, State(w, g.n).coordinate(i), walk)
            if y not in parent:
                parent[y] = x
                queue.append(y)
    return None


def _disabling_step(g, succ):
    for x in sorted(succ):
        e = g.excitation(x)
        for y in succ[x]:
            for i in mask_coordinates(g.n, e):
                bit = 1 << (g.n - i)
                if not (x ^ y) & bit and not g.excitation(y) & bit:
                    return DisablingWitness(State(x, g.n), State(y, g.n), i)
    return None


def _escape(g, succ, supports, coordinates):
    '''A reachable u with i excited and a fair continuation that never switches i.'''
    n = g.n
    for x in sorted(succ):
        for i in mask_coordinates(n, g.excitation(x)):
            if i not in coordinates:
                continue
            bit = 1 << (n - i)
            b = x & bit
            frozen = [(s, t) for s, t in supports if all((z & bit) == b for z in s)]
            seen = {x}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                if g.image(y) == y:
                    return EscapeWitness(State(x, n), i, stable=State(y, n))
                for s, targets in frozen:
                    if y in s:
                        return EscapeWitness(State(x, n), i,
                                             scc=SccWitness(_states(sorted(s), n), targets))
                for z in succ[y]:
                    if not (y ^ z) & bit and z not in seen:
                        seen.add(z)
                        queue.append(z)
    return None


def _target_change(g, succ, w, orbit):
    '''Walk the milestones: at (x, j) the target g(x) must be g^(j+1)(w).'''
    J, P = orbit.transient_len, orbit.period

    def wrap(j):
        return j if j < J + P else J + (j - J) % P

    start = (w, 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        x, j = queue.popleft()
        target = orbit.at(j + 1).value
        for y in succ[x]:
            if y == target:
                node = (y, wrap(j + 1))
            elif g.image(y) != target:
                return TargetChange(State(x, g.n), State(y, g.n))
            else:
                node = (y, j)
            if node not in parent:
                parent[node] = (x, j)
                queue.append(node)
    return None


def oracle_classify(g, w, wsm_coordinates=None, limits=None):
    '''Every verdict of classify, recomputed from path semantics.

    Convergence and limits come from the lasso catalogue: the network converges
    when no lasso ends in a proper cycle, and the reachable stable states are
    the parking states.
    '''
    limits = _limits(limits)
    _guard(g, limits)
    g.check(w)
    n = g.n
    lassos = enumerate_lassos(g, w, limits=limits)
    visited = {x.value for lasso in lassos for x in lasso.prefix.states + lasso.cycle}
    stables = tuple(sorted({lasso.cycle[0] for lasso in lassos if lasso.parking}))
    cycles = {frozenset(x.value for x in lasso.cycle) for lasso in lassos if not lasso.parking}
    supports = [(s, _fairness_targets(g, s)) for s in sorted(cycles, key=lambda s: (len(s), sorted(s)))]
    succ = _explore(g, w.value)
    orbit = orbit_summary(g, w)
    if wsm_coordinates is None:
        wsm_coordinates = range(1, n + 1)

    oscillation = None
    if supports:
        oscillation = SccWitness(_states(sorted(supports[0][0]), n), supports[0][1])
    monotony = _monotony_witness(g, succ, w.value)

    causes = []
    if oscillation is not None:
        causes.append(OSCILLATION)
    if len(stables) > 1:
        causes.append(MULTIPLE_LIMITS)
    if causes:
        di = Verdict(False, SensitivityWitness(oscillation, stables[:2]), causes=tuple(causes))
    else:
        di = Verdict(True, limit=stables[0])

    causes = []
    if monotony is not None:
        causes.append(NON_MONOTONOUS)
    if len(stables) > 1:
        causes.append(MULTIPLE_LIMITS)
    if causes:
        hf = Verdict(False, HazardWitness(monotony, stables[:2]), causes=tuple(causes))
    else:
        hf = Verdict(True, limit=stables[0])

    odd = [x for x in sorted(visited) if g.image(x) != g.image(w.value)]
    if odd:
        thf = Verdict(False, ImagePair(w, State(odd[0], n)))
    else:
        thf = Verdict(True, limit=State(g.image(w.value), n))

    disabling = _disabling_step(g, succ)
    escape = _escape(g, succ, supports, frozenset(wsm_coordinates))
    change = _target_change(g, succ, w.value, orbit)
    if change is not None:
        tcgr = Verdict(False, change)
    elif g.image(w.value) == w.value:
        tcgr = Verdict(True, branch='b1')
    else:
        tcgr = Verdict(True, branch='b2' if orbit.stabilizes else 'b3')

    iterates = full_update_walk(g, w, 1 << n)
    single_bit = all(bin(a.value ^ b.value).count('1') <= 1
                     for a, b in zip(iterates, iterates.states[1:]))

    verdicts = dict(
        delay_insensitive=di,
        hazard_free=hf,
        trivially_hazard_free=thf,
        semi_modular=Verdict(disabling is None, disabling),
        weakly_semi_modular=Verdict(escape is None, escape),
        tcgr=tcgr,
    )
    return PropertyReport(
        state=w,
        stable=g.image(w.value) == w.value,
        excited=mask_coordinates(n, g.excitation(w.value)),
        reach_size=len(visited),
        stable_reachable=stables,
        limit=di.limit,
        verdicts=verdicts,
        single_bit_change=single_bit,
        delay_sensitivity_causes=di.causes,
        hazard_causes=hf.causes,
        hazardous_transition=(w, di.limit) if di.holds and not hf.holds else None,
        orbit=orbit,
        tcgr_branch=tcgr.branch,
        convergent=oscillation is None,
        monotonous=monotony is None,
        trivial_limit=thf.limit,
    )


def _switches(states, i):
    bits = [s.coordinate(i) for s in states]
    return sum(a != b for a, b in zip(bits, bits[1:]))


def milestone_decomposition(g, walk):
    '''Locate the iterates g^m(w) along a walk from w and check the segments between them.

    Between k_m and k_(m+1) the target g(walk[k]) must be g^(m+1)(w) and every
    coordinate must switch at most once. The scan stops at the first milestone
    that is a fixed point of g.
    '''
    _check_walk(g, walk.states)
    w = walk[0]
    succ = _explore(g, w.value)
    orbit = orbit_summary(g, w)
    change = _target_change(g, succ, w.value, orbit)
    if change is not None:
        return Verdict.not_applicable(f'tcgr fails at {w}: {change.u} -> {change.u2}')

    indices = [0]
    m = 0
    while True:
        here = orbit.at(m)
        target = orbit.at(m + 1)
        if here == target:
            break
        k0 = indices[-1]
        k1 = next((k for k in range(k0 + 1, len(walk)) if walk[k] == target), None)
        end = len(walk) if k1 is None else k1
        for k in range(k0, end):
            if g.image(walk[k].value) != target.value:
                return Verdict(False, (k, walk[k], target))
        segment = walk.states[k0:end + 1]
        for i in range(1, g.n + 1):
            if _switches(segment, i) > 1:
                return Verdict(False, (k0, i))
        if k1 is None:
            break
        indices.append(k1)
        m += 1

    J, P = orbit.transient_len, orbit.period
    if len(indices) > J:
        cut = indices[J]
        transient, permanent = frozenset(walk.states[:cut]), frozenset(walk.states[cut:])
    else:
        transient, permanent = frozenset(walk.states), frozenset()
    return Verdict(True, MilestoneDecomposition(tuple(indices), transient, permanent, J, P))


def alignment_defects(walk, decomposition, span=None):
    '''Offsets m where walk[k_J + m] != walk[k_(J+P) + m].'''
    J, P = decomposition.transient_len, decomposition.period
    if len(decomposition.indices) <= J + P:
        return ()
    a, b = decomposition.indices[J], decomposition.indices[J + P]
    if span is None:
        span = len(walk) - b
    return tuple(m for m in range(min(span, len(walk) - b)) if walk[a + m] != walk[b + m])


def constant_field_containment(g, w, lassos=None, limits=None):
    '''When g is constant on M(w), every fair lasso of g from w is a fair lasso of that constant field.'''
    g.check(w)
    succ = _explore(g, w.value)
    images = {g.image(x) for x in succ}
    if len(images) != 1:
        return Verdict.not_applicable(f'g is not constant on the reach set of {w}')
    limit = State(images.pop(), g.n)
    constant = VectorField(g.n, np.full(1 << g.n, limit.value))
    if lassos is None:
        lassos = enumerate_lassos(g, w, limits=limits)
    for lasso in lassos:
        try:
            fair = is_fair_lasso(constant, lasso)
        except MalformedLassoError:
            fair = False
        if not fair:
            return Verdict(False, lasso)
    return Verdict(True, len(lassos), limit=limit)
