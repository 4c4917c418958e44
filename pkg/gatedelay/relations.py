# The MIT License
# Copyright 2019 Innodata Labs
#
# SCC decomposition follows the non-recursive Tarjan of
# https://github.com/bwesterb/py-tarjan
#
'''
The unbounded gate delay relation mu, reachability, and fair cycles.

u mu u' holds when u' is u with some subset of its excited coordinates
switched. Identity steps are implied and never stored: every graph here
holds proper edges only.
'''
import functools
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Tuple
from gatedelay.model import State, MAX_GRAPH_WIDTH, ModelError, coordinate_mask, \
    mask_coordinates

log = logging.getLogger(__name__)


def flip_sets(n, mask):
    '''Subsets of mask, smallest first, then by coordinates ascending.'''
    coords = mask_coordinates(n, mask)
    for k in range(len(coords) + 1):
        for combo in itertools.combinations(coords, k):
            yield coordinate_mask(n, combo)


def moves(g, x, allowed=-1):
    '''Proper mu-successors of the integer-coded state x, in flip-set order.

    Only coordinates in the allowed mask may switch.
    '''
    e = g.excitation(x) & allowed
    if e == 0:
        return ()
    return tuple(x ^ s for s in flip_sets(g.n, e) if s)


def mu_successors(g, w):
    '''All w' with w mu w', w itself included, ascending.'''
    g.check(w)
    return tuple(State(y, g.n) for y in sorted((w.value,) + moves(g, w.value)))


def is_mu_step(g, w, w2):
    g.check(w)
    g.check(w2)
    return (w.value ^ w2.value) & ~g.excitation(w.value) == 0


def _closure(g, x, allowed=-1, avoid=None):
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for z in moves(g, y, allowed):
            if z not in seen and z != avoid:
                seen.add(z)
                queue.append(z)
    return seen


def reach(g, w):
    '''M(w): every state reachable from w, w included.'''
    g.check(w)
    return frozenset(State(x, g.n) for x in _closure(g, w.value))


def reach_before(g, w, target):
    '''States reachable from w along walks that never visit target.'''
    g.check(w)
    g.check(target)
    if w == target:
        return frozenset()
    return frozenset(State(x, g.n) for x in _closure(g, w.value, avoid=target.value))


@functools.lru_cache(maxsize=64)
def _predecessors(g):
    preds = {}
    for x in range(1 << g.n):
        for y in moves(g, x):
            preds.setdefault(y, []).append(x)
    log.debug('predecessor map of %r: %d proper edges', g,
              sum(len(p) for p in preds.values()))
    return preds


def coreach(g, target):
    '''M^-1(target): every state from which target is reachable.'''
    g.check(target)
    preds = _predecessors(g)
    seen = {target.value}
    queue = deque([target.value])
    while queue:
        y = queue.popleft()
        for x in preds.get(y, ()):
            if x not in seen:
                seen.add(x)
                queue.append(x)
    return frozenset(State(x, g.n) for x in seen)


@dataclass(frozen=True, eq=False)
class ReachGraph:
    '''M(root) with its proper mu-edges; successors are sorted.'''
    root: State
    nodes: frozenset
    successors: Mapping[State, Tuple[State, ...]]

    @property
    def proper_edges(self):
        return frozenset((u, v) for u, vs in self.successors.items() for v in vs)

    def sorted_nodes(self):
        return sorted(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, state):
        return state in self.nodes


def _graph(g, root, allowed=-1):
    if g.n > MAX_GRAPH_WIDTH:
        log.warning('building a reach graph at width %d (practical cap is %d)',
                    g.n, MAX_GRAPH_WIDTH)
    codes = _closure(g, root.value, allowed)
    successors = {
        State(x, g.n): tuple(State(y, g.n) for y in sorted(moves(g, x, allowed)))
        for x in sorted(codes)
    }
    return ReachGraph(root, frozenset(successors), MappingProxyType(successors))


def reach_graph(g, w):
    g.check(w)
    graph = _graph(g, w)
    log.debug('reach graph of %s: %d nodes, %d edges', w, len(graph), len(graph.proper_edges))
    return graph


def frozen_reach(g, u, i, b):
    '''Reach graph from u using only moves that leave coordinate i alone.'''
    g.check(u)
    if u.coordinate(i) != b:
        raise ModelError(f'coordinate {i} of {u} is not {b}')
    return _graph(g, u, allowed=~coordinate_mask(g.n, (i,)))


@dataclass(frozen=True)
class Scc:
    states: Tuple[State, ...]
    trivial: bool


def _tarjan(graph):
    '''Strongly connected components of the proper edges (non-recursive Tarjan).'''
    index = {}
    lowlink = {}
    stack = []
    on_stack = set()
    result = []

    for root in graph.sorted_nodes():
        if root in index:
            continue
        index[root] = lowlink[root] = len(index)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(graph.successors[root]))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = len(index)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(graph.successors[w])))
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    lowlink[parent] = min(lowlink[parent], lowlink[v])
                if lowlink[v] == index[v]:
                    scc = []
                    w = None
                    while w != v:
                        w = stack.pop()
                        on_stack.discard(w)
                        scc.append(w)
                    result.append(tuple(sorted(scc)))
    return result


def proper_sccs(graph):
    '''SCCs ordered by their least state; singletons are trivial (no self-loops).'''
    sccs = [Scc(states, len(states) < 2) for states in _tarjan(graph)]
    sccs.sort(key=lambda scc: scc.states[0])
    return sccs


@dataclass(frozen=True)
class SccWitness:
    '''A fair SCC; targets maps each (coordinate, value) to a member u
    where coordinate does not hold value while excited.'''
    states: Tuple[State, ...]
    targets: Tuple[Tuple[Tuple[int, int], State], ...]


def fairness_targets(g, states):
    '''The member meeting each (coordinate, value) fairness target, or None if one is missed.'''
    targets = []
    for i in range(1, g.n + 1):
        bit = 1 << (g.n - i)
        for a in (0, 1):
            for u in states:
                if u.coordinate(i) != a or not g.excitation(u.value) & bit:
                    targets.append(((i, a), u))
                    break
            else:
                return None
    return tuple(targets)


def accepting_scc(g, graph, freeze=None):
    '''A non-trivial SCC through which a fair path can run forever, or None.'''
    if freeze is not None:
        i, b = freeze
        for u in graph.nodes:
            if u.coordinate(i) != b:
                raise ModelError(f'graph is not frozen at coordinate {i} = {b}: {u}')
    for scc in proper_sccs(graph):
        if scc.trivial:
            continue
        targets = fairness_targets(g, scc.states)
        if targets is not None:
            return SccWitness(scc.states, targets)
    return None


def shortest_walk(graph, source, goal):
    '''Shortest walk along proper edges from source to the first state satisfying goal.'''
    parent = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if goal(u):
            walk = []
            while u is not None:
                walk.append(u)
                u = parent[u]
            return tuple(reversed(walk))
        for v in graph.successors[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
    return None
