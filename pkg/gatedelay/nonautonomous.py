# The MIT License
# Copyright 2019 Innodata Labs
#
'''
Parameterized fields f(w, v) closed over a target input.

Closing f over the input v~ gives the autonomous field
f^v~(w, v) = (f(w, v), v~) of width n + m; every autonomous analysis then
runs on it unchanged. The fundamental mode adds the stability hypothesis
f(w, v) = w: the input only changes while the state part is at rest.
'''
import logging
from dataclasses import dataclass
from typing import Dict
from gatedelay.model import State, TotalState, VectorField, ParamVectorField, WidthError, \
    mask_coordinates
from gatedelay.relations import reach, reach_graph
from gatedelay.properties import PropertyReport, Verdict, PROPERTY_NAMES, classify

log = logging.getLogger(__name__)

FUNDAMENTAL_MODE_PROPERTIES = PROPERTY_NAMES + ('single_bit_change',)


@dataclass(frozen=True, eq=False)
class ClosedField:
    base: ParamVectorField
    target: State
    view: VectorField

    @property
    def n(self):
        return self.base.n

    @property
    def m(self):
        return self.base.m

    def total(self, state):
        return TotalState.split(state, self.n, self.m)


def close_field(f, target):
    if target.n != f.m:
        raise WidthError(f'target input {target} has width {target.n}, field has {f.m} inputs')
    # the last m coordinates of the view are the constant target
    view = VectorField(f.n + f.m, (f.table << f.m) | target.value)
    return ClosedField(f, target, view)


def _check_total(f, z):
    if z.w.n != f.n or z.v.n != f.m:
        raise WidthError(f'total state {z} does not match widths ({f.n}, {f.m})')


def state_stable(f, z):
    '''f(w, v) = w: the state part of z is at rest under its current input.'''
    _check_total(f, z)
    return f(z.w, z.v) == z.w


@dataclass
class ModeQualifiedReport:
    report: PropertyReport
    closed: ClosedField
    z: TotalState
    state_stable: bool
    fundamental_mode: Dict[str, bool]


def classify_param(f, z, target, strict=True):
    '''Classify the closed field at z and qualify every verdict with the fundamental mode.

    Weak semi-modularity only quantifies the n state coordinates.
    '''
    _check_total(f, z)
    closed = close_field(f, target)
    report = classify(closed.view, z.joined(), strict=strict,
                      wsm_coordinates=range(1, f.n + 1))
    return qualify(f, z, closed, report)


def qualify(f, z, closed, report):
    '''Attach the fundamental-mode flags to a report on the closed field at z.'''
    stable = state_stable(f, z)
    fundamental = {
        name: report.holds(name) and stable
        for name in FUNDAMENTAL_MODE_PROPERTIES
    }
    return ModeQualifiedReport(report, closed, z, stable, fundamental)


def _input_mask(f):
    return (1 << f.m) - 1


def fundamental_first_moves(f, z, target):
    '''From a state-stable z every proper first move switches input coordinates only.'''
    if not state_stable(f, z):
        return Verdict.not_applicable(f'f({z}) != {z.w}: not stable under its input')
    closed = close_field(f, target)
    origin = z.joined()
    graph = reach_graph(closed.view, origin)
    for u2 in graph.successors[origin]:
        if (u2.value ^ origin.value) & ~_input_mask(f):
            return Verdict(False, (origin, u2))
    return Verdict(True, graph.successors[origin])


def autonomous_consistency(f, z):
    '''With v~ = v the closed field moves exactly like the section f(., v) with v held.'''
    _check_total(f, z)
    closed = close_field(f, z.v)
    lhs = reach(closed.view, z.joined())
    rhs = frozenset(TotalState(w2, z.v).joined() for w2 in reach(f.section(z.v), z.w))
    if lhs != rhs:
        return Verdict(False, tuple(sorted(lhs ^ rhs)))
    return Verdict(True)


def trivhf_fm_checks(f, z, target, qualified=None):
    '''Trivially hazard-free in the fundamental mode: the state part never moves.'''
    if qualified is None:
        qualified = classify_param(f, z, target)
    if not qualified.fundamental_mode['trivially_hazard_free']:
        return Verdict.not_applicable(f'not trivially hazard-free in the fundamental mode at {z}')
    closed = qualified.closed
    limit = closed.total(qualified.report.trivial_limit)
    if limit.w != z.w:
        return Verdict(False, limit)
    graph = reach_graph(closed.view, z.joined())
    for u, u2 in sorted(graph.proper_edges):
        if not (u.value ^ u2.value) & _input_mask(f):
            return Verdict(False, (u, u2))
    return Verdict(True)


def input_coordinates(closed):
    '''1-based coordinates of the input part of the view.'''
    return mask_coordinates(closed.view.n, _input_mask(closed.base))
