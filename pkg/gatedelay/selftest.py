# The MIT License
# Copyright 2019 Innodata Labs
#
'''
Executable suites over many (field, state) cases: the implication lattice,
the agreement of every two-sided characterization, agreement with the path
oracle, the fundamental-mode consequences, and the search for fields that
separate the properties.
'''
import logging
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any, List, Optional
import numpy as np
from gatedelay.model import State, DefectError, ModelError, MAX_GRAPH_WIDTH
from gatedelay.properties import classify, lattice_violations
from gatedelay.nonautonomous import FUNDAMENTAL_MODE_PROPERTIES, close_field, classify_param, \
    state_stable, autonomous_consistency, fundamental_first_moves, trivhf_fm_checks
from gatedelay.oracle import ORACLE_LIMITS, oracle_classify
from gatedelay.formats import model_document, report_to_dict
from gatedelay.compare import compare, agreement_view
from gatedelay import data

log = logging.getLogger(__name__)


@dataclass
class Violation:
    field: Any
    state: State
    law: str
    details: str = ''


@dataclass
class SuiteResult:
    name: str
    cases_run: int = 0
    violations: List[Violation] = field(default_factory=list)
    seed: Optional[int] = None
    elapsed: float = 0.

    @property
    def passed(self):
        return not self.violations

    def summary(self):
        return f'{self.name}: {self.cases_run} cases, {len(self.violations)} violations'


def suite_to_dict(result):
    return OrderedDict([
        ('name', result.name),
        ('cases_run', result.cases_run),
        ('violations', [
            OrderedDict([
                ('field', model_document(v.field)),
                ('state', str(v.state)),
                ('law', v.law),
                ('details', v.details),
            ]) for v in result.violations
        ]),
        ('seed', result.seed),
        ('elapsed', round(result.elapsed, 3)),
    ])


def _check_case(g, w, result, oracle=False):
    result.cases_run += 1
    try:
        report = classify(g, w, strict=False)
    except DefectError as e:
        result.violations.append(Violation(g, w, e.law, e.details))
        return None
    for law, details in lattice_violations(report):
        result.violations.append(Violation(g, w, law, details))
    if oracle:
        mismatch = compare(agreement_view(report_to_dict(report)),
                           agreement_view(report_to_dict(oracle_classify(g, w))))
        if mismatch is not None:
            error, path = mismatch
            result.violations.append(Violation(g, w, 'oracle-agreement', f'{error} at {path}'))
    return report


def _run(result, cases, oracle=False):
    start = time.perf_counter()
    for g, w in cases:
        _check_case(g, w, result, oracle)
    result.elapsed = time.perf_counter() - start
    for v in result.violations[:10]:
        log.warning('%s at %s: %s %s', v.law, v.state, v.details, v.field)
    log.info('%s (%.2fs)', result.summary(), result.elapsed)
    return result


def exhaustive_lattice(n):
    '''Every field of width n (n = 1 or 2) at every state.'''
    if n not in (1, 2):
        raise ModelError(f'exhaustive lattice runs for n = 1 or 2, got {n}')
    return _run(SuiteResult(f'n={n}'), data.all_cases(n))


def randomized_suite(n, samples, seed, oracle=False):
    bound = ORACLE_LIMITS['max_width'] if oracle else MAX_GRAPH_WIDTH
    if not 1 <= n <= bound:
        raise ModelError(f'randomized suite runs for n in 1..{bound}, got {n}')
    name = f'n={n} random' + (' with oracle' if oracle else '')
    return _run(SuiteResult(name, seed=seed), data.random_cases(n, samples, seed), oracle)


def oracle_suite(n, samples=None, seed=0):
    '''Graph-based verdicts against the path oracle; every case for n <= 2 unless samples is given.'''
    if samples is None and n <= 2:
        return _run(SuiteResult(f'n={n} oracle'), data.all_cases(n), oracle=True)
    return randomized_suite(n, samples or 500, seed, oracle=True)


def nonautonomous_suite(n=2, m=1, samples=1000, seed=0):
    '''Closed-field consequences over random (f, z), each closed over every target input.'''
    result = SuiteResult(f'n={n} m={m} closed', seed=seed)
    start = time.perf_counter()
    input_mask = (1 << m) - 1
    for f, z, _ in data.random_param_cases(n, m, samples, seed):
        for t in range(1 << m):
            target = State(t, m)
            result.cases_run += 1
            origin = z.joined()
            view = close_field(f, target).view

            def fail(law, details=''):
                result.violations.append(Violation(view, origin, law, details))

            if not np.all((view.table & input_mask) == target.value):
                fail('inputs-constant', f'target {target}')
            if not np.array_equal(view.table >> m, f.table):
                fail('state-part-agrees')
            try:
                qualified = classify_param(f, z, target, strict=False)
            except DefectError as e:
                fail(e.law, e.details)
                continue
            for law, details in lattice_violations(qualified.report):
                fail(law, details)
            stable = state_stable(f, z)
            for name in FUNDAMENTAL_MODE_PROPERTIES:
                if qualified.fundamental_mode[name] != (qualified.report.holds(name) and stable):
                    fail('fundamental-mode-flag', name)
            if not autonomous_consistency(f, z).holds:
                fail('autonomous-consistency')
            if stable and not fundamental_first_moves(f, z, target).holds:
                fail('fundamental-first-moves')
            trivial = trivhf_fm_checks(f, z, target, qualified)
            if trivial.applicable and not trivial.holds:
                fail('trivially-hazard-free-fundamental-mode', str(trivial.witness))
    result.elapsed = time.perf_counter() - start
    log.info('%s (%.2fs)', result.summary(), result.elapsed)
    return result


SEPARATIONS = OrderedDict([
    ('delay_insensitive_not_hazard_free',
     lambda r: r.holds('delay_insensitive') and not r.holds('hazard_free')),
    ('hazard_free_not_semi_modular',
     lambda r: r.holds('hazard_free') and not r.holds('semi_modular')),
    ('weakly_semi_modular_not_semi_modular',
     lambda r: r.holds('weakly_semi_modular') and not r.holds('semi_modular')),
    ('tcgr_not_delay_insensitive',
     lambda r: r.holds('tcgr') and not r.holds('delay_insensitive')),
    ('tcgr_not_single_bit_change',
     lambda r: r.holds('tcgr') and not r.holds('single_bit_change')),
])


@dataclass
class Separation:
    name: str
    field: Any = None
    state: Optional[State] = None

    @property
    def found(self):
        return self.field is not None


def _search_cases(n_max, samples, seed):
    for n in (1, 2):
        if n <= n_max:
            yield from data.all_cases(n)
    if n_max >= 3:
        # increasing fields are monotonous everywhere, which hazard-freedom needs
        uniform = data.random_cases(3, samples, seed)
        increasing = data.random_increasing_cases(3, samples, seed + 1)
        for a, b in zip(uniform, increasing):
            yield a
            yield b


def separation_search(n_max=3, samples=20000, seed=0):
    '''The first case found, smallest width first, for each strict separation between properties.'''
    found = OrderedDict((name, Separation(name)) for name in SEPARATIONS)
    for g, w in _search_cases(n_max, samples, seed):
        missing = [name for name, s in found.items() if not s.found]
        if not missing:
            break
        report = classify(g, w)
        for name in missing:
            if SEPARATIONS[name](report):
                log.info('separation %s: %r at %s', name, g, w)
                found[name] = Separation(name, g, w)
    for s in found.values():
        if not s.found:
            log.warning('no case found for %s', s.name)
    return list(found.values())


def count_cases(n, predicate):
    '''Number of (field, state) cases of width n whose report satisfies predicate.'''
    return sum(1 for g, w in data.all_cases(n) if predicate(classify(g, w)))
