# The MIT License
# Copyright 2019 Innodata Labs
#
import json
import logging
import sys
from gatedelay.model import State, TotalState, ModelError, DefectError, orbit_summary
from gatedelay.relations import reach
from gatedelay.properties import classify, single_bit_change
from gatedelay.nonautonomous import close_field, classify_param, qualify
from gatedelay.oracle import ResourceLimitError, ORACLE_LIMITS, oracle_classify
from gatedelay.formats import load_model, emit_report, emit_text, emit_dot, report_to_dict, \
    serialize_model
from gatedelay.compare import compare, agreement_view
from gatedelay import selftest

log = logging.getLogger(__name__)


class Model:
    '''The field a command works on: the autonomous field, or the closed field when --param is given.'''

    def __init__(self, path, param):
        self.base = load_model(path)
        m = self.base.m
        if param is not None and m == 0:
            raise ModelError('--param given but the model has no inputs (m = 0)')
        if param is None and m > 0:
            raise ModelError(f'the model has {m} inputs: a target input --param is required')
        if m == 0:
            self.closed = None
            self.view = self.base.as_vector_field()
        else:
            self.closed = close_field(self.base, State.parse(param, m))
            self.view = self.closed.view

    @property
    def drawable(self):
        return self.view if self.closed is None else self.closed

    def state(self, text):
        return State.parse(text, self.view.n)

    def classify(self, state):
        if self.closed is None:
            return classify(self.view, state)
        z = TotalState.split(state, self.base.n, self.base.m)
        return classify_param(self.base, z, self.closed.target)

    def oracle_classify(self, state):
        if self.closed is None:
            return oracle_classify(self.view, state)
        report = oracle_classify(self.view, state, wsm_coordinates=range(1, self.base.n + 1))
        z = TotalState.split(state, self.base.n, self.base.m)
        return qualify(self.base, z, self.closed, report)


def _emit(report, fmt):
    return emit_text(report) if fmt == 'text' else emit_report(report)


def cmd_analyze(args):
    model = Model(args.model, args.param)
    print(_emit(model.classify(model.state(args.state)), args.format), end='')
    return 0


def cmd_classify_all(args):
    model = Model(args.model, args.param)
    reports = [model.classify(w) for w in model.view.states()]
    if args.format == 'text':
        print('\n'.join(emit_text(r) for r in reports), end='')
    else:
        print(json.dumps([report_to_dict(r) for r in reports], indent=2))
    return 0


def cmd_graph(args):
    model = Model(args.model, args.param)
    root = None if args.state is None else model.state(args.state)
    if root is not None:
        log.info('%d states reachable from %s', len(reach(model.view, root)), root)
    text = emit_dot(model.drawable, root)
    if args.out == '-':
        print(text, end='')
    else:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
    return 0


def cmd_orbit(args):
    model = Model(args.model, args.param)
    w = model.state(args.state)
    orbit = orbit_summary(model.view, w)
    out = dict(
        state=str(w),
        transient_len=orbit.transient_len,
        period=orbit.period,
        milestones=[str(s) for s in orbit.milestones],
        single_bit_change=single_bit_change(model.view, w, orbit),
    )
    print(json.dumps(out, indent=2))
    return 0


def cmd_oracle_check(args):
    model = Model(args.model, args.param)
    w = model.state(args.state)
    graph = report_to_dict(model.classify(w))
    oracle = model.oracle_classify(w)
    mismatch = compare(agreement_view(graph), agreement_view(report_to_dict(oracle)))
    out = dict(
        state=str(w),
        agree=mismatch is None,
        mismatch=None if mismatch is None else dict(error=mismatch[0], path=mismatch[1]),
    )
    print(json.dumps(out, indent=2))
    return 0 if mismatch is None else 1


def cmd_selftest(args):
    results = [selftest.exhaustive_lattice(n) for n in range(1, args.n + 1)]
    if args.rand_n is not None:
        results.append(selftest.randomized_suite(args.rand_n, args.samples, args.seed,
                                                 oracle=args.oracle))
    elif args.oracle:
        results.extend(selftest.oracle_suite(n) for n in range(1, args.n + 1))
    if args.closed_samples:
        results.append(selftest.nonautonomous_suite(samples=args.closed_samples, seed=args.seed))

    separations = selftest.separation_search(seed=args.seed) if args.separations else []

    if args.format == 'json':
        out = dict(suites=[selftest.suite_to_dict(r) for r in results])
        if args.separations:
            out['separations'] = [
                dict(name=s.name,
                     state=None if s.state is None else str(s.state),
                     model=None if s.field is None else json.loads(serialize_model(s.field)))
                for s in separations
            ]
        print(json.dumps(out, indent=2))
    else:
        for r in results:
            print(r.summary())
        for s in separations:
            print(f'{s.name}: ' + (f'{s.state} in {s.field!r}' if s.found else 'not found'))

    failed = any(not r.passed for r in results) or any(not s.found for s in separations)
    return 1 if failed else 0


def build_parser():
    import argparse

    parser = argparse.ArgumentParser(
        prog='gatedelay',
        description='Analyzes asynchronous Boolean automata under the unbounded gate delay model')
    parser.add_argument('--verbose', action='store_true', default=False, help='Log progress to stderr, default %(default)s')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    def model_command(name, description, state_required):
        p = sub.add_parser(name, help=description)
        p.add_argument('model', help='Path to the JSON model document')
        p.add_argument('--state', required=state_required, help='State bits (w followed by v for models with inputs)')
        p.add_argument('--param', help='Target input bits; required when the model has inputs')
        return p

    p = model_command('analyze', 'Decides every property at one state', True)
    p.add_argument('--format', choices=('json', 'text'), default='json', help='Output format, default %(default)s')
    p.set_defaults(func=cmd_analyze)

    p = model_command('classify-all', 'Decides every property at every state', False)
    p.add_argument('--format', choices=('json', 'text'), default='json', help='Output format, default %(default)s')
    p.set_defaults(func=cmd_classify_all)

    p = model_command('graph', 'Writes the mu-graph as DOT', False)
    p.add_argument('--out', required=True, help='Output DOT file, "-" for stdout')
    p.set_defaults(func=cmd_graph)

    p = model_command('orbit', 'Prints the iterate orbit of a state', True)
    p.set_defaults(func=cmd_orbit)

    p = model_command('oracle-check', f'Compares the verdicts with the path oracle (n + m <= {ORACLE_LIMITS["max_width"]})', True)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser('selftest', help='Runs the verification suites')
    p.add_argument('--n', type=int, choices=(1, 2), default=2, help='Exhaustive suites for widths 1..n, default %(default)s')
    p.add_argument('--rand-n', type=int, default=None, help='Width of the randomized suite, default none')
    p.add_argument('--samples', type=int, default=10000, help='Randomized cases, default %(default)s')
    p.add_argument('--seed', type=int, default=42, help='Random seed, default %(default)s')
    p.add_argument('--oracle', action='store_true', default=False, help='Check agreement with the path oracle, default %(default)s')
    p.add_argument('--closed-samples', type=int, default=1000, help='Random closed-field cases (n=2, m=1), default %(default)s')
    p.add_argument('--separations', action='store_true', default=False, help='Search fields separating the properties, default %(default)s')
    p.add_argument('--format', choices=('json', 'text'), default='text', help='Output format, default %(default)s')
    p.set_defaults(func=cmd_selftest)

    return parser


def run(argv=None):
    '''Runs one command; returns the exit code (0 success, 1 defect or violation, 2 bad input).'''
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ModelError, ResourceLimitError, OSError) as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except DefectError as e:
        print(f'defect: {e}', file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
