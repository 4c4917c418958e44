# The MIT License
# Copyright 2019 Innodata Labs
#
'''
Model documents, DOT diagrams and the JSON report.

A model document is JSON: {"n": 2, "m": 0, "table": {"00": "11", ...}} or
{"n": 2, "m": 0, "coords": ["w2", "!w1"]}. Table keys are (n + m)-bit
strings with coordinate 1 leftmost, values are n-bit strings.
'''
import dataclasses
import json
import logging
from collections import OrderedDict
from gatedelay.model import State, VectorField, ParamVectorField, ModelError, MAX_WIDTH
from gatedelay.relations import reach, moves
from gatedelay.properties import PROPERTY_NAMES
from gatedelay.expression import elaborate
from gatedelay.nonautonomous import ClosedField, ModeQualifiedReport, FUNDAMENTAL_MODE_PROPERTIES, \
    input_coordinates

log = logging.getLogger(__name__)

_DOCUMENT_KEYS = ('n', 'm', 'table', 'coords')


def _no_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ModelError(f'duplicate key {key!r}')
        seen[key] = value
    return seen


def _width(doc, key, lo, hi):
    value = doc.get(key, 0)
    if type(value) is not int or not lo <= value <= hi:
        raise ModelError(f'"{key}" must be an integer in {lo}..{hi}, got {value!r}')
    return value


def parse_model(text):
    '''Parse a model document into a ParamVectorField (m = 0 for autonomous fields).'''
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as e:
        raise ModelError(f'not a JSON document: {e.msg} at line {e.lineno} column {e.colno}') from None
    if not isinstance(doc, dict):
        raise ModelError('model document must be a JSON object')
    unknown = sorted(set(doc) - set(_DOCUMENT_KEYS))
    if unknown:
        raise ModelError(f'unknown key {unknown[0]!r} in model document')
    if 'n' not in doc:
        raise ModelError('model document has no "n"')
    n = _width(doc, 'n', 1, MAX_WIDTH)
    m = _width(doc, 'm', 0, MAX_WIDTH - n)

    if ('table' in doc) == ('coords' in doc):
        raise ModelError('model document needs exactly one of "table" and "coords"')

    if 'coords' in doc:
        coords = doc['coords']
        if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
            raise ModelError('"coords" must be a list of expression strings')
        return elaborate(coords, n, m)

    rows = doc['table']
    if not isinstance(rows, dict):
        raise ModelError('"table" must be an object mapping keys to values')
    table = [None] * (1 << (n + m))
    for key, value in rows.items():
        if not isinstance(value, str):
            raise ModelError(f'row {key!r}: value must be a bit string, got {value!r}')
        z = State.parse(key, n + m)
        table[z.value] = State.parse(value, n).value
    missing = [z for z, value in enumerate(table) if value is None]
    if missing:
        raise ModelError(f'missing row {str(State(missing[0], n + m))!r} '
                         f'({len(missing)} of {len(table)} rows missing)')
    return ParamVectorField(n, m, table)


def load_model(path):
    with open(path, 'r', encoding='utf-8') as f:
        field = parse_model(f.read())
    log.debug('loaded %r from %s', field, path)
    return field


def model_document(field):
    if isinstance(field, VectorField):
        field = ParamVectorField.autonomous(field)
    width = field.n + field.m
    table = OrderedDict(
        (str(State(z, width)), str(State(int(y), field.n)))
        for z, y in enumerate(field.table)
    )
    return OrderedDict([('n', field.n), ('m', field.m), ('table', table)])


def serialize_model(field):
    return json.dumps(model_document(field), indent=2) + '\n'


def _label(view, x, split=None):
    e = view.excitation(x)
    parts = []
    for i in range(1, view.n + 1):
        if i == split:
            parts.append('|')
        parts.append(str((x >> (view.n - i)) & 1))
        if (e >> (view.n - i)) & 1:
            parts.append('*')
    return ''.join(parts)


def emit_dot(field, root=None, name='gatedelay'):
    '''DOT text of the mu-graph: excited bits carry a trailing '*', stable states a double border.

    For a closed field the state and input parts of a label are separated by '|'.
    With a root, only the states reachable from it are drawn.
    '''
    if isinstance(field, ClosedField):
        view, split = field.view, input_coordinates(field)[0]
    else:
        view, split = field, None
    if root is not None:
        codes = sorted(x.value for x in reach(view, root))
    else:
        codes = range(1 << view.n)

    lines = [f'digraph "{name}" {{', '\tnode [shape=box];']
    for x in codes:
        attrs = [f'label="{_label(view, x, split)}"']
        if view.image(x) == x:
            attrs.append('peripheries=2')
        if root is not None and x == root.value:
            attrs.append('penwidth=2')
        lines.append(f'\t"{State(x, view.n)}" [{", ".join(attrs)}];')
    for x in codes:
        for y in sorted(moves(view, x)):
            lines.append(f'\t"{State(x, view.n)}" -> "{State(y, view.n)}";')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def _jsonable(obj):
    if isinstance(obj, State):
        return str(obj)
    if dataclasses.is_dataclass(obj):
        return OrderedDict((f.name, _jsonable(getattr(obj, f.name)))
                           for f in dataclasses.fields(obj))
    if isinstance(obj, (tuple, list)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, (frozenset, set)):
        return [_jsonable(x) for x in sorted(obj)]
    return obj


def _states(states):
    return [str(s) for s in sorted(states)]


def report_to_dict(report):
    '''The report as an ordered dict; keys and their order are fixed.'''
    qualified = None
    if isinstance(report, ModeQualifiedReport):
        qualified, report = report, report.report

    tcgr = report.verdicts['tcgr']
    orbit = report.orbit
    out = OrderedDict()
    out['state'] = str(report.state)
    out['stable'] = report.stable
    out['excited'] = list(report.excited)
    out['reach_size'] = report.reach_size
    out['stable_reachable'] = _states(report.stable_reachable)
    out['limit'] = None if report.limit is None else str(report.limit)
    properties = OrderedDict((name, report.holds(name)) for name in PROPERTY_NAMES)
    properties['tcgr'] = OrderedDict([('holds', tcgr.holds), ('branch', report.tcgr_branch)])
    properties['single_bit_change'] = report.single_bit_change
    out['properties'] = properties
    out['causes'] = OrderedDict([
        ('delay_sensitivity', list(report.delay_sensitivity_causes)),
        ('hazard', list(report.hazard_causes)),
    ])
    out['hazardous_transition'] = _jsonable(report.hazardous_transition)
    out['orbit'] = OrderedDict([
        ('transient_len', orbit.transient_len),
        ('period', orbit.period),
        ('milestones', [str(s) for s in orbit.milestones]),
    ])
    out['witnesses'] = OrderedDict(
        (name, _jsonable(report.verdicts[name].witness))
        for name in PROPERTY_NAMES if not report.holds(name)
    )
    if qualified is not None:
        out['param'] = str(qualified.closed.target)
        out['state_stable'] = qualified.state_stable
        out['fundamental_mode'] = OrderedDict(
            (name, qualified.fundamental_mode[name]) for name in FUNDAMENTAL_MODE_PROPERTIES)
    return out


def emit_report(report):
    return json.dumps(report_to_dict(report), indent=2) + '\n'


def _yes(flag):
    return 'yes' if flag else 'no'


def emit_text(report):
    '''Fixed-layout human summary of a report.'''
    d = report_to_dict(report)
    props = d['properties']
    causes = dict(delay_insensitive=d['causes']['delay_sensitivity'],
                  hazard_free=d['causes']['hazard'])
    lines = [
        f"state {d['state']}  stable {_yes(d['stable'])}  "
        f"excited {','.join(str(i) for i in d['excited']) or '-'}",
        f"reach {d['reach_size']}  stable reachable {' '.join(d['stable_reachable']) or '-'}"
        f"  limit {d['limit'] or '-'}",
    ]
    for name in PROPERTY_NAMES:
        holds = props[name]['holds'] if name == 'tcgr' else props[name]
        line = f'{name:<22} {_yes(holds)}'
        if name == 'tcgr' and holds:
            line += f"  {props['tcgr']['branch']}"
        if causes.get(name):
            line += f"  ({', '.join(causes[name])})"
        lines.append(line)
    lines.append(f"{'single_bit_change':<22} {_yes(props['single_bit_change'])}")
    orbit = d['orbit']
    lines.append(f"orbit J={orbit['transient_len']} P={orbit['period']}: {' '.join(orbit['milestones'])}")
    if 'param' in d:
        lines.append(f"param {d['param']}  state_stable {_yes(d['state_stable'])}")
        fm = ' '.join(name for name, flag in d['fundamental_mode'].items() if flag)
        lines.append(f'fundamental mode: {fm or "-"}')
    return '\n'.join(lines) + '\n'
