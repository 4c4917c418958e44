# The MIT License
# Copyright 2019 Innodata Labs
#
from types import SimpleNamespace


def cmp_dict(d1, d2, ctx):
    k1 = set(d1.keys())
    k2 = set(d2.keys())
    if k1 != k2:
        ctx.error = f'dict keys mismatch: {sorted(k1 ^ k2)}'
        return

    for key in d1:
        cmp_x(d1[key], d2[key], ctx)
        if ctx.error is not None:
            ctx.path.append(key)
            return


def cmp_value(v1, v2, ctx):
    if v1 != v2:
        ctx.error = f'value mismatch {v1!r} vs {v2!r}'


def cmp_list(l1, l2, ctx):
    if len(l1) != len(l2):
        ctx.error = f'list length mismatch {len(l1)} vs {len(l2)}'
        return

    for index, (a, b) in enumerate(zip(l1, l2)):
        cmp_x(a, b, ctx)
        if ctx.error is not None:
            ctx.path.append(index)
            return


_DISPATCH = {
    bool: cmp_value,
    int: cmp_value,
    str: cmp_value,
    type(None): cmp_value,
    dict: cmp_dict,
    list: cmp_list,
}


def _kind(x):
    if isinstance(x, dict):
        return dict
    if isinstance(x, tuple):
        return list
    return type(x)


def cmp_x(a, b, ctx):
    if _kind(a) is not _kind(b):
        ctx.error = f'type mismatch: {type(a).__name__} vs {type(b).__name__}'
        return

    _DISPATCH[_kind(a)](a, b, ctx)


def compare(a, b):
    '''First difference between two JSON-like values as (message, key path), or None.'''
    ctx = SimpleNamespace(error=None, path=[])
    cmp_x(a, b, ctx)
    if ctx.error is None:
        return None
    return ctx.error, '/'.join(str(x) for x in reversed(ctx.path))


def agreement_view(report):
    '''The part of a report dict two independent deciders must agree on: everything but witnesses.'''
    if isinstance(report, list):
        return [agreement_view(r) for r in report]
    return {key: value for key, value in report.items() if key != 'witnesses'}
