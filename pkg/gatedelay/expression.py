# The MIT License
# Copyright 2019 Innodata Labs
#
'''
Boolean coordinate expressions: w1..wn name state coordinates, v1..vm inputs.

Precedence is ! over & over ^ over |, binary operators associate to the
left. Expressions are evaluated over numpy arrays of total-state codes, so a
whole truth table is one call.
'''
from dataclasses import dataclass
from typing import Union
import numpy as np
import pyparsing as pp
from gatedelay.model import State, ModelError, ParamVectorField

pp.ParserElement.enable_packrat()


class ExpressionError(ModelError):
    '''Syntax or identifier error; loc is the character position in the text.'''

    def __init__(self, message, loc=None):
        ModelError.__init__(self, message if loc is None else f'{message} (at position {loc})')
        self.loc = loc


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    kind: str   # 'w' or 'v'
    index: int
    loc: int


@dataclass(frozen=True)
class Not:
    arg: 'Node'


@dataclass(frozen=True)
class BinOp:
    op: str
    left: 'Node'
    right: 'Node'


Node = Union[Const, Var, Not, BinOp]


def _var(s, loc, t):
    return Var(t[0][0], int(t[0][1:]), loc)


def _not(t):
    return Not(t[0][1])


def _binop(t):
    items = t[0]
    tree = items[0]
    for op, right in zip(items[1::2], items[2::2]):
        tree = BinOp(op, tree, right)
    return tree


def _grammar():
    ident = pp.Regex(r'[wv](?:0|[1-9][0-9]*)(?![0-9])').set_parse_action(_var)
    const = pp.Regex(r'[01](?![0-9])').set_parse_action(lambda t: Const(int(t[0])))
    operand = const | ident
    return pp.infix_notation(operand, [
        (pp.Literal('!'), 1, pp.OpAssoc.RIGHT, _not),
        (pp.Literal('&'), 2, pp.OpAssoc.LEFT, _binop),
        (pp.Literal('^'), 2, pp.OpAssoc.LEFT, _binop),
        (pp.Literal('|'), 2, pp.OpAssoc.LEFT, _binop),
    ])


GRAMMAR = _grammar()


def variables(tree):
    if isinstance(tree, Var):
        yield tree
    elif isinstance(tree, Not):
        yield from variables(tree.arg)
    elif isinstance(tree, BinOp):
        yield from variables(tree.left)
        yield from variables(tree.right)


def check_identifiers(tree, n=None, m=0):
    for var in variables(tree):
        if var.index < 1:
            raise ExpressionError(f'{var.kind}{var.index}: coordinates are 1-based', var.loc)
        if n is None:
            continue
        bound = n if var.kind == 'w' else m
        if var.index > bound:
            raise ExpressionError(
                f'unknown identifier {var.kind}{var.index}: only {var.kind}1..{var.kind}{bound}',
                var.loc)


def parse_expression(text, n=None, m=0):
    '''Parse text into an expression tree; with n given, identifiers are range-checked.'''
    try:
        tree = GRAMMAR.parse_string(text, parse_all=True)[0]
    except pp.ParseException as e:
        raise ExpressionError(f'syntax error in {text!r}: {e.msg}', e.loc) from None
    check_identifiers(tree, n, m)
    return tree


_OPS = {
    '&': np.logical_and,
    '^': np.logical_xor,
    '|': np.logical_or,
}


def _evaluate(tree, z, n, m):
    if isinstance(tree, Const):
        return np.full(z.shape, bool(tree.value))
    if isinstance(tree, Var):
        shift = n + m - tree.index if tree.kind == 'w' else m - tree.index
        return ((z >> shift) & 1).astype(bool)
    if isinstance(tree, Not):
        return ~_evaluate(tree.arg, z, n, m)
    return _OPS[tree.op](_evaluate(tree.left, z, n, m), _evaluate(tree.right, z, n, m))


def evaluate(tree, z, n, m=0):
    '''Value of tree at the total state z (a State of width n + m) or at an array of codes.'''
    check_identifiers(tree, n, m)
    if isinstance(z, State):
        if z.n != n + m:
            raise ModelError(f'state {z} has width {z.n}, expected {n + m}')
        return int(_evaluate(tree, np.asarray(z.value, dtype=np.int64), n, m))
    return _evaluate(tree, np.asarray(z, dtype=np.int64), n, m).astype(np.int64)


def elaborate(coords, n, m=0):
    '''Truth table of the field whose i-th coordinate function is coords[i - 1].'''
    if len(coords) != n:
        raise ModelError(f'expected {n} coordinate expressions, got {len(coords)}')
    z = np.arange(1 << (n + m), dtype=np.int64)
    table = np.zeros_like(z)
    for i, text in enumerate(coords, 1):
        tree = parse_expression(text, n, m)
        table |= evaluate(tree, z, n, m) << (n - i)
    return ParamVectorField(n, m, table)
