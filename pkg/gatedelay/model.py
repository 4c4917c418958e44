# The MIT License
# Copyright 2019 Innodata Labs
#
'''
States, vector fields and the iterate orbit of a field.

Coordinates are 1-based everywhere a user can see them. Internally a state
of width n is an int whose bit (n - i) holds coordinate i, so the numeric
order of states is the order of their bit strings (coordinate 1 leftmost).
'''
import logging
from typing import NamedTuple, Tuple
import numpy as np

log = logging.getLogger(__name__)

MAX_WIDTH = 24        # explicit tables above this do not fit in memory
MAX_GRAPH_WIDTH = 12  # practical cap for analyses that build reach graphs


class ModelError(ValueError):
    '''Malformed field, state or input vector.'''


class WidthError(ModelError):
    pass


class DefectError(AssertionError):
    '''Two characterizations of a property disagree, or an implication fails.'''

    def __init__(self, law, details=''):
        AssertionError.__init__(self, f'{law}: {details}' if details else law)
        self.law = law
        self.details = details


def coordinate_mask(n, coords):
    '''Bit mask of the given 1-based coordinates.'''
    mask = 0
    for i in coords:
        if not 1 <= i <= n:
            raise ModelError(f'coordinate {i} out of range 1..{n}')
        mask |= 1 << (n - i)
    return mask


def mask_coordinates(n, mask):
    '''1-based coordinates set in mask, ascending.'''
    return tuple(i for i in range(1, n + 1) if (mask >> (n - i)) & 1)


class State(NamedTuple):
    '''Fixed-width bit vector; also used for input vectors.'''
    value: int
    n: int

    @classmethod
    def parse(cls, text, n=None):
        if n is not None and len(text) != n:
            raise WidthError(f'expected {n} bits, got {len(text)} in {text!r}')
        for pos, c in enumerate(text):
            if c not in '01':
                raise ModelError(f'bad bit character {c!r} at position {pos} in {text!r}')
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def from_bits(cls, bits):
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ModelError(f'bad bit value {b!r}')
            value = (value << 1) | b
        return cls(value, len(bits))

    @property
    def bits(self):
        return tuple(self.coordinate(i) for i in range(1, self.n + 1))

    def coordinate(self, i):
        return (self.value >> (self.n - i)) & 1

    def flip(self, *coords):
        return State(self.value ^ coordinate_mask(self.n, coords), self.n)

    def __str__(self):
        if self.n == 0:
            return ''
        return format(self.value, f'0{self.n}b')

    def __repr__(self):
        return f"State('{self}')"


# input vectors are plain bit vectors of width m
InputVector = State


class TotalState(NamedTuple):
    '''Extended state z = (w, v); its text form is the w bits followed by the v bits.'''
    w: State
    v: State

    def joined(self):
        return State((self.w.value << self.v.n) | self.v.value, self.w.n + self.v.n)

    @classmethod
    def split(cls, state, n, m):
        if state.n != n + m:
            raise WidthError(f'expected {n + m} bits for a total state, got {state.n}')
        return cls(State(state.value >> m, n), State(state.value & ((1 << m) - 1), m))

    def __str__(self):
        return str(self.w) + str(self.v)


def _check_width(n, lo=1):
    if not isinstance(n, (int, np.integer)) or not lo <= n <= MAX_WIDTH:
        raise ModelError(f'width {n!r} out of range {lo}..{MAX_WIDTH}')


def _as_table(table, rows, bound):
    table = np.array(table, dtype=np.int64).reshape(-1)
    if table.shape != (rows,):
        raise ModelError(f'table must have exactly {rows} rows, got {table.shape[0]}')
    if table.min() < 0 or table.max() >= bound:
        raise ModelError(f'table values must lie in 0..{bound - 1}')
    table.setflags(write=False)
    return table


class VectorField:
    '''The generator function g of an autonomous automaton, as an explicit table.

    table[x] is the image of the state whose integer code is x.
    '''

    def __init__(self, n, table):
        _check_width(n)
        self.n = int(n)
        self.table = _as_table(table, 1 << self.n, 1 << self.n)
        self._images = self.table.tolist()
        self._hash = hash((self.n, self.table.tobytes()))

    @classmethod
    def from_function(cls, n, fn):
        return cls(n, [fn(State(x, n)).value for x in range(1 << n)])

    def check(self, w):
        if w.n != self.n:
            raise WidthError(f'state {w} has width {w.n}, field has width {self.n}')

    def __call__(self, w):
        self.check(w)
        return State(self._images[w.value], self.n)

    def image(self, x):
        '''Image of the integer-coded state x.'''
        return self._images[x]

    def excitation(self, x):
        '''Mask of the coordinates excited in the integer-coded state x.'''
        return self._images[x] ^ x

    def states(self):
        return (State(x, self.n) for x in range(1 << self.n))

    def stable_states(self):
        codes = np.flatnonzero(self.table == np.arange(1 << self.n))
        return tuple(State(int(x), self.n) for x in codes)

    def __eq__(self, other):
        return (isinstance(other, VectorField) and self.n == other.n
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        rows = ' '.join(f'{State(x, self.n)}>{State(y, self.n)}'
                        for x, y in enumerate(self._images[:8]))
        more = ' ...' if len(self._images) > 8 else ''
        return f'VectorField(n={self.n}: {rows}{more})'


class ParamVectorField:
    '''Field f(w, v) with an m-bit input; row (w << m) | v holds the n-bit image.'''

    def __init__(self, n, m, table):
        _check_width(n)
        _check_width(m, lo=0)
        if n + m > MAX_WIDTH:
            raise ModelError(f'n + m = {n + m} exceeds {MAX_WIDTH}')
        self.n = int(n)
        self.m = int(m)
        self.table = _as_table(table, 1 << (self.n + self.m), 1 << self.n)
        self._images = self.table.tolist()

    @classmethod
    def from_function(cls, n, m, fn):
        return cls(n, m, [
            fn(State(z >> m, n), State(z & ((1 << m) - 1), m)).value
            for z in range(1 << (n + m))
        ])

    @classmethod
    def autonomous(cls, g):
        return cls(g.n, 0, g.table)

    def __call__(self, w, v):
        if w.n != self.n or v.n != self.m:
            raise WidthError(f'expected widths ({self.n}, {self.m}), got ({w.n}, {v.n})')
        return State(self._images[(w.value << self.m) | v.value], self.n)

    def section(self, v):
        '''The autonomous field w -> f(w, v) for a fixed input v.'''
        if v.n != self.m:
            raise WidthError(f'input {v} has width {v.n}, field has {self.m} inputs')
        return VectorField(self.n, self.table.reshape(1 << self.n, 1 << self.m)[:, v.value])

    def as_vector_field(self):
        if self.m != 0:
            raise ModelError(f'field has {self.m} inputs; a target input is required')
        return VectorField(self.n, self.table)

    def __eq__(self, other):
        return (isinstance(other, ParamVectorField) and (self.n, self.m) == (other.n, other.m)
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n, self.m, self.table.tobytes()))

    def __repr__(self):
        return f'ParamVectorField(n={self.n}, m={self.m})'


def excitation_set(g, w):
    '''Coordinates i with g_i(w) != w_i.'''
    g.check(w)
    return frozenset(mask_coordinates(g.n, g.excitation(w.value)))


def apply(g, w):
    return g(w)


def is_stable(g, w):
    g.check(w)
    return g.image(w.value) == w.value


def hamming(w, w2):
    if w.n != w2.n:
        raise WidthError(f'states {w} and {w2} differ in width')
    return bin(w.value ^ w2.value).count('1')


class OrbitSummary(NamedTuple):
    '''Least (J, P) with g^J(w) = g^(J+P)(w), and g^0(w) .. g^(J+P-1)(w).'''
    transient_len: int
    period: int
    milestones: Tuple[State, ...]

    @property
    def stabilizes(self):
        return self.period == 1

    def at(self, j):
        '''g^j(w) for any j >= 0.'''
        J, P = self.transient_len, self.period
        if j < J:
            return self.milestones[j]
        return self.milestones[J + (j - J) % P]


def orbit_summary(g, w):
    g.check(w)
    seen = {}
    sequence = []
    x = w.value
    while x not in seen:
        seen[x] = len(sequence)
        sequence.append(x)
        x = g.image(x)
    J = seen[x]
    return OrbitSummary(J, len(sequence) - J, tuple(State(y, g.n) for y in sequence))


def iterate(g, w, j):
    '''g^j(w).'''
    if j < 0:
        raise ValueError(f'iterate count must be >= 0, got {j}')
    g.check(w)
    if j > (1 << g.n):
        return orbit_summary(g, w).at(j)
    x = w.value
    for _ in range(j):
        x = g.image(x)
    return State(x, g.n)
