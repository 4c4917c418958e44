# The MIT License
# Copyright 2019 Innodata Labs
#
'''
Reference fields and the streams of (field, state) cases the suites run over.
'''
import itertools
import numpy as np
from gatedelay.model import State, TotalState, VectorField, ParamVectorField


def not_gate():
    '''n = 1, g(w) = !w: oscillates forever.'''
    return VectorField(1, [1, 0])


def const_field(n, value):
    return VectorField(n, [value] * (1 << n))


def race():
    '''From 00 both coordinates race; 01, 10 and 11 are stable.'''
    return VectorField(2, [0b11, 0b01, 0b10, 0b11])


def unfair2():
    '''00 <-> 01 cycle that is never fair: coordinate 1 stays 0 and excited on it.'''
    return VectorField(2, [0b11, 0b10, 0b10, 0b11])


def buffer():
    '''n = m = 1, f(w, v) = v.'''
    return ParamVectorField.from_function(1, 1, lambda w, v: State(v.value, 1))


def identity(n):
    return VectorField(n, np.arange(1 << n))


def all_fields(n):
    size = 1 << n
    for table in itertools.product(range(size), repeat=size):
        yield VectorField(n, table)


def all_cases(n):
    '''Every field of width n with every start state, in table order then state order.'''
    for g in all_fields(n):
        for w in g.states():
            yield g, w


def random_cases(n, samples, seed):
    '''Uniform (field, state) pairs; the same seed gives the same cases.'''
    rng = np.random.RandomState(seed)
    size = 1 << n
    for _ in range(samples):
        g = VectorField(n, rng.randint(0, size, size=size))
        yield g, State(int(rng.randint(0, size)), n)


def random_param_cases(n, m, samples, seed):
    '''Uniform (field, total state, target input) triples.'''
    rng = np.random.RandomState(seed)
    for _ in range(samples):
        f = ParamVectorField(n, m, rng.randint(0, 1 << n, size=1 << (n + m)))
        z = TotalState.split(State(int(rng.randint(0, 1 << (n + m))), n + m), n, m)
        target = State(int(rng.randint(0, 1 << m)), m)
        yield f, z, target


def late_enable():
    '''n = 3 from 000: switching coordinate 1 first disables coordinate 2 until 101 re-enables it.

    Every path is monotonous and ends at 111, so the field is hazard-free at
    000 without being semi-modular there.
    '''
    return VectorField(3, [0b110, 0b001, 0b110, 0b011, 0b101, 0b111, 0b111, 0b111])


def random_increasing_cases(n, samples, seed):
    '''Fields with g(x) covering x bitwise: coordinates only ever switch 0 -> 1.'''
    rng = np.random.RandomState(seed)
    size = 1 << n
    codes = np.arange(size)
    for _ in range(samples):
        g = VectorField(n, codes | (rng.randint(0, size, size=size) & ~codes))
        yield g, State(int(rng.randint(0, size)), n)
