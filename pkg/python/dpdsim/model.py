#!/usr/bin/env python
# Copyright 2026 The dpdsim Developers. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

'''
Demographic Prisoner's Dilemma: domain types and payoff algebra

Individuals live on the discrete torus (Z/mZ)^2.  Each of the K slots of a
configuration holds a position, a signed wealth and a strategy code
(Cooperator, Defector or Unborn).  A game between two co-located players
changes their wealths according to the payoff matrix

=========  ==========  ==========
           C           D
---------  ----------  ----------
C          (+R, +R)    (-S, +T)
D          (+T, -S)    (-2P, 0) or (0, -2P)
=========  ==========  ==========

where the DD punishment hits one player chosen by a fair coin, so that two
players never lose wealth together.

Wealth arithmetic is exact: when T, R, S, P, w0 and wc all have integer
values the configuration stores Python integers, otherwise floats.

Slots beyond ``Configuration.nslots`` are not stored.  They are Unborn and
indistinguishable from each other, so a capacity K = 10**7 costs memory
only for the particles that were actually born.
'''

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Tuple

import numpy

from dpdsim import parameters as param
from dpdsim import misc
from dpdsim import __config__
from dpdsim.exceptions import ConstraintViolation, UnbornPlayer

DENSE_CAPACITY = getattr(__config__, 'model_dense_capacity', 4096)


class Strategy(enum.IntEnum):
    '''Strategy code Z of a slot.'''
    UNBORN = -1
    COOPERATOR = 0
    DEFECTOR = 1

    @property
    def letter(self):
        return {-1: 'U', 0: 'C', 1: 'D'}[int(self)]

UNBORN = Strategy.UNBORN
COOPERATOR = Strategy.COOPERATOR
DEFECTOR = Strategy.DEFECTOR


@dataclass(frozen=True)
class PayoffMatrix:
    '''Payoff parameters.  S is the magnitude of the sucker loss, P half the
    magnitude of the DD punishment.'''
    T: float = 4
    R: float = 3
    S: float = 2
    P: float = 1

    @property
    def is_integral(self):
        return all(misc.isintegral(x) for x in (self.T, self.R, self.S, self.P))

    def as_integers(self):
        return PayoffMatrix(int(self.T), int(self.R), int(self.S), int(self.P))

    def resolve(self, si, sj, coin):
        return resolve_game(si, sj, coin, self)

    def to_dict(self):
        return {'T': self.T, 'R': self.R, 'S': self.S, 'P': self.P}


@dataclass(frozen=True)
class SimParams:
    '''Parameters of the spatial system.

    Attributes:
        m : int
            Side length of the torus.
        K : int
            Capacity (number of slots).
        d, v, b : float
            Move rate per individual, game rate per pair, birth rate per
            individual.
        w0, wc : float
            Birth wealth and birth threshold.
        flavor : str
            ``'true'`` or ``'ghost'`` dynamics.
        addressing : str
            ``'slots'`` builds the unified Poisson process over all K slots
            (Unborn targets give no-op events).  ``'born'`` builds it over the
            born particles only, which is the same continuous-time process
            with the Unborn no-ops removed.  ``'alive'`` builds it over the
            particles with positive wealth in the true dynamics (all born
            particles in the ghost dynamics).  Dead particles can neither
            play nor give birth, so this only drops their moves and leaves
            the law of the living particles unchanged.
        ghost_scope : str
            Who pays the per-event w0 decrement in the ghost dynamics:
            ``'cooperators'`` or ``'all'`` born individuals.
    '''
    m: int = 7
    K: int = 20
    d: float = 5
    v: float = 5
    b: float = 5
    w0: float = 3
    wc: float = 10
    flavor: str = param.FLAVOR_TRUE
    addressing: str = param.ADDRESS_SLOTS
    ghost_scope: str = 'cooperators'

    @property
    def is_ghost(self):
        return self.flavor == param.FLAVOR_GHOST

    def total_rate(self, n=None):
        '''Rate of the unified Poisson process over n addressable slots
        (K by default).'''
        if n is None:
            n = self.K
        return n * (self.b + self.d) + n * (n - 1) // 2 * self.v

    def category_rates(self, n=None):
        '''(move, game, birth) rates over n addressable slots.'''
        if n is None:
            n = self.K
        return n * self.d, n * (n - 1) // 2 * self.v, n * self.b

    def to_dict(self):
        return {'m': self.m, 'K': self.K, 'd': self.d, 'v': self.v,
                'b': self.b, 'w0': self.w0, 'wc': self.wc,
                'flavor': self.flavor, 'addressing': self.addressing,
                'ghost_scope': self.ghost_scope}


class Particle(NamedTuple):
    position: Tuple[int, int]
    wealth: float
    strategy: Strategy

    @property
    def alive(self):
        return self.strategy != UNBORN and self.wealth > 0

UNBORN_PARTICLE = Particle((0, 0), 0, UNBORN)


class GameOutcome(NamedTuple):
    delta_i: float
    delta_j: float


def validate(params, payoffs, strict=True):
    '''Check the parameter inequalities and return the inputs unchanged.

    In strict mode the payoff ordering T > R > 0 and S > P > 0 is required.
    Non-strict mode keeps only 0 < w0 < wc and the nonnegativity of the
    rates, which admits grids such as P = S - 1 with S = 0.

    Raises:
        ConstraintViolation naming the violated inequality.
    '''
    p = params
    if not misc.isintegral(p.m) or p.m < 1:
        raise ConstraintViolation('m>=1')
    if not misc.isintegral(p.K) or p.K < 1:
        raise ConstraintViolation('K>=1')
    for name in ('d', 'v', 'b'):
        x = getattr(p, name)
        if not (x >= 0) or math.isinf(x):
            raise ConstraintViolation('%s>=0' % name)
    if not p.w0 > 0:
        raise ConstraintViolation('w0>0')
    if not p.w0 < p.wc:
        raise ConstraintViolation('w0<wc')
    if p.flavor not in (param.FLAVOR_TRUE, param.FLAVOR_GHOST):
        raise ConstraintViolation('flavor in {true, ghost}')
    if p.addressing not in param.ADDRESSING:
        raise ConstraintViolation('addressing in {slots, born, alive}')
    if p.ghost_scope not in ('cooperators', 'all'):
        raise ConstraintViolation('ghost_scope in {cooperators, all}')
    if math.isinf(p.total_rate()):
        raise ConstraintViolation('total rate finite')

    if strict:
        pm = payoffs
        if not pm.T > pm.R:
            raise ConstraintViolation('T>R')
        if not pm.R > 0:
            raise ConstraintViolation('R>0')
        if not pm.S > pm.P:
            raise ConstraintViolation('S>P')
        if not pm.P > 0:
            raise ConstraintViolation('P>0')
    return params, payoffs


def resolve_game(si, sj, coin, payoffs):
    '''Wealth changes of a game between strategies si and sj.

    The coin is only read in the DD case: HEADS (0) punishes player i,
    TAILS (1) punishes player j.
    '''
    if si == UNBORN or sj == UNBORN:
        raise UnbornPlayer('game with an unborn player (%s, %s)' % (si, sj))
    pm = payoffs
    if si == COOPERATOR:
        if sj == COOPERATOR:
            return GameOutcome(pm.R, pm.R)
        return GameOutcome(-pm.S, pm.T)
    if sj == COOPERATOR:
        return GameOutcome(pm.T, -pm.S)
    if coin == param.HEADS:
        return GameOutcome(-2*pm.P, 0)
    return GameOutcome(0, -2*pm.P)

def game_kind(si, sj):
    ''''CC', 'CD' (one of each, either order) or 'DD'.'''
    if si == COOPERATOR and sj == COOPERATOR:
        return 'CC'
    if si == DEFECTOR and sj == DEFECTOR:
        return 'DD'
    return 'CD'

def wealth_balance(kind, payoffs):
    '''Change of total wealth caused by a game of the given kind.'''
    if kind == 'CC':
        return 2 * payoffs.R
    if kind == 'CD':
        return payoffs.T - payoffs.S
    return -2 * payoffs.P


class Configuration(object):
    '''State of all K slots.

    Slots ``0 .. nslots-1`` are stored in the parallel lists ``xs``, ``ys``,
    ``wealth`` and ``strategy``; slots ``nslots .. K-1`` are virtual Unborn
    slots.  ``born`` lists the born slots in order of birth (nothing is ever
    removed) and ``free`` the stored Unborn slots.

    The transition functions of :mod:`dpdsim.engine` update a configuration
    in place; use :meth:`copy` to keep a snapshot.
    '''
    __slots__ = ('params', 'xs', 'ys', 'wealth', 'strategy', 'born', 'free')

    def __init__(self, params, xs=(), ys=(), wealth=(), strategy=()):
        self.params = params
        m = params.m
        self.xs = [int(x) % m for x in xs]
        self.ys = [int(y) % m for y in ys]
        self.wealth = list(wealth)
        self.strategy = [int(s) for s in strategy]
        if not (len(self.xs) == len(self.ys) == len(self.wealth) == len(self.strategy)):
            raise ValueError('slot arrays of different lengths')
        if len(self.xs) > params.K:
            raise ConstraintViolation('number of slots <= K')
        self.born = [i for i, s in enumerate(self.strategy) if s != UNBORN]
        self.free = [i for i, s in enumerate(self.strategy) if s == UNBORN]

    @classmethod
    def from_particles(cls, params, particles, dense=None):
        '''Build a configuration from a sequence of Particles.

        If ``dense`` (default: K <= DENSE_CAPACITY) every one of the K slots
        is stored, otherwise only the given particles are.
        '''
        particles = list(particles)
        if dense is None:
            dense = params.K <= DENSE_CAPACITY
        if dense:
            particles = particles + [UNBORN_PARTICLE] * (params.K - len(particles))
        integral = misc.isintegral(params.w0) and misc.isintegral(params.wc)
        wealth = []
        for p in particles:
            w = p.wealth
            if integral and misc.isintegral(w):
                w = int(w)
            wealth.append(w)
        return cls(params,
                   [p.position[0] for p in particles],
                   [p.position[1] for p in particles],
                   wealth, [p.strategy for p in particles])

    @property
    def K(self):
        return self.params.K

    @property
    def nslots(self):
        return len(self.xs)

    @property
    def n_born(self):
        return len(self.born)

    @property
    def n_unborn(self):
        return self.params.K - len(self.born)

    def __len__(self):
        return self.params.K

    def particle(self, i):
        if not 0 <= i < self.params.K:
            raise IndexError(i)
        if i >= len(self.xs):
            return UNBORN_PARTICLE
        return Particle((self.xs[i], self.ys[i]), self.wealth[i],
                        Strategy(self.strategy[i]))

    def particles(self):
        '''Stored slots as Particles (virtual Unborn slots are omitted).'''
        return [self.particle(i) for i in range(len(self.xs))]

    def __iter__(self):
        return iter(self.particles())

    def copy(self):
        new = Configuration.__new__(Configuration)
        new.params = self.params
        new.xs = list(self.xs)
        new.ys = list(self.ys)
        new.wealth = list(self.wealth)
        new.strategy = list(self.strategy)
        new.born = list(self.born)
        new.free = list(self.free)
        return new

    def key(self):
        '''Hashable snapshot of the stored slots.'''
        return tuple(zip(self.xs, self.ys, self.wealth, self.strategy))

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.params == other.params and self.key() == other.key()

    def __hash__(self):
        return hash((self.params, self.key()))

    def total_wealth(self):
        s = self.strategy
        return sum(w for i, w in enumerate(self.wealth) if s[i] != UNBORN)

    def with_params(self, **kwargs):
        new = self.copy()
        new.params = replace(self.params, **kwargs)
        return new

    def __repr__(self):
        return ('<Configuration m=%d K=%d born=%d>'
                % (self.params.m, self.params.K, len(self.born)))


def initial_configuration(params, n_coop, n_def, wealth, rng=None, positions=None,
                          dense=None):
    '''n_coop cooperators followed by n_def defectors, all with the given
    wealth.

    Positions are drawn independently and uniformly on the torus from
    ``rng`` (a numpy Generator or seed) unless ``positions`` lists them
    explicitly.  The draw order is (x0, y0, x1, y1, ...).
    '''
    n = n_coop + n_def
    if n > params.K:
        raise ConstraintViolation('initial population <= K')
    if positions is None:
        if not hasattr(rng, 'integers'):
            rng = numpy.random.default_rng(rng)
        xy = rng.integers(0, params.m, size=(n, 2)).tolist()
        positions = [tuple(p) for p in xy]
    else:
        positions = [tuple(p) for p in positions]
        if len(positions) != n:
            raise ValueError('%d positions given for %d particles' % (len(positions), n))
    strategies = [COOPERATOR] * n_coop + [DEFECTOR] * n_def
    particles = [Particle(pos, wealth, s) for pos, s in zip(positions, strategies)]
    return Configuration.from_particles(params, particles, dense=dense)
