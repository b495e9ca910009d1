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
Event-driven simulation of the spatial system

All the Poisson clocks of the model (a move clock of rate d and a birth
clock of rate b per slot, a game clock of rate v per pair of slots) are
merged into one Poisson process of rate

    Lambda = n (b + d) + n (n - 1) / 2 v

where n = K with ``addressing='slots'``, n = number of born particles
with ``addressing='born'`` and n = number of particles with positive wealth
with ``addressing='alive'``.  At each event the category, the target and the
auxiliary variable are drawn independently; the sequence of states observed
at the event times is the induced Markov chain.

Draw order
----------
Every event consumes exactly four uniforms u0, u1, u2, u3 of the
:class:`dpdsim.misc.UniformStream`, in this order:

======  =================================================================
u0      holding time, -log(1 - u0) / Lambda
u1      category: move if u1 Lambda < n d, game if < n d + n(n-1)/2 v,
        birth otherwise
u2      target: slot floor(u2 n) for moves and births, pair index
        floor(u2 n(n-1)/2) for games
u3      move direction floor(4 u3) (up, down, left, right); game coin
        (heads if u3 < 1/2, only read in the DD case); birth child choice
        floor(u3 n_unborn) among the Unborn slots
======  =================================================================

A pair index p encodes the slots i < j with p = j (j - 1) / 2 + i.
'''

import math
from typing import NamedTuple, Callable, Optional

import numpy
import pandas

from dpdsim import logger
from dpdsim import misc
from dpdsim import parameters as param
from dpdsim import model
from dpdsim import observables
from dpdsim import __config__
from dpdsim.model import COOPERATOR, UNBORN
from dpdsim.exceptions import ZeroRate

DEFAULT_OBSERVABLES = getattr(__config__, 'engine_observables',
                              ('coop_alive', 'def_alive', 'coop_wealth', 'n_born'))

EVENT_MOVE = param.EVENT_MOVE
EVENT_GAME = param.EVENT_GAME
EVENT_BIRTH = param.EVENT_BIRTH
DIRECTIONS = param.DIRECTIONS


class Event(NamedTuple):
    '''One realization of the unified Poisson process.

    ``slot`` is the moving particle, the first player or the parent;
    ``other`` the second player or the child slot.  Fields that do not
    apply to the event kind are -1.  ``coin`` is only set for DD games that
    took place.  ``applied`` tells whether the configuration changed.
    '''
    seq: int
    time: float
    kind: int
    slot: int = -1
    other: int = -1
    direction: int = -1
    coin: int = -1
    pair: int = -1
    u_aux: float = 0.
    applied: bool = False
    game: str = ''

    @property
    def kind_name(self):
        return param.EVENT_NAMES[self.kind]

    def signature(self):
        '''Outcome label used to compare with :func:`transition_table`.'''
        if self.kind == EVENT_MOVE:
            return (EVENT_MOVE, self.slot, -1, self.direction, -1)
        if self.kind == EVENT_GAME:
            return (EVENT_GAME, self.slot, self.other, -1, self.coin)
        return (EVENT_BIRTH, self.slot, self.other if self.applied else -1, -1, -1)


class EngineState(object):
    '''Configuration, payoffs, simulated clock, event counter and random
    stream of one simulation.'''
    __slots__ = ('config', 'payoffs', 'clock', 'event_count', 'rng')

    def __init__(self, config, payoffs, rng, clock=0., event_count=0):
        params = config.params
        payoffs = exact_payoffs(params, payoffs)
        if payoffs.is_integral and not (isinstance(params.w0, int)
                                        and isinstance(params.wc, int)):
            if misc.isintegral(params.w0) and misc.isintegral(params.wc):
                config = config.with_params(w0=int(params.w0), wc=int(params.wc))
        if not isinstance(rng, misc.UniformStream):
            rng = misc.UniformStream(rng)
        self.config = config
        self.payoffs = payoffs
        self.clock = clock
        self.event_count = event_count
        self.rng = rng

    def copy(self):
        return EngineState(self.config.copy(), self.payoffs, self.rng.copy(),
                           self.clock, self.event_count)

    def __repr__(self):
        return ('<EngineState n=%d t=%.6g %r>'
                % (self.event_count, self.clock, self.config))

def exact_payoffs(params, payoffs):
    '''Integer payoffs when T, R, S, P, w0 and wc all have integer values,
    so that wealth arithmetic stays exact.'''
    if (payoffs.is_integral and misc.isintegral(params.w0)
            and misc.isintegral(params.wc)):
        return payoffs.as_integers()
    return payoffs

def make_state(config, payoffs, seed=0, *labels):
    '''EngineState whose random stream is derived from (seed, labels).'''
    return EngineState(config, payoffs, misc.make_rng(seed, 'engine', *labels))


def pair_slots(p):
    '''Decode pair index p into the slots (i, j), i < j.'''
    j = (1 + math.isqrt(8 * p + 1)) // 2
    i = p - j * (j - 1) // 2
    return i, j

def pair_index(i, j):
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i

def actors(config):
    '''Slots addressed by the unified Poisson process, or None when all K
    slots are.'''
    params = config.params
    if params.addressing == param.ADDRESS_BORN:
        return config.born
    if params.addressing == param.ADDRESS_ALIVE:
        if params.flavor == param.FLAVOR_GHOST:
            return config.born
        w = config.wealth
        return [i for i in config.born if w[i] > 0]
    return None

def _n_addressable(config):
    slots = actors(config)
    return config.params.K if slots is None else len(slots)

def category_probabilities(config):
    '''(P(move), P(game), P(birth)) of the next event.'''
    rates = config.params.category_rates(_n_addressable(config))
    lam = sum(rates)
    if lam <= 0:
        raise ZeroRate('total event rate is zero')
    return tuple(r / lam for r in rates)


def next_event(state):
    '''Draw the next event of the unified Poisson process (not applied).'''
    config = state.config
    params = config.params
    slots = actors(config)
    n = params.K if slots is None else len(slots)
    move_rate, game_rate, birth_rate = params.category_rates(n)
    lam = move_rate + game_rate + birth_rate
    if not lam > 0:
        raise ZeroRate('total event rate is zero (n=%d, d=%s, v=%s, b=%s)'
                       % (n, params.d, params.v, params.b))
    u = state.rng
    u0 = u()
    u1 = u()
    u2 = u()
    u3 = u()
    t = state.clock - math.log1p(-u0) / lam
    seq = state.event_count + 1
    x = u1 * lam
    if x < move_rate:
        k = min(int(u2 * n), n - 1)
        slot = k if slots is None else slots[k]
        return Event(seq, t, EVENT_MOVE, slot, -1, min(int(u3 * 4), 3), -1, -1, u3)
    elif x < move_rate + game_rate:
        npairs = n * (n - 1) // 2
        p = min(int(u2 * npairs), npairs - 1)
        i, j = pair_slots(p)
        if slots is not None:
            i, j = slots[i], slots[j]
        coin = param.HEADS if u3 < .5 else param.TAILS
        return Event(seq, t, EVENT_GAME, i, j, -1, coin, p, u3)
    else:
        k = min(int(u2 * n), n - 1)
        slot = k if slots is None else slots[k]
        return Event(seq, t, EVENT_BIRTH, slot, -1, -1, -1, -1, u3)


#
# Transitions.  The underscore functions update the configuration in place
# and report what happened; the apply_* wrappers return the configuration.
#
def _move(config, slot, direction):
    if slot >= len(config.xs) or config.strategy[slot] == UNBORN:
        return False
    m = config.params.m
    dx, dy = DIRECTIONS[direction]
    config.xs[slot] = (config.xs[slot] + dx) % m
    config.ys[slot] = (config.ys[slot] + dy) % m
    return True

def _game(config, i, j, coin, payoffs):
    '''Returns the game kind ('CC', 'CD', 'DD') if the game took place,
    '' otherwise.'''
    nslots = len(config.xs)
    if i >= nslots or j >= nslots:
        return ''
    s = config.strategy
    si = s[i]
    sj = s[j]
    if si == UNBORN or sj == UNBORN:
        return ''
    if config.xs[i] != config.xs[j] or config.ys[i] != config.ys[j]:
        return ''
    w = config.wealth
    if config.params.flavor != param.FLAVOR_GHOST and not (w[i] > 0 and w[j] > 0):
        return ''
    di, dj = model.resolve_game(si, sj, coin, payoffs)
    w[i] += di
    w[j] += dj
    return model.game_kind(si, sj)

def _birth(config, parent, choice):
    '''Fill an Unborn slot with a child of ``parent``.  ``choice`` indexes
    the Unborn slots: stored free slots first, then the virtual ones (which
    are interchangeable, so the child takes the next stored index).
    Returns the child slot, or -1 if nothing happened.'''
    nslots = len(config.xs)
    if parent >= nslots:
        return -1
    sp = config.strategy[parent]
    if sp == UNBORN:
        return -1
    params = config.params
    w = config.wealth
    if not w[parent] > params.wc:
        return -1
    ghost = params.flavor == param.FLAVOR_GHOST
    if ghost and sp == COOPERATOR:
        return -1
    n_unborn = params.K - len(config.born)
    if n_unborn <= 0:
        return -1
    free = config.free
    if choice < len(free):
        child = free[choice]
        free[choice] = free[-1]
        free.pop()
        config.xs[child] = config.xs[parent]
        config.ys[child] = config.ys[parent]
        w[child] = params.w0
        config.strategy[child] = sp
    else:
        child = nslots
        config.xs.append(config.xs[parent])
        config.ys.append(config.ys[parent])
        w.append(params.w0)
        config.strategy.append(sp)
    config.born.append(child)
    if not ghost:
        w[parent] -= params.w0
    return child

def ghost_decrement(config, exempt=()):
    '''Per-event w0 decrement of the ghost dynamics.'''
    params = config.params
    w0 = params.w0
    w = config.wealth
    s = config.strategy
    coop_only = params.ghost_scope == 'cooperators'
    for i in config.born:
        if i in exempt:
            continue
        if coop_only and s[i] != COOPERATOR:
            continue
        w[i] -= w0
    return config

def apply_move(config, particle, direction):
    '''Shift a born particle by one step on the torus (in place).  Unborn
    slots do not move.'''
    _move(config, particle, direction)
    return config

def apply_game(config, pair, coin, payoffs):
    '''Let the two slots of ``pair`` (a pair index or an (i, j) tuple) play
    if both are born, co-located and, in the true dynamics, both have
    positive wealth.  The ghost per-event decrement is applied by
    :func:`step`, not here.'''
    if isinstance(pair, tuple):
        i, j = pair
    else:
        i, j = pair_slots(pair)
    _game(config, i, j, coin, payoffs)
    return config

def apply_birth(config, parent, slot_sampler):
    '''Let ``parent`` give birth if its wealth exceeds wc and an Unborn
    slot is left.  ``slot_sampler`` is a uniform in [0, 1) (or a callable
    returning one) selecting the child among the Unborn slots.'''
    n_unborn = config.params.K - len(config.born)
    if n_unborn > 0:
        u = slot_sampler() if callable(slot_sampler) else slot_sampler
        _birth(config, parent, min(int(u * n_unborn), n_unborn - 1))
    return config


def _apply(config, payoffs, ev, choice=None):
    '''Apply the event to the configuration in place and return the event
    with the outcome fields filled.'''
    kind = ev.kind
    exempt = ()
    if kind == EVENT_MOVE:
        ev = ev._replace(applied=_move(config, ev.slot, ev.direction))
    elif kind == EVENT_GAME:
        g = _game(config, ev.slot, ev.other, ev.coin, payoffs)
        if g:
            ev = ev._replace(applied=True, game=g,
                             coin=ev.coin if g == 'DD' else -1)
        else:
            ev = ev._replace(coin=-1)
    else:
        if choice is None:
            n_unborn = config.params.K - len(config.born)
            choice = min(int(ev.u_aux * n_unborn), n_unborn - 1) if n_unborn > 0 else 0
        child = _birth(config, ev.slot, choice)
        if child >= 0:
            ev = ev._replace(other=child, applied=True)
            exempt = (ev.slot,)
    if config.params.flavor == param.FLAVOR_GHOST:
        ghost_decrement(config, exempt)
    return ev

def step(state):
    '''Draw the next event, apply it, advance clock and counter.

    The state is updated in place; returns (state, event).
    '''
    ev = next_event(state)
    ev = _apply(state.config, state.payoffs, ev)
    state.clock = ev.time
    state.event_count = ev.seq
    return state, ev


def transition_table(config, payoffs):
    '''Exact one-step law of the induced chain from ``config``.

    Enumerates category x target x direction x coin x child choice and
    returns a dict mapping :meth:`Event.signature` to
    ``(probability, resulting configuration key)``.
    '''
    params = config.params
    slots = actors(config)
    n = params.K if slots is None else len(slots)
    move_rate, game_rate, birth_rate = params.category_rates(n)
    lam = move_rate + game_rate + birth_rate
    if not lam > 0:
        raise ZeroRate('total event rate is zero')
    payoffs = exact_payoffs(params, payoffs)
    slot_of = (lambda k: k) if slots is None else slots.__getitem__
    table = {}
    def add(ev, prob, choice=None):
        cfg = config.copy()
        ev = _apply(cfg, payoffs, ev, choice)
        sig = ev.signature()
        key = cfg.key()
        if sig in table:
            p0, key0 = table[sig]
            assert key0 == key
            table[sig] = (p0 + prob, key)
        else:
            table[sig] = (prob, key)

    if move_rate > 0:
        p = move_rate / lam / n / 4
        for k in range(n):
            for direction in range(4):
                add(Event(1, 0., EVENT_MOVE, slot_of(k), -1, direction), p)
    if game_rate > 0:
        npairs = n * (n - 1) // 2
        p = game_rate / lam / npairs / 2
        for pidx in range(npairs):
            i, j = pair_slots(pidx)
            i, j = slot_of(i), slot_of(j)
            for coin in (param.HEADS, param.TAILS):
                add(Event(1, 0., EVENT_GAME, i, j, -1, coin, pidx), p)
    if birth_rate > 0:
        p = birth_rate / lam / n
        n_unborn = params.K - len(config.born)
        n_free = len(config.free)
        for k in range(n):
            ev = Event(1, 0., EVENT_BIRTH, slot_of(k))
            if n_unborn == 0:
                add(ev, p, 0)
                continue
            for c in range(n_free):
                add(ev, p / n_unborn, c)
            if n_unborn > n_free:
                add(ev, p * (n_unborn - n_free) / n_unborn, n_free)
    return table


class StopCondition(NamedTuple):
    '''Stop after max_events events, when the clock passes max_time, or
    when predicate(state) is true (checked before every event).  The first
    condition met wins.  A run with ``addressing='alive'`` also stops with
    reason 'extinct' once no particle has positive wealth.'''
    max_events: Optional[int] = None
    max_time: Optional[float] = None
    predicate: Optional[Callable] = None

    def reason(self, state, n_done):
        if self.max_events is not None and n_done >= self.max_events:
            return 'max_events'
        if self.max_time is not None and state.clock >= self.max_time:
            return 'max_time'
        if self.predicate is not None and self.predicate(state):
            return 'predicate'
        return None


class Trajectory(object):
    '''Result of :func:`run`: the final state, the recorded observable
    series and, if requested, the list of events.'''
    def __init__(self, state, records, events=None, stop_reason=None, n_events=0):
        self.state = state
        self.records = records
        self.events = events
        self.stop_reason = stop_reason
        self.n_events = n_events

    @property
    def config(self):
        return self.state.config

    def series(self, key):
        return numpy.asarray(self.records[key])

    def to_csv(self, path, columns=None):
        frame = self.records
        if columns is not None:
            frame = frame[['event', 'clock', 'kind'] + list(columns)]
        return misc.write_csv(frame, path)


def _check_event(config, before, ev, payoffs, def_floor):
    '''Per-event invariants of the true dynamics.  ``before`` is the
    configuration before the event.'''
    delta = config.total_wealth() - before.total_wealth()
    expected = model.wealth_balance(ev.game, payoffs) if ev.game else 0
    if delta != expected:
        raise AssertionError('event %d (%s %s): total wealth changed by %s, expected %s'
                             % (ev.seq, ev.kind_name, ev.game, delta, expected))
    for i in range(len(before.xs)):
        if before.strategy[i] != UNBORN and not before.wealth[i] > 0:
            if config.wealth[i] != before.wealth[i]:
                raise AssertionError('event %d changed the wealth of dead slot %d'
                                     % (ev.seq, i))
    if def_floor and observables.survival_counts(config)[1] < 1:
        raise AssertionError('event %d left no positive-wealth defector' % ev.seq)

def run(state, stop, observables_keys=DEFAULT_OBSERVABLES, stride=1,
        keep_events=False, check=False, verbose=None):
    '''Iterate :func:`step` until ``stop`` is met.

    Args:
        stop : StopCondition, or an int taken as max_events
        observables_keys : names in :data:`dpdsim.observables.OBSERVABLES`
            recorded at event 0, every ``stride`` events and at the end
        keep_events : keep the list of Event tuples
        check : assert the per-event wealth balance, the freezing of dead
            particles and the persistence of a positive defector after
            every event (true dynamics only)

    Returns:
        Trajectory
    '''
    if isinstance(stop, int):
        stop = StopCondition(max_events=stop)
    log = logger.new_logger(None, verbose)
    cpu0 = logger.process_clock(), logger.perf_counter()
    funcs = [observables.OBSERVABLES[k] for k in observables_keys]
    rows = []
    def record(kind):
        c = state.config
        rows.append([state.event_count, state.clock, kind] + [f(c) for f in funcs])

    events = [] if keep_events else None
    check = check and state.config.params.flavor == param.FLAVOR_TRUE
    def_floor = check and observables.survival_counts(state.config)[1] >= 1
    alive = state.config.params.addressing == param.ADDRESS_ALIVE
    record('init')
    n_done = 0
    last = None
    while True:
        reason = stop.reason(state, n_done)
        if reason is not None:
            break
        if alive and last is not None and last.game and _n_addressable(state.config) == 0:
            reason = 'extinct'
            break
        if check:
            before = state.config.copy()
        state, ev = step(state)
        n_done += 1
        last = ev
        if check:
            _check_event(state.config, before, ev, state.payoffs, def_floor)
        if keep_events:
            events.append(ev)
        if stride and n_done % stride == 0:
            record(ev.kind_name)
    if last is not None and (not stride or n_done % stride != 0):
        record(last.kind_name)
    records = pandas.DataFrame(rows, columns=['event', 'clock', 'kind'] + list(observables_keys))
    log.debug('run stopped by %s after %d events, t = %.6g', reason, n_done, state.clock)
    log.timer('engine run', *cpu0)
    return Trajectory(state, records, events, reason, n_done)


class Engine(misc.StreamObject):
    '''Spatial simulation driver.

    >>> from dpdsim import model, engine
    >>> params = model.SimParams(m=7, K=20)
    >>> cfg = model.initial_configuration(params, 10, 10, 10, rng=1)
    >>> eng = engine.Engine(cfg, model.PayoffMatrix(4, 3, 2, 1), seed=7)
    >>> traj = eng.kernel(engine.StopCondition(max_events=1000))
    '''
    def __init__(self, config, payoffs, seed=0, labels=()):
        self.config = config
        self.payoffs = payoffs
        self.seed = seed
        self.labels = tuple(labels)
        self.stride = 1
        self.observables = DEFAULT_OBSERVABLES
        self.keep_events = False
        self.check = False
        self.verbose = getattr(__config__, 'VERBOSE', param.VERBOSE_NOTICE)

        self.state = make_state(config.copy(), payoffs, seed, *self.labels)
        self.trajectory = None
        self._keys = set(['config', 'payoffs', 'seed', 'labels', 'stride',
                          'observables', 'keep_events', 'check',
                          'verbose', 'stdout'])

    def dump_flags(self, verbose=None):
        log = logger.new_logger(self, verbose)
        p = self.config.params
        log.info('')
        log.info('******** %s ********', self.__class__)
        log.info('torus m = %d, capacity K = %d, addressing = %s', p.m, p.K, p.addressing)
        log.info('rates d = %s, v = %s, b = %s', p.d, p.v, p.b)
        log.info('w0 = %s, wc = %s, flavor = %s', p.w0, p.wc, p.flavor)
        log.info('payoffs %s', self.payoffs.to_dict())
        log.info('seed = %s %s', self.seed, self.labels)
        return self

    def kernel(self, stop=None):
        if stop is None:
            stop = StopCondition(max_events=0)
        if self.verbose >= logger.INFO:
            self.dump_flags()
        self.trajectory = run(self.state, stop, self.observables, self.stride,
                              self.keep_events, self.check, self.verbose)
        return self.trajectory

    def step(self):
        return step(self.state)[1]
