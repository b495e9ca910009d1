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
Derived quantities of spatial configurations and trajectories

Photograph
----------
The photograph of a configuration counts, for every site and strategy, the
individuals with positive wealth.  Two configurations with the same
photograph are equivalent: wealth magnitudes above zero and slot labels are
forgotten.

Stopping times
--------------
tau_1 is the first event ordinal at which the total cooperator wealth
strictly decreases.  Between two such times the cooperators only gain
wealth.  An unfinished stopping time is reported with ``finite=False``
rather than a sentinel number.

Every function of :data:`OBSERVABLES` maps a configuration to a number and
can be recorded by :func:`dpdsim.engine.run` under its key.
'''

import math
from dataclasses import dataclass
from typing import Optional

import numpy

from dpdsim.model import COOPERATOR, DEFECTOR, Strategy
from dpdsim.exceptions import EmptyGroup

FIRST_CD_GAME = 'FirstCDGame'
COOPERATOR_FIRST_CC_GAME = 'PerCooperatorFirstCCGame'
DEFECTOR_FIRST_CD_GAME = 'PerDefectorFirstCDGame'


class Photograph(object):
    '''Sorted sparse map (site, strategy) -> number of positive-wealth
    individuals.'''
    __slots__ = ('items',)

    def __init__(self, counts):
        self.items = tuple(sorted((site, int(s), n) for (site, s), n in counts.items() if n))

    @property
    def counts(self):
        return {(site, Strategy(s)): n for site, s, n in self.items}

    def total(self):
        return sum(n for _, _, n in self.items)

    def __eq__(self, other):
        if not isinstance(other, Photograph):
            return NotImplemented
        return self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __repr__(self):
        return 'Photograph(%s)' % ', '.join('%s%s:%d' % (site, Strategy(s).letter, n)
                                            for site, s, n in self.items)

def photograph(config):
    counts = {}
    w = config.wealth
    s = config.strategy
    for i in config.born:
        if w[i] > 0:
            key = ((config.xs[i], config.ys[i]), s[i])
            counts[key] = counts.get(key, 0) + 1
    return Photograph(counts)


def total_cooperator_wealth(config):
    '''Sum of the wealths of all cooperators, nonpositive ones included.'''
    w = config.wealth
    s = config.strategy
    return sum(w[i] for i in config.born if s[i] == COOPERATOR)

def total_wealth(config):
    return config.total_wealth()

def survival_counts(config):
    '''(positive-wealth cooperators, positive-wealth defectors)'''
    w = config.wealth
    s = config.strategy
    nc = nd = 0
    for i in config.born:
        if w[i] > 0:
            if s[i] == COOPERATOR:
                nc += 1
            else:
                nd += 1
    return nc, nd

def _group_wealths(config, group):
    w = config.wealth
    s = config.strategy
    if group in ('cooperators', COOPERATOR):
        return [w[i] for i in config.born if s[i] == COOPERATOR]
    elif group in ('defectors', DEFECTOR):
        return [w[i] for i in config.born if s[i] == DEFECTOR]
    elif group == 'all':
        return [w[i] for i in config.born]
    raise ValueError('unknown group %r' % (group,))

def min_wealth(config, group='all'):
    '''Minimum wealth over the born members of a group
    ('cooperators', 'defectors' or 'all').'''
    ws = _group_wealths(config, group)
    if not ws:
        raise EmptyGroup('no %s in the configuration' % group)
    return min(ws)

def _min_or_nan(config, group):
    ws = _group_wealths(config, group)
    return min(ws) if ws else math.nan


OBSERVABLES = {
    'coop_alive': lambda c: survival_counts(c)[0],
    'def_alive': lambda c: survival_counts(c)[1],
    'coop_wealth': total_cooperator_wealth,
    'total_wealth': total_wealth,
    'n_born': lambda c: len(c.born),
    'min_coop_wealth': lambda c: _min_or_nan(c, 'cooperators'),
    'min_def_wealth': lambda c: _min_or_nan(c, 'defectors'),
    'min_wealth': lambda c: _min_or_nan(c, 'all'),
    'n_sites': lambda c: len(set(site for site, _, _ in photograph(c).items)),
}


@dataclass(frozen=True)
class StoppingTimeRecord:
    kind: str
    finite: bool
    tau: Optional[int] = None
    index: Optional[int] = None

    @classmethod
    def at(cls, kind, tau, index=None):
        return cls(kind, True, int(tau), index)

    @classmethod
    def infinite(cls, kind, index=None):
        return cls(kind, False, None, index)

    def __repr__(self):
        label = self.kind if self.index is None else '%s(%d)' % (self.kind, self.index)
        return '<%s tau=%s>' % (label, self.tau if self.finite else 'inf')


def _coop_wealth_series(trajectory):
    if hasattr(trajectory, 'records'):
        rec = trajectory.records
        events = numpy.asarray(rec['event'])
        if len(events) > 1 and numpy.any(numpy.diff(events) != 1):
            raise ValueError('first_cd_game_time needs a trajectory recorded at every event')
        return numpy.asarray(rec['coop_wealth']), int(events[0]) if len(events) else 0
    return numpy.asarray(trajectory), 0

def first_cd_game_time(trajectory, start=0):
    '''First event ordinal n > start at which the total cooperator wealth
    strictly decreases.

    ``trajectory`` is a :class:`dpdsim.engine.Trajectory` recorded with
    stride 1 and the 'coop_wealth' observable, or the sequence of total
    cooperator wealths indexed by event ordinal.
    '''
    series, offset = _coop_wealth_series(trajectory)
    lo = max(start - offset, 0)
    drops = numpy.nonzero(numpy.diff(series[lo:]) < 0)[0]
    if len(drops) == 0:
        return StoppingTimeRecord.infinite(FIRST_CD_GAME)
    return StoppingTimeRecord.at(FIRST_CD_GAME, offset + lo + drops[0] + 1)

def stopping_time_sequence(trajectory):
    '''Cumulated sequence tau_1 < tau_2 < ... obtained by applying
    :func:`first_cd_game_time` to the suffix started at the previous time.'''
    taus = []
    start = 0
    while True:
        rec = first_cd_game_time(trajectory, start)
        if not rec.finite:
            return taus
        taus.append(rec.tau)
        start = rec.tau

def _first_game_times(events, slots, game, kind):
    pending = set(slots)
    found = {}
    for ev in events:
        if ev.game != game or not pending:
            continue
        for i in (ev.slot, ev.other):
            if i in pending:
                found[i] = ev.seq
                pending.discard(i)
    return [StoppingTimeRecord.at(kind, found[i], i) if i in found
            else StoppingTimeRecord.infinite(kind, i) for i in slots]

def first_cc_game_times(events, config):
    '''First CC game of every cooperator of ``config`` in the event list.'''
    slots = [i for i in config.born if config.strategy[i] == COOPERATOR]
    return _first_game_times(events, slots, 'CC', COOPERATOR_FIRST_CC_GAME)

def first_cd_game_times_per_defector(events, config):
    '''First CD game of every defector of ``config`` in the event list.'''
    slots = [i for i in config.born if config.strategy[i] == DEFECTOR]
    return _first_game_times(events, slots, 'CD', DEFECTOR_FIRST_CD_GAME)

def running_min_wealth(trajectory, group='cooperators'):
    '''Running minimum over the recorded events of the minimum wealth of a
    group.'''
    key = {'cooperators': 'min_coop_wealth', 'defectors': 'min_def_wealth',
           'all': 'min_wealth'}[group]
    return numpy.fmin.accumulate(numpy.asarray(trajectory.records[key], dtype=float))


def cd_game_tail(config, payoffs, unit, kmax, n_samples, seed=0):
    '''Empirical tail P(tau_1 > k unit) for k = 0 .. kmax.

    Every sample restarts from ``config`` with its own random stream and
    runs until the first decrease of the total cooperator wealth or
    ``kmax * unit`` events.

    Returns:
        (tails, stderr) arrays of length kmax + 1
    '''
    from dpdsim import engine
    horizon = kmax * unit
    taus = numpy.empty(n_samples)
    for s in range(n_samples):
        state = engine.make_state(config.copy(), payoffs, seed, 'cd-tail', s)
        prev = total_cooperator_wealth(state.config)
        taus[s] = numpy.inf
        for n in range(1, horizon + 1):
            engine.step(state)
            cur = total_cooperator_wealth(state.config)
            if cur < prev:
                taus[s] = n
                break
            prev = cur
    ks = numpy.arange(kmax + 1)
    tails = numpy.array([(taus > k * unit).mean() for k in ks])
    stderr = numpy.sqrt(tails * (1 - tails) / n_samples)
    return tails, stderr
