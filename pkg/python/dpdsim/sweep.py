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
Batches of spatial runs over a grid of (R, S) payoffs

For every cell the payoffs are T = R + t_offset, R, S, P = S + p_offset
(t_offset = 1, p_offset = -1 by default), and ``batch_size`` independent
runs of ``event_budget`` events start from the preset population.  The
cell reports the mean numbers of cooperators and defectors with positive
wealth at the end of the runs.

Seeds
-----
Run k of cell (R, S) uses the stream seed
``misc.derive_seed(master_seed, R, S, k)``, a SeedSequence with spawn key
(R, S, k).  The initial positions are drawn from the sub-stream 'init' of
that seed and the events from the sub-stream 'engine'.  No seed depends
on the execution order or on the other cells of the grid.
'''

import os
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy
import pandas

from dpdsim import logger
from dpdsim import misc
from dpdsim import parameters as param
from dpdsim import model
from dpdsim import engine
from dpdsim import observables
from dpdsim import __config__
from dpdsim.exceptions import ConstraintViolation

DEFAULT_PARALLELISM = getattr(__config__, 'sweep_parallelism', 1)


@dataclass(frozen=True)
class Preset:
    '''Base parameters and initial population of a sweep.'''
    params: model.SimParams = field(default_factory=model.SimParams)
    n_coop: int = 10
    n_def: int = 10
    wealth: float = 10
    positions: Optional[Tuple[Tuple[int, int], ...]] = None

    def initial_configuration(self, rng):
        return model.initial_configuration(self.params, self.n_coop, self.n_def,
                                           self.wealth, rng=rng,
                                           positions=self.positions)

# The birth rate used for the phase diagram is not documented; b = 5 keeps
# the three clocks of an individual at the same rate.  The event budget
# counts events of the living particles only.
FIGURE2 = Preset(model.SimParams(m=7, K=10**7, d=5, v=5, b=5, w0=3, wc=10,
                                 addressing=param.ADDRESS_ALIVE),
                 n_coop=10, n_def=10, wealth=10)
FIGURE2_BUDGET = 10000
FIGURE2_BATCH = 100
FIGURE2_GRID = tuple(range(101))

PRESETS = {'figure2': FIGURE2}


@dataclass(frozen=True)
class SweepSpec:
    R_values: Tuple[float, ...] = FIGURE2_GRID
    S_values: Tuple[float, ...] = FIGURE2_GRID
    batch_size: int = FIGURE2_BATCH
    preset: Preset = FIGURE2
    event_budget: int = FIGURE2_BUDGET
    master_seed: int = 0
    t_offset: float = 1
    p_offset: float = -1
    event_log_dir: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'R_values', tuple(self.R_values))
        object.__setattr__(self, 'S_values', tuple(self.S_values))
        if not self.R_values or not self.S_values:
            raise ConstraintViolation('non-empty R and S grids')
        if not self.batch_size >= 1:
            raise ConstraintViolation('batch_size>=1')
        if not self.event_budget >= 0:
            raise ConstraintViolation('event_budget>=0')

    def payoffs(self, R, S):
        return model.PayoffMatrix(R + self.t_offset, R, S, S + self.p_offset)

    def cells(self):
        return [(R, S) for R in sorted(self.R_values) for S in sorted(self.S_values)]


@dataclass(frozen=True)
class CellResult:
    R: float
    S: float
    coop_counts: Tuple[int, ...]
    def_counts: Tuple[int, ...]
    runtime: float = 0.

    @property
    def batch_size(self):
        return len(self.coop_counts)

    @property
    def mean_coop(self):
        return sum(self.coop_counts) / len(self.coop_counts)

    @property
    def mean_def(self):
        return sum(self.def_counts) / len(self.def_counts)

    def coexistence(self):
        '''Number of runs ending with both strategies alive.'''
        return sum(1 for c, d in zip(self.coop_counts, self.def_counts) if c > 0 and d > 0)


def run_seed(spec, R, S, run):
    return misc.derive_seed(spec.master_seed, R, S, run)

def run_one(task):
    '''One run of a cell; ``task`` is (spec, R, S, run).  Returns
    (cooperators alive, defectors alive, cpu time).'''
    spec, R, S, k = task
    t0 = logger.process_clock()
    payoffs = spec.payoffs(R, S)
    model.validate(spec.preset.params, payoffs, strict=False)
    seed = run_seed(spec, R, S, k)
    config = spec.preset.initial_configuration(misc.make_rng(seed, 'init'))
    state = engine.make_state(config, payoffs, seed)
    keep = spec.event_log_dir is not None
    traj = engine.run(state, engine.StopCondition(max_events=spec.event_budget),
                      observables_keys=(), stride=0, keep_events=keep,
                      verbose=logger.QUIET)
    if keep:
        path = os.path.join(spec.event_log_dir, 'events_R%s_S%s_run%d.csv' % (R, S, k))
        misc.write_csv(pandas.DataFrame(traj.events, columns=engine.Event._fields), path)
    nc, nd = observables.survival_counts(traj.state.config)
    return nc, nd, logger.process_clock() - t0

def _gather(spec, cells, results, batch):
    out = []
    for idx, (R, S) in enumerate(cells):
        chunk = results[idx*batch:(idx+1)*batch]
        out.append(CellResult(R, S, tuple(r[0] for r in chunk), tuple(r[1] for r in chunk),
                              sum(r[2] for r in chunk)))
    return out

def run_cell(R, S, spec, parallelism=1):
    '''``spec.batch_size`` runs of the cell (R, S).'''
    model.validate(spec.preset.params, spec.payoffs(R, S), strict=False)
    tasks = [(spec, R, S, k) for k in range(spec.batch_size)]
    results = misc.pool_map(run_one, tasks, parallelism)
    return _gather(spec, [(R, S)], results, spec.batch_size)[0]


class SweepGrid(object):
    '''All CellResults of a sweep, ordered by R then S.'''
    def __init__(self, spec, cells):
        self.spec = spec
        self.cells = sorted(cells, key=lambda c: (c.R, c.S))

    def __getitem__(self, key):
        for c in self.cells:
            if (c.R, c.S) == tuple(key):
                return c
        raise KeyError(key)

    def __len__(self):
        return len(self.cells)

    def to_frame(self):
        return pandas.DataFrame({'R': [c.R for c in self.cells],
                                 'S': [c.S for c in self.cells],
                                 'mean_coop': [c.mean_coop for c in self.cells],
                                 'mean_def': [c.mean_def for c in self.cells],
                                 'batch_size': [c.batch_size for c in self.cells]})

    def matrix(self, value='mean_coop'):
        '''Dense table with one row per R and one column per S.'''
        frame = self.to_frame().pivot(index='R', columns='S', values=value)
        frame = frame.sort_index().sort_index(axis=1)
        frame.columns = ['S=%s' % s for s in frame.columns]
        return frame.reset_index()


def run_grid(spec, parallelism=DEFAULT_PARALLELISM, verbose=None):
    '''Every cell of the grid.  The (cell, run) tasks are spread over a
    process pool and gathered by position, so the result does not depend
    on ``parallelism``.'''
    log = logger.new_logger(None, verbose)
    cpu0 = logger.process_clock(), logger.perf_counter()
    cells = spec.cells()
    for R, S in cells:
        model.validate(spec.preset.params, spec.payoffs(R, S), strict=False)
    tasks = [(spec, R, S, k) for R, S in cells for k in range(spec.batch_size)]
    log.debug('sweep: %d cells x %d runs, parallelism %s', len(cells), spec.batch_size,
              parallelism)
    results = misc.pool_map(run_one, tasks, parallelism)
    grid = SweepGrid(spec, _gather(spec, cells, results, spec.batch_size))
    log.timer('sweep', *cpu0)
    return grid

def matrix_path(path):
    stem, ext = os.path.splitext(path)
    return stem + '_matrix' + (ext or '.csv')

def emit_heatmap(grid, path):
    '''Write the long table (R, S, mean_coop, mean_def, batch_size) to
    ``path`` and the R x S matrix of mean_coop beside it.

    Returns:
        (long table path, matrix path)
    '''
    misc.write_csv(grid.to_frame(), path)
    mpath = matrix_path(path)
    misc.write_csv(grid.matrix(), mpath)
    return path, mpath


def monotonicity_violations(grid, along='R', value='mean_coop'):
    '''Count, for every line of the grid, the steps where ``value``
    decreases along R (or increases along S).

    Returns:
        dict {fixed coordinate: number of violations}
    '''
    frame = grid.to_frame().pivot(index='R', columns='S', values=value).sort_index()
    frame = frame.sort_index(axis=1)
    table = frame.to_numpy()
    out = {}
    if along == 'R':
        for j, S in enumerate(frame.columns):
            out[S] = int(numpy.count_nonzero(numpy.diff(table[:, j]) < 0))
    else:
        for i, R in enumerate(frame.index):
            out[R] = int(numpy.count_nonzero(numpy.diff(table[i, :]) > 0))
    return out


class Sweep(misc.StreamObject):
    '''
    >>> spec = SweepSpec(R_values=[0, 100], S_values=[2, 100], batch_size=4)
    >>> grid = Sweep(spec).set(parallelism=2).kernel()
    '''
    def __init__(self, spec):
        self.spec = spec
        self.parallelism = DEFAULT_PARALLELISM
        self.verbose = getattr(__config__, 'VERBOSE', param.VERBOSE_NOTICE)
        self.grid = None
        self._keys = set(['spec', 'parallelism', 'verbose', 'stdout'])

    def dump_flags(self, verbose=None):
        log = logger.new_logger(self, verbose)
        spec = self.spec
        log.info('')
        log.info('******** %s ********', self.__class__)
        log.info('R grid %s .. %s (%d), S grid %s .. %s (%d)',
                 min(spec.R_values), max(spec.R_values), len(spec.R_values),
                 min(spec.S_values), max(spec.S_values), len(spec.S_values))
        log.info('batch_size = %d, event_budget = %d, master_seed = %d',
                 spec.batch_size, spec.event_budget, spec.master_seed)
        log.info('T = R %+g, P = S %+g', spec.t_offset, spec.p_offset)
        log.info('preset %s', spec.preset)
        log.info('parallelism = %s', self.parallelism)
        return self

    def kernel(self):
        if self.verbose >= logger.INFO:
            self.dump_flags()
        self.grid = run_grid(self.spec, self.parallelism, self.verbose)
        return self.grid
