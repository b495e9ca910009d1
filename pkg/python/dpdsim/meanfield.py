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
Mean-field wealth dynamics

Without births and with fast mixing, a typical cooperator and a typical
defector play at the events of Poisson clocks of intensity v against an
opponent drawn from the population: a cooperator with probability beta0,
a defector with probability rho0.  The opponent must have positive wealth,
so the jump laws depend on the current laws themselves through

    beta_t = P(C(t) > 0),    rho_t = P(D(t) > 0).

======================  ==================  =============================
jump of                 value               probability
----------------------  ------------------  -----------------------------
cooperator C            +R                  beta0 beta_t
                        -S                  rho0 rho_t
                        0                   otherwise
defector D              +T                  beta0 beta_t
                        -2P                 rho0 rho_t / 2
                        0                   otherwise
======================  ==================  =============================

Individuals with nonpositive wealth never change again.  Three
representations are provided:

* :class:`Ensemble` -- particle approximation; beta_t and rho_t are replaced
  by the positive-wealth fractions of the ensemble.
* :class:`MasterEquation` -- the forward equations for the laws of C(t) and
  D(t) on the integer wealth lattice, integrated with RK4 (default), Euler
  or scipy's RK45.
* the linearized cooperator wealth, a compound Poisson process with jumps
  -S (prob. rho0), +R (prob. beta0) and no absorbing boundary, whose moments
  are known in closed form:

      drift            m  = v (beta0 R - rho0 S)
      variance rate    s2 = v (beta0 R^2 + rho0 S^2)
'''

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import NamedTuple, Tuple

import numpy
import pandas
import scipy.integrate
import scipy.stats

from dpdsim import logger
from dpdsim import misc
from dpdsim import parameters as param
from dpdsim import __config__
from dpdsim.model import PayoffMatrix
from dpdsim.exceptions import (ConstraintViolation, WindowOverflow, NegativeMass,
                               NonpositiveDrift)

MASS_TOL = getattr(__config__, 'meanfield_mass_tol', 1e-12)
OVERFLOW_TOL = getattr(__config__, 'meanfield_overflow_tol', 1e-8)
WINDOW_TAIL = getattr(__config__, 'meanfield_window_tail', 1e-10)
DEFAULT_DT = getattr(__config__, 'meanfield_dt', 1e-2)
RK45_RTOL = getattr(__config__, 'meanfield_rk45_rtol', 1e-10)
RK45_ATOL = getattr(__config__, 'meanfield_rk45_atol', 1e-13)


@dataclass(frozen=True)
class MFParams:
    '''Parameters of the mean-field model.

    Attributes:
        beta0, rho0 : float
            Initial densities of cooperators and defectors, beta0 + rho0 = 1.
        v : float
            Game rate.
        payoffs : PayoffMatrix
        m0 : tuple of (wealth, probability)
            Initial wealth law, finitely supported.
        rate_convention : str
            ``'full'`` plays at rate v, ``'half'`` at rate v/2.
    '''
    beta0: float = .5
    rho0: float = .5
    v: float = 1.
    payoffs: PayoffMatrix = field(default_factory=PayoffMatrix)
    m0: Tuple[Tuple[float, float], ...] = ((10, 1.),)
    rate_convention: str = 'full'

    def __post_init__(self):
        m0 = self.m0
        if isinstance(m0, dict):
            m0 = m0.items()
        elif not isinstance(m0, (tuple, list)):
            m0 = ((m0, 1.),)
        object.__setattr__(self, 'm0', tuple(sorted((w, float(p)) for w, p in m0)))

    @property
    def rate(self):
        if self.rate_convention == 'half':
            return self.v * .5
        return self.v

    @property
    def support(self):
        return [w for w, p in self.m0 if p > 0]

def point_mass(q0):
    return ((q0, 1.),)

def validate(params, tol=1e-12):
    '''Check beta0 + rho0 = 1, the nonnegativity of the rates and that m0
    is a probability law.'''
    p = params
    if not (0 <= p.beta0 <= 1 and 0 <= p.rho0 <= 1):
        raise ConstraintViolation('beta0, rho0 in [0,1]')
    if abs(p.beta0 + p.rho0 - 1) > tol:
        raise ConstraintViolation('beta0+rho0=1')
    if not p.v >= 0:
        raise ConstraintViolation('v>=0')
    if p.rate_convention not in ('full', 'half'):
        raise ConstraintViolation('rate_convention in {full, half}')
    if any(pr < 0 for w, pr in p.m0):
        raise ConstraintViolation('m0>=0')
    if abs(sum(pr for w, pr in p.m0) - 1) > tol:
        raise ConstraintViolation('sum(m0)=1')
    return params


#
# Particle ensemble
#
class MFEnsemble(object):
    '''Wealth samples of the typical cooperator and defector.  Samples
    with nonpositive wealth are kept with frozen wealth.'''
    __slots__ = ('coop_wealths', 'def_wealths', 'clock', 'n_pos_coop', 'n_pos_def')

    def __init__(self, coop_wealths, def_wealths, clock=0.):
        self.coop_wealths = list(coop_wealths)
        self.def_wealths = list(def_wealths)
        if len(self.coop_wealths) != len(self.def_wealths):
            raise ValueError('cooperator and defector ensembles of different sizes')
        self.clock = clock
        self.n_pos_coop = sum(1 for w in self.coop_wealths if w > 0)
        self.n_pos_def = sum(1 for w in self.def_wealths if w > 0)

    @property
    def size(self):
        return len(self.coop_wealths)

    @property
    def beta(self):
        return self.n_pos_coop / len(self.coop_wealths)

    @property
    def rho(self):
        return self.n_pos_def / len(self.def_wealths)

    def copy(self):
        return MFEnsemble(self.coop_wealths, self.def_wealths, self.clock)

def make_ensemble(params, n_ens, rng):
    '''Draw n_ens cooperator and n_ens defector wealths from m0.'''
    if n_ens < 1:
        raise ConstraintViolation('N_ens>=1')
    values = numpy.array([w for w, p in params.m0])
    probs = numpy.array([p for w, p in params.m0])
    probs = probs / probs.sum()
    coop = values[rng.choice(len(values), n_ens, p=probs)]
    dfct = values[rng.choice(len(values), n_ens, p=probs)]
    if all(misc.isintegral(w) for w in values):
        coop = coop.astype(numpy.int64)
        dfct = dfct.astype(numpy.int64)
    return MFEnsemble(coop.tolist(), dfct.tolist())

def ensemble_step(ens, params, u, t_limit=math.inf):
    '''One event of the ensemble.

    Every sample carries a Poisson clock of intensity v; the next event of
    the 2 N_ens clocks happens after an exponential time of rate 2 N_ens v
    and picks a sample uniformly.  Three uniforms are drawn per event:
    holding time, sample, jump.  If the event time exceeds ``t_limit`` the
    clock is set to ``t_limit``, nothing jumps, and False is returned.
    '''
    n = len(ens.coop_wealths)
    rate = 2 * n * params.rate
    if rate <= 0:
        if t_limit < math.inf:
            ens.clock = max(ens.clock, t_limit)
        return False
    t = ens.clock - math.log1p(-u()) / rate
    if t > t_limit:
        ens.clock = t_limit
        return False
    ens.clock = t
    k = min(int(u() * 2 * n), 2 * n - 1)
    x = u()
    pm = params.payoffs
    bp = params.beta0 * ens.n_pos_coop / n
    rp = params.rho0 * ens.n_pos_def / n
    if k < n:
        w = ens.coop_wealths[k]
        if w > 0:
            if x < bp:
                ens.coop_wealths[k] = w + pm.R
            elif x < bp + rp:
                w = w - pm.S
                ens.coop_wealths[k] = w
                if not w > 0:
                    ens.n_pos_coop -= 1
    else:
        k -= n
        w = ens.def_wealths[k]
        if w > 0:
            if x < bp:
                ens.def_wealths[k] = w + pm.T
            elif x < bp + .5 * rp:
                w = w - 2 * pm.P
                ens.def_wealths[k] = w
                if not w > 0:
                    ens.n_pos_def -= 1
    return True

def ensemble_histogram(ens, population='cooperators'):
    '''Empirical law {wealth: fraction} of one population.'''
    ws = ens.coop_wealths if population == 'cooperators' else ens.def_wealths
    values, counts = numpy.unique(numpy.asarray(ws), return_counts=True)
    n = float(len(ws))
    return {v: c / n for v, c in zip(values.tolist(), counts.tolist())}


class Ensemble(misc.StreamObject):
    '''Self-consistent particle simulation of the nonlinear process.

    >>> ens = Ensemble(MFParams(), n_ens=10000, seed=3)
    >>> series = ens.kernel(t_end=5., record_dt=.5)
    '''
    def __init__(self, params, n_ens=10000, seed=0):
        self.params = validate(params)
        self.n_ens = n_ens
        self.seed = seed
        self.verbose = getattr(__config__, 'VERBOSE', param.VERBOSE_NOTICE)
        self.ens = make_ensemble(params, n_ens, misc.make_rng(seed, 'ensemble-init'))
        self.rng = misc.UniformStream(misc.make_rng(seed, 'ensemble'))
        self.series = None
        self._keys = set(['params', 'n_ens', 'seed', 'verbose', 'stdout'])

    def kernel(self, t_end, record_dt=None):
        log = logger.new_logger(self)
        cpu0 = logger.process_clock(), logger.perf_counter()
        if self.verbose >= logger.INFO:
            self.dump_flags()
        if record_dt is None:
            record_dt = t_end
        grid = _record_grid(self.ens.clock, t_end, record_dt)
        rows = []
        ens = self.ens
        params = self.params
        u = self.rng
        nevents = 0
        for t_rec in grid:
            while ensemble_step(ens, params, u, t_rec):
                nevents += 1
            rows.append(self._row(t_rec))
        self.series = pandas.DataFrame(rows, columns=['t', 'beta', 'rho', 'coop_mean', 'def_mean'])
        log.debug('ensemble: %d events up to t = %g, beta = %.6g, rho = %.6g',
                  nevents, t_end, ens.beta, ens.rho)
        log.timer('mean-field ensemble', *cpu0)
        return self.series

    def _row(self, t):
        ens = self.ens
        return [t, ens.beta, ens.rho, float(numpy.mean(ens.coop_wealths)),
                float(numpy.mean(ens.def_wealths))]

    def histogram(self, population='cooperators'):
        return ensemble_histogram(self.ens, population)

def _record_grid(t0, t_end, dt):
    if not dt > 0:
        return [t_end]
    n = max(int(math.ceil((t_end - t0) / dt - 1e-9)), 0)
    return [min(t0 + (i + 1) * dt, t_end) for i in range(n)] or [t_end]


#
# Master equation
#
@dataclass
class WealthLattice:
    '''Law on the lattice w_min + step * {0, .., n-1}.  Mass leaving the
    window is kept in the ``below`` and ``above`` accumulators, where it is
    frozen.'''
    w_min: int
    step: int
    masses: numpy.ndarray
    below: float = 0.
    above: float = 0.

    @property
    def w_max(self):
        return self.w_min + self.step * (len(self.masses) - 1)

    @property
    def grid(self):
        return self.w_min + self.step * numpy.arange(len(self.masses))

    def total(self):
        return float(self.masses.sum()) + self.below + self.above

    def alive_mass(self):
        '''P(wealth > 0); overflow mass above a positive window edge counts
        as alive.'''
        alive = float(self.masses[self.grid > 0].sum())
        if self.w_max > 0:
            alive += self.above
        if self.w_min - self.step > 0:
            alive += self.below
        return alive

    def mean(self):
        return float(numpy.dot(self.grid, self.masses))

    def as_dict(self):
        return {int(w): float(p) for w, p in zip(self.grid, self.masses)}

    def to_frame(self):
        return pandas.DataFrame({'wealth': self.grid, 'mass': self.masses})

    def copy(self):
        return WealthLattice(self.w_min, self.step, self.masses.copy(),
                             self.below, self.above)


def lattice_window(params, t_end, tail=WINDOW_TAIL):
    '''(w_min, w_max, step) of a window that the mass leaves with
    probability below ``tail`` up to t_end.

    Q is the (1 - tail) quantile of the number of games of one individual,
    the window extends Q largest up-jumps above and Q largest down-jumps
    below the support of m0.
    '''
    pm = params.payoffs
    if not pm.is_integral or not all(misc.isintegral(w) for w in params.support):
        raise ConstraintViolation('the master equation needs integer payoffs and wealths')
    pm = pm.as_integers()
    support = [int(w) for w in params.support]
    jumps = [x for x in (pm.R, pm.S, pm.T, 2 * pm.P) if x != 0]
    diffs = [w - support[0] for w in support[1:]]
    step = reduce(math.gcd, [abs(x) for x in jumps + diffs], 0) or 1
    Q = int(scipy.stats.poisson.isf(tail, params.rate * max(t_end, 0))) + 1
    up = max(pm.R, pm.T, 0)
    down = max(pm.S, 2 * pm.P, 0)
    w_max = max(support) + up * Q
    w_min = min(support) - down * Q
    # align on the lattice of the support
    w_min = support[0] - step * ((support[0] - w_min + step - 1) // step)
    w_max = support[0] + step * ((w_max - support[0] + step - 1) // step)
    return w_min, w_max, step

def make_lattice(m0, w_min, w_max, step):
    n = (w_max - w_min) // step + 1
    masses = numpy.zeros(n)
    for w, p in m0:
        k = (int(w) - w_min) // step
        if (int(w) - w_min) % step or not 0 <= k < n:
            raise ConstraintViolation('m0 support point %s outside the lattice' % w)
        masses[k] += p
    return WealthLattice(w_min, step, masses)

def initial_lattices(params, t_end):
    '''Cooperator and defector lattices holding m0 on a common window.'''
    w_min, w_max, step = lattice_window(params, t_end)
    coop = make_lattice(params.m0, w_min, w_max, step)
    return coop, coop.copy()


def _shift(src, k, rate, out):
    '''Move rate*src by k lattice points into out; returns the mass rate
    leaving below and above the window.'''
    n = len(src)
    if k == 0:
        out += rate * src
        return 0., 0.
    if k > 0:
        if k < n:
            out[k:] += rate * src[:n-k]
            return 0., rate * float(src[n-k:].sum())
        return 0., rate * float(src.sum())
    k = -k
    if k < n:
        out[:n-k] += rate * src[k:]
        return rate * float(src[:k].sum()), 0.
    return rate * float(src.sum()), 0.

def _lattice_rhs(lat, up, up_rate, down, down_rate):
    '''Time derivative of one lattice whose positive mass jumps by +up at
    rate up_rate and by -down at rate down_rate.'''
    alive = lat.grid > 0
    src = numpy.where(alive, lat.masses, 0.)
    out = -(up_rate + down_rate) * src
    b0, a0 = _shift(src, up // lat.step, up_rate, out)
    b1, a1 = _shift(src, -(down // lat.step), down_rate, out)
    return WealthLattice(lat.w_min, lat.step, out, b0 + b1, a0 + a1)

def _check_overflow(lat, name):
    overflow = lat.below + lat.above
    if overflow > OVERFLOW_TOL:
        raise WindowOverflow('%s lattice: mass %.3g left the window [%d, %d]'
                             % (name, overflow, lat.w_min, lat.w_max))

def master_rhs(state, params):
    '''Right-hand side of the forward equations.

    For the cooperator law, lattice point y gains
    v beta0 beta_t P(y - R) + v rho0 rho_t P(y + S) from positive sources
    and loses v (beta0 beta_t + rho0 rho_t) P(y) if y > 0.  For the
    defector law the gains are v beta0 beta_t P(y - T) + v rho0 rho_t / 2
    P(y + 2P) and the loss v (beta0 beta_t + rho0 rho_t / 2) P(y) (the zero
    jump of the DD game cancels half of the DD loss).

    Args:
        state : (cooperator WealthLattice, defector WealthLattice)

    Returns:
        (d coop / dt, d def / dt) as WealthLattices
    '''
    coop, dfct = state
    _check_overflow(coop, 'cooperator')
    _check_overflow(dfct, 'defector')
    pm = params.payoffs.as_integers()
    v = params.rate
    gain_b = v * params.beta0 * coop.alive_mass()
    gain_r = v * params.rho0 * dfct.alive_mass()
    dcoop = _lattice_rhs(coop, pm.R, gain_b, pm.S, gain_r)
    ddef = _lattice_rhs(dfct, pm.T, gain_b, 2 * pm.P, .5 * gain_r)
    return dcoop, ddef


class _Packer(object):
    '''Flat vector layout [coop masses, below, above, def masses, below, above].'''
    def __init__(self, coop, dfct):
        self.templates = (coop, dfct)
        self.nc = len(coop.masses)
        self.nd = len(dfct.masses)

    def pack(self, state):
        coop, dfct = state
        return numpy.concatenate([coop.masses, [coop.below, coop.above],
                                  dfct.masses, [dfct.below, dfct.above]])

    def unpack(self, y):
        nc, nd = self.nc, self.nd
        c, d = self.templates
        coop = WealthLattice(c.w_min, c.step, y[:nc], float(y[nc]), float(y[nc+1]))
        off = nc + 2
        dfct = WealthLattice(d.w_min, d.step, y[off:off+nd],
                             float(y[off+nd]), float(y[off+nd+1]))
        return coop, dfct

def _series_row(t, state):
    coop, dfct = state
    return [t, coop.alive_mass(), dfct.alive_mass(), coop.total(), dfct.total(),
            coop.mean(), dfct.mean()]

SERIES_COLUMNS = ['t', 'beta', 'rho', 'coop_mass', 'def_mass', 'coop_mean', 'def_mean']

def integrate_master(state, params, t_end, dt=DEFAULT_DT, method='rk4', record_dt=None,
                     verbose=None):
    '''Integrate the forward equations from ``state`` up to t_end.

    Args:
        method : 'rk4' (default), 'euler' or 'rk45' (scipy's adaptive
            Dormand-Prince, dt is then only the recording step)

    Returns:
        (state at t_end, DataFrame of t, beta, rho, masses and means)

    Raises:
        NegativeMass if a mass drops below -tolerance, WindowOverflow if
        mass leaves the window.
    '''
    if not dt > 0:
        raise ConstraintViolation('dt>0')
    log = logger.new_logger(None, verbose)
    cpu0 = logger.process_clock(), logger.perf_counter()
    packer = _Packer(*state)
    y = packer.pack(state)
    rows = [_series_row(0., state)]
    if t_end <= 0:
        return state, pandas.DataFrame(rows, columns=SERIES_COLUMNS)

    def f(t, y):
        dc, dd = master_rhs(packer.unpack(y), params)
        return packer.pack((dc, dd))

    if record_dt is None:
        record_dt = dt
    if method == 'rk45':
        t_eval = _record_grid(0., t_end, record_dt)
        sol = scipy.integrate.solve_ivp(f, (0., t_end), y, method='RK45', t_eval=t_eval,
                                        rtol=RK45_RTOL, atol=RK45_ATOL)
        if not sol.success:
            raise RuntimeError('RK45 integration failed: %s' % sol.message)
        for k, t in enumerate(sol.t):
            yk = sol.y[:, k]
            _check_negative(yk, t)
            rows.append(_series_row(t, packer.unpack(yk)))
        y = sol.y[:, -1].copy()
    elif method in ('rk4', 'euler'):
        nsteps = int(math.ceil(t_end / dt - 1e-9))
        h = t_end / nsteps
        every = max(int(round(record_dt / h)), 1)
        for k in range(nsteps):
            t = k * h
            if method == 'euler':
                y = y + h * f(t, y)
            else:
                k1 = f(t, y)
                k2 = f(t + .5*h, y + .5*h*k1)
                k3 = f(t + .5*h, y + .5*h*k2)
                k4 = f(t + h, y + h*k3)
                y = y + h/6. * (k1 + 2*k2 + 2*k3 + k4)
            _check_negative(y, t + h)
            if (k + 1) % every == 0 or k + 1 == nsteps:
                rows.append(_series_row((k + 1) * h, packer.unpack(y)))
    else:
        raise ValueError('unknown integration method %r' % method)

    state = packer.unpack(y)
    _check_overflow(state[0], 'cooperator')
    _check_overflow(state[1], 'defector')
    series = pandas.DataFrame(rows, columns=SERIES_COLUMNS)
    log.debug('master equation: t = %g, beta = %.10g, rho = %.10g, mass drift %.3g',
              t_end, state[0].alive_mass(), state[1].alive_mass(),
              max(abs(state[0].total() - 1), abs(state[1].total() - 1)))
    log.timer('master equation', *cpu0)
    return state, series

def _check_negative(y, t):
    low = y.min()
    if low < -MASS_TOL:
        raise NegativeMass('mass %.3g < 0 at t = %g' % (low, t))


class MasterEquation(misc.StreamObject):
    '''Driver of :func:`integrate_master` for a point-mass or general m0.

    >>> me = MasterEquation(MFParams(m0=point_mass(10)), t_end=5.)
    >>> series = me.kernel()
    >>> me.coop.alive_mass()
    '''
    def __init__(self, params, t_end, dt=DEFAULT_DT, method='rk4'):
        self.params = validate(params)
        self.t_end = t_end
        self.dt = dt
        self.method = method
        self.record_dt = None
        self.verbose = getattr(__config__, 'VERBOSE', param.VERBOSE_NOTICE)
        self.coop, self.dfct = initial_lattices(params, t_end)
        self.series = None
        self._keys = set(['params', 't_end', 'dt', 'method', 'record_dt',
                          'verbose', 'stdout'])

    def kernel(self):
        if self.verbose >= logger.INFO:
            self.dump_flags()
        (self.coop, self.dfct), self.series = integrate_master(
            (self.coop, self.dfct), self.params, self.t_end, self.dt, self.method,
            self.record_dt, self.verbose)
        return self.series

    def mass_drift(self):
        return max(abs(self.coop.total() - 1), abs(self.dfct.total() - 1))


def total_variation(lattice, histogram):
    '''Total variation distance between a lattice law and an empirical
    law {wealth: fraction}.  Overflow mass counts as mass off the common
    support.'''
    lat = lattice.as_dict()
    keys = set(lat) | set(histogram)
    tv = sum(abs(lat.get(k, 0.) - histogram.get(k, 0.)) for k in keys)
    return .5 * (tv + lattice.below + lattice.above)


#
# Linearized process
#
class Moments(NamedTuple):
    drift: float
    variance_rate: float
    mean: float
    var: float

class ChebyshevInterval(NamedTuple):
    lower: float
    upper: float
    coverage: float

class SurvivalEstimate(NamedTuple):
    T: float
    p: float
    lower: float
    upper: float
    n_paths: int
    n_survived: int

def drift(params):
    pm = params.payoffs
    return params.rate * (params.beta0 * pm.R - params.rho0 * pm.S)

def variance_rate(params, formula='scaled'):
    '''v (beta0 R^2 + rho0 S^2); ``formula='unscaled'`` drops the factor
    v (the alternative candidate of :func:`adjudicate_variance_rate`).'''
    pm = params.payoffs
    s2 = params.beta0 * pm.R**2 + params.rho0 * pm.S**2
    if formula == 'unscaled':
        return s2
    return params.rate * s2

def analytic_moments(params, t, q0=0., formula='scaled'):
    '''Drift, variance rate, mean and variance of the linearized
    cooperator wealth at time t started from q0.'''
    if t < 0:
        raise ValueError('t >= 0 required')
    m = drift(params)
    s2 = variance_rate(params, formula)
    return Moments(m, s2, q0 + m * t, s2 * t)

def survives(params):
    '''True when the drift hypothesis beta0 R - rho0 S > 0 holds.'''
    pm = params.payoffs
    return params.beta0 * pm.R - params.rho0 * pm.S > 0

def chebyshev_interval(params, q0, t, eta):
    '''[q0 + m t - eta sqrt(s2 t), q0 + m t + eta sqrt(s2 t)], holding the
    linearized wealth with probability at least 1 - eta^-2.'''
    if not eta > 0:
        raise ValueError('eta > 0 required')
    if t < 0:
        raise ValueError('t >= 0 required')
    mom = analytic_moments(params, t, q0)
    half = eta * math.sqrt(mom.var)
    coverage = 1. if t == 0 else max(0., 1 - eta**-2)
    return ChebyshevInterval(mom.mean - half, mom.mean + half, coverage)

def survival_threshold(params, q0, eta, formula='drift'):
    '''Supremum of the levels tau with P(C(t) > tau) >= 1 - eta^-2 for all t.

    ``formula='drift'``: q0 - eta^2 s2 / (4 m).
    ``formula='squared_drift'``: q0 - eta^2 s2 / (4 (beta0 R - rho0 S)^2).
    '''
    m = drift(params)
    if not m > 0:
        raise NonpositiveDrift('drift %g <= 0' % m)
    s2 = variance_rate(params)
    if formula == 'squared_drift':
        pm = params.payoffs
        return q0 - eta**2 * s2 / (4 * (params.beta0 * pm.R - params.rho0 * pm.S)**2)
    return q0 - eta**2 * s2 / (4 * m)


def _jumps(params, u):
    pm = params.payoffs
    r0 = params.rho0
    return numpy.where(u < r0, -pm.S, numpy.where(u < r0 + params.beta0, pm.R, 0))

def linearized_trajectory(q0, params, t_end, seed=0):
    '''One path of the linearized cooperator wealth on [0, t_end].

    Returns:
        (times, values): jump times (starting with 0) and the value after
        each jump.
    '''
    rng = misc.make_rng(seed, 'linearized-path')
    rate = params.rate
    times = [0.]
    if rate > 0:
        t = 0.
        # draw the clock in blocks until it passes t_end
        while True:
            dts = rng.exponential(1. / rate, 256)
            ts = t + numpy.cumsum(dts)
            inside = ts[ts <= t_end]
            times.extend(inside.tolist())
            if len(inside) < len(ts):
                break
            t = ts[-1]
    times = numpy.asarray(times)
    jumps = _jumps(params, rng.random(len(times) - 1))
    values = q0 + numpy.concatenate([[0], numpy.cumsum(jumps)])
    return times, values

def sample_linearized(params, q0, t, n_paths, rng):
    '''Values at time t of n_paths independent linearized paths.'''
    pm = params.payoffs
    n_games = rng.poisson(params.rate * t, n_paths)
    n_minus = rng.binomial(n_games, params.rho0)
    rest = 1. - params.rho0
    p_plus = min(params.beta0 / rest, 1.) if rest > 0 else 0.
    n_plus = rng.binomial(n_games - n_minus, p_plus)
    return q0 + pm.R * n_plus - pm.S * n_minus

def event_averages(params, q0, n_events, n_paths, seed=0):
    '''(C after n_events games - q0) / n_events for n_paths paths; tends to
    beta0 R - rho0 S.'''
    rng = misc.make_rng(seed, 'linearized-lln')
    pm = params.payoffs
    n_minus = rng.binomial(n_events, params.rho0, n_paths)
    rest = 1. - params.rho0
    p_plus = min(params.beta0 / rest, 1.) if rest > 0 else 0.
    n_plus = rng.binomial(n_events - n_minus, p_plus)
    return (pm.R * n_plus - pm.S * n_minus) / float(n_events)

def scan_paths(params, q0, T, n_paths, rng, level=0., stop_on_hit=True):
    '''Follow n_paths linearized paths up to time T.

    Returns:
        (hit_times, running_min): first time each path is <= level (inf if
        never) and the running minimum up to T (up to the hit time when
        stop_on_hit).
    '''
    rate = params.rate
    value = numpy.full(n_paths, float(q0))
    clock = numpy.zeros(n_paths)
    runmin = value.copy()
    hit = numpy.full(n_paths, numpy.inf)
    if q0 <= level:
        hit[:] = 0.
        return hit, runmin
    if rate <= 0:
        return hit, runmin
    active = numpy.arange(n_paths)
    while active.size:
        t_new = clock[active] + rng.exponential(1. / rate, active.size)
        inside = t_new <= T
        active = active[inside]
        if not active.size:
            break
        clock[active] = t_new[inside]
        value[active] += _jumps(params, rng.random(active.size))
        runmin[active] = numpy.minimum(runmin[active], value[active])
        newly = value[active] <= level
        fresh = active[newly & numpy.isinf(hit[active])]
        hit[fresh] = clock[fresh]
        if stop_on_hit:
            active = active[~newly]
    return hit, runmin

def clopper_pearson(k, n, confidence=.95):
    alpha = 1 - confidence
    lower = scipy.stats.beta.ppf(alpha / 2, k, n - k + 1) if k > 0 else 0.
    upper = scipy.stats.beta.ppf(1 - alpha / 2, k + 1, n - k) if k < n else 1.
    return float(lower), float(upper)

def survival_probability_estimate(params, q0, T_horizon, n_paths, seed=0, confidence=.95):
    '''Monte Carlo estimate of P(C(t) > 0 for all t <= T) with a
    Clopper-Pearson interval.

    ``T_horizon`` may be a sequence; all horizons are evaluated on the
    same paths, so the estimates are nonincreasing in T.

    Returns:
        SurvivalEstimate, or a list of them for a sequence of horizons
    '''
    if n_paths < 1:
        raise ConstraintViolation('n_paths>=1')
    scalar = numpy.ndim(T_horizon) == 0
    horizons = [float(T_horizon)] if scalar else sorted(float(T) for T in T_horizon)
    rng = misc.make_rng(seed, 'linearized-survival')
    hit, _ = scan_paths(params, q0, horizons[-1], n_paths, rng)
    out = []
    for T in horizons:
        k = int(numpy.count_nonzero(hit > T))
        lo, hi = clopper_pearson(k, n_paths, confidence)
        out.append(SurvivalEstimate(T, k / n_paths, lo, hi, n_paths, k))
    return out[0] if scalar else out


class VarianceAdjudication(NamedTuple):
    empirical_rate: float
    stderr: float
    candidates: dict
    matches: tuple

def adjudicate_variance_rate(params, q0, t, n_paths, seed=0, rel_tol=.05):
    '''Compare the empirical variance rate Var(C(t)) / t with the two
    candidate formulas v (beta0 R^2 + rho0 S^2) ('scaled') and
    beta0 R^2 + rho0 S^2 ('unscaled').'''
    rng = misc.make_rng(seed, 'linearized-variance')
    x = sample_linearized(params, q0, t, n_paths, rng)
    var = float(numpy.var(x, ddof=1))
    m4 = float(numpy.mean((x - x.mean())**4))
    stderr = math.sqrt(max(m4 - var**2, 0.) / n_paths) / t
    rate = var / t
    candidates = {'scaled': variance_rate(params, 'scaled'),
                  'unscaled': variance_rate(params, 'unscaled')}
    matches = tuple(k for k, c in candidates.items()
                    if c > 0 and abs(rate - c) <= rel_tol * c)
    return VarianceAdjudication(rate, stderr, candidates, matches)
