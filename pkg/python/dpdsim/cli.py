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
Command line interface

    dpdsim run        [--mode spatial|ghost]  ...
    dpdsim sweep      [--preset figure2] ...
    dpdsim meanfield  [--mode meanfield-master|meanfield-ensemble] ...
    dpdsim linearized ...
    dpdsim validate   --config FILE

A run configuration is a flat JSON object.  The values are merged in the
order built-in defaults, preset, configuration file, command line flags
(later wins).  Unknown keys are errors.  :func:`emit_config` writes a
configuration back in the same format.

Every run writes its CSV files and a ``manifest.json`` (configuration,
seed, versions, wall time, list of outputs) to the output directory, which
defaults to ``$DPDSIM_OUTPUT_DIR``.  Errors are reported with the exit code
of their category, see :mod:`dpdsim.exceptions`.
'''

import os
import re
import sys
import json
import argparse
from dataclasses import dataclass, field, fields

import numpy
import pandas

from dpdsim import logger
from dpdsim import misc
from dpdsim import parameters as param
from dpdsim import model
from dpdsim import engine
from dpdsim import meanfield
from dpdsim import sweep
from dpdsim import chkfile
from dpdsim import __config__
from dpdsim.exceptions import DPDError, ConfigError, ParseError, UnknownKey, OutputError

MODES = ('spatial', 'ghost', 'meanfield-ensemble', 'meanfield-master', 'linearized', 'sweep')
COMMANDS = {
    'run': ('spatial', 'ghost'),
    'sweep': ('sweep',),
    'meanfield': ('meanfield-master', 'meanfield-ensemble'),
    'linearized': ('linearized',),
    'validate': MODES,
}

MANIFEST = 'manifest.json'

RUN_DEFAULTS = {
    'mode': 'spatial',
    'seed': 0,
    'out': None,
    'events': 10000,
    'stride': 1,
    'preset': None,
    'parallelism': 1,
    'chkfile': None,
    'check': False,
    'keep_events': False,
    'strict': True,
}

PARAM_DEFAULTS = {
    # spatial system
    'm': 7, 'K': 20, 'd': 5, 'v': 5, 'b': 5, 'w0': 3, 'wc': 10,
    'addressing': param.ADDRESS_SLOTS, 'ghost_scope': 'cooperators',
    'T': 4, 'R': 3, 'S': 2, 'P': 1,
    'n_coop': 10, 'n_def': 10, 'wealth': 10, 'positions': None,
    # mean field
    'beta0': .5, 'rho0': .5, 'q0': 10, 'rate_convention': 'full',
    'n_ens': 10000, 't_end': 5., 'dt': 1e-2, 'method': 'rk4', 'record_dt': None,
    # linearized process
    'n_paths': 100000, 't': 50., 'eta': [2, 3, 5], 'horizons': [10, 100, 1000],
    # sweep
    'R_values': list(sweep.FIGURE2_GRID), 'S_values': list(sweep.FIGURE2_GRID),
    'batch_size': sweep.FIGURE2_BATCH, 't_offset': 1, 'p_offset': -1,
}

KEY_TYPES = {
    'mode': 'str', 'seed': 'int', 'out': 'str', 'events': 'int', 'stride': 'int',
    'preset': 'str', 'parallelism': 'int', 'chkfile': 'str', 'check': 'bool',
    'keep_events': 'bool', 'strict': 'bool',
    'm': 'int', 'K': 'int', 'd': 'num', 'v': 'num', 'b': 'num', 'w0': 'num', 'wc': 'num',
    'addressing': 'str', 'ghost_scope': 'str',
    'T': 'num', 'R': 'num', 'S': 'num', 'P': 'num',
    'n_coop': 'int', 'n_def': 'int', 'wealth': 'num', 'positions': 'list',
    'beta0': 'num', 'rho0': 'num', 'q0': 'num', 'rate_convention': 'str',
    'n_ens': 'int', 't_end': 'num', 'dt': 'num', 'method': 'str', 'record_dt': 'num',
    'n_paths': 'int', 't': 'num', 'eta': 'list', 'horizons': 'list',
    'R_values': 'list', 'S_values': 'list', 'batch_size': 'int',
    't_offset': 'num', 'p_offset': 'num',
}

def _preset_figure2():
    p = sweep.FIGURE2.params
    return {'m': p.m, 'K': p.K, 'd': p.d, 'v': p.v, 'b': p.b, 'w0': p.w0, 'wc': p.wc,
            'addressing': p.addressing,
            'strict': False,
            'n_coop': sweep.FIGURE2.n_coop, 'n_def': sweep.FIGURE2.n_def,
            'wealth': sweep.FIGURE2.wealth,
            'events': sweep.FIGURE2_BUDGET, 'batch_size': sweep.FIGURE2_BATCH,
            'R_values': list(sweep.FIGURE2_GRID), 'S_values': list(sweep.FIGURE2_GRID)}

PRESETS = {'figure2': _preset_figure2}


@dataclass
class RunConfig:
    mode: str = 'spatial'
    seed: int = 0
    out: str = None
    events: int = 10000
    stride: int = 1
    preset: str = None
    parallelism: int = 1
    chkfile: str = None
    check: bool = False
    keep_events: bool = False
    strict: bool = True
    params: dict = field(default_factory=lambda: dict(PARAM_DEFAULTS))

    def to_dict(self):
        out = {f.name: getattr(self, f.name) for f in fields(self) if f.name != 'params'}
        out.update(self.params)
        return out

    @classmethod
    def from_dict(cls, dic):
        run = {k: dic[k] for k in RUN_DEFAULTS}
        params = {k: dic[k] for k in PARAM_DEFAULTS}
        return cls(params=params, **run)

    def __getitem__(self, key):
        if key in self.params:
            return self.params[key]
        return getattr(self, key)


#
# Parsing
#
def _key_line(text, key):
    if text is None:
        return None
    pattern = re.compile(r'"%s"\s*:' % re.escape(key))
    for n, line in enumerate(text.splitlines(), 1):
        if pattern.search(line):
            return n
    return None

def _is_number(x):
    return isinstance(x, (int, float, numpy.integer, numpy.floating)) and not isinstance(x, bool)

def _check_value(key, value, text=None):
    kind = KEY_TYPES[key]
    if value is None:
        if RUN_DEFAULTS.get(key, PARAM_DEFAULTS.get(key)) is None:
            return value
        raise ParseError('null value', _key_line(text, key), key)
    if kind == 'int':
        if not (_is_number(value) and float(value).is_integer()):
            raise ParseError('expected an integer, got %r' % (value,), _key_line(text, key), key)
        return int(value)
    elif kind == 'num':
        if not _is_number(value):
            raise ParseError('expected a number, got %r' % (value,), _key_line(text, key), key)
        return value
    elif kind == 'bool':
        if not isinstance(value, bool):
            raise ParseError('expected true or false, got %r' % (value,), _key_line(text, key), key)
        return value
    elif kind == 'str':
        if not isinstance(value, str):
            raise ParseError('expected a string, got %r' % (value,), _key_line(text, key), key)
        return value
    else:
        if not isinstance(value, (list, tuple)):
            raise ParseError('expected a list, got %r' % (value,), _key_line(text, key), key)
        if key == 'positions':
            return [[int(x), int(y)] for x, y in value]
        if not all(_is_number(x) for x in value):
            raise ParseError('expected a list of numbers', _key_line(text, key), key)
        return list(value)

def _check_keys(dic, text=None):
    for key in dic:
        if key not in KEY_TYPES:
            raise UnknownKey(key, _key_line(text, key))
    return {k: _check_value(k, v, text) for k, v in dic.items()}

def read_config_file(path):
    '''Load a JSON configuration file into a checked dict.'''
    try:
        with open(path, 'r') as f:
            text = f.read()
    except IOError as e:
        raise ConfigError('cannot read config file %s: %s' % (path, e))
    try:
        dic = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno)
    if not isinstance(dic, dict):
        raise ParseError('a config file holds one JSON object', line=1)
    return _check_keys(dic, text)

def parse_config(path=None, overrides=None, preset=None, base=None):
    '''Merge defaults, preset, config file and overrides into a RunConfig.

    Args:
        path : JSON config file or None
        overrides : dict of values given on the command line
        preset : preset name; the overrides or the file may name one too
        base : dict of defaults taking precedence over the built-in ones
            (the command's default mode)

    Raises:
        ParseError, UnknownKey, ConfigError
    '''
    overrides = _check_keys(dict(overrides or {}))
    filed = read_config_file(path) if path is not None else {}
    dic = dict(RUN_DEFAULTS)
    dic.update(PARAM_DEFAULTS)
    dic.update(_check_keys(dict(base or {})))

    name = overrides.get('preset') or filed.get('preset') or preset
    if name is not None:
        if name not in PRESETS:
            raise ParseError('unknown preset %r' % name, key='preset')
        dic.update(PRESETS[name]())
        dic['preset'] = name
    dic.update(filed)
    dic.update(overrides)
    if name is not None:
        dic['preset'] = name
    cfg = RunConfig.from_dict(dic)
    validate_config(cfg)
    return cfg

def validate_config(cfg):
    if cfg.mode not in MODES:
        raise ParseError('unknown mode %r' % cfg.mode, key='mode')
    if not 0 <= cfg.seed < 2**64:
        raise ParseError('seed must be a 64-bit unsigned integer', key='seed')
    if cfg.events < 0:
        raise ParseError('events must be >= 0', key='events')
    if cfg.stride < 0:
        raise ParseError('stride must be >= 0', key='stride')
    mode = cfg.mode
    if mode in ('spatial', 'ghost'):
        model.validate(sim_params(cfg), payoff_matrix(cfg), strict=cfg.strict)
    elif mode in ('meanfield-ensemble', 'meanfield-master', 'linearized'):
        meanfield.validate(mf_params(cfg))
    else:
        sweep_spec(cfg)
    return cfg

def emit_config(cfg, path=None):
    '''JSON text of a configuration, written to ``path`` if given.'''
    text = json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + '\n'
    if path is not None:
        with open(path, 'w') as f:
            f.write(text)
    return text


#
# Configuration -> model objects
#
def sim_params(cfg):
    p = cfg.params
    flavor = param.FLAVOR_GHOST if cfg.mode == 'ghost' else param.FLAVOR_TRUE
    return model.SimParams(m=p['m'], K=p['K'], d=p['d'], v=p['v'], b=p['b'],
                           w0=p['w0'], wc=p['wc'], flavor=flavor,
                           addressing=p['addressing'], ghost_scope=p['ghost_scope'])

def payoff_matrix(cfg):
    p = cfg.params
    return model.PayoffMatrix(p['T'], p['R'], p['S'], p['P'])

def mf_params(cfg):
    p = cfg.params
    return meanfield.MFParams(beta0=p['beta0'], rho0=p['rho0'], v=p['v'],
                              payoffs=payoff_matrix(cfg),
                              m0=meanfield.point_mass(p['q0']),
                              rate_convention=p['rate_convention'])

def _preset(cfg):
    p = cfg.params
    positions = p['positions']
    if positions is not None:
        positions = tuple(tuple(xy) for xy in positions)
    return sweep.Preset(sim_params(cfg), p['n_coop'], p['n_def'], p['wealth'], positions)

def sweep_spec(cfg, event_log_dir=None):
    p = cfg.params
    return sweep.SweepSpec(R_values=p['R_values'], S_values=p['S_values'],
                           batch_size=p['batch_size'], preset=_preset(cfg),
                           event_budget=cfg.events, master_seed=cfg.seed,
                           t_offset=p['t_offset'], p_offset=p['p_offset'],
                           event_log_dir=event_log_dir)


#
# Modes.  Each returns (list of output paths, header dict).
#
def _run_spatial(cfg, out, log):
    params = sim_params(cfg)
    payoffs = payoff_matrix(cfg)
    config = _preset(cfg).initial_configuration(misc.make_rng(cfg.seed, 'init'))
    eng = engine.Engine(config, payoffs, seed=cfg.seed)
    eng.set(stride=cfg.stride, check=cfg.check, keep_events=cfg.keep_events,
            verbose=log.verbose,
            observables=engine.DEFAULT_OBSERVABLES + ('min_coop_wealth', 'min_def_wealth'))
    traj = eng.kernel(engine.StopCondition(max_events=cfg.events))
    outputs = [traj.to_csv(os.path.join(out, 'trajectory.csv'))]
    final = traj.state.config
    frame = pandas.DataFrame({
        'slot': final.born,
        'x': [final.xs[i] for i in final.born],
        'y': [final.ys[i] for i in final.born],
        'wealth': [final.wealth[i] for i in final.born],
        'strategy': [model.Strategy(final.strategy[i]).letter for i in final.born]})
    outputs.append(misc.write_csv(frame, os.path.join(out, 'final.csv')))
    if cfg.keep_events:
        ev = pandas.DataFrame(traj.events, columns=engine.Event._fields)
        outputs.append(misc.write_csv(ev, os.path.join(out, 'events.csv')))
    if cfg.chkfile:
        chkfile.dump_trajectory(cfg.chkfile, traj)
    nc, nd = traj.records[['coop_alive', 'def_alive']].iloc[-1]
    header = {'flavor': params.flavor, 'events': traj.n_events, 'clock': traj.state.clock,
              'coop_alive': int(nc), 'def_alive': int(nd), 'stop_reason': traj.stop_reason}
    log.note('%s dynamics: %d events, t = %.6g, cooperators alive %d, defectors alive %d',
             params.flavor, traj.n_events, traj.state.clock, nc, nd)
    return outputs, header

def _run_master(cfg, out, log):
    params = mf_params(cfg)
    p = cfg.params
    me = meanfield.MasterEquation(params, p['t_end'], p['dt'], p['method'])
    me.set(record_dt=p['record_dt'], verbose=log.verbose)
    series = me.kernel()
    outputs = [misc.write_csv(series, os.path.join(out, 'series.csv'))]
    lat = pandas.DataFrame({'wealth': me.coop.grid, 'coop_mass': me.coop.masses,
                            'def_mass': me.dfct.masses})
    outputs.append(misc.write_csv(lat, os.path.join(out, 'lattice.csv')))
    if cfg.chkfile:
        chkfile.dump_lattices(cfg.chkfile, me.coop, me.dfct)
    header = {'beta': me.coop.alive_mass(), 'rho': me.dfct.alive_mass(),
              'mass_drift': me.mass_drift()}
    log.note('master equation at t = %g: beta = %.10g, rho = %.10g, mass drift %.3g',
             p['t_end'], header['beta'], header['rho'], header['mass_drift'])
    return outputs, header

def _run_ensemble(cfg, out, log):
    params = mf_params(cfg)
    p = cfg.params
    ens = meanfield.Ensemble(params, p['n_ens'], cfg.seed)
    ens.set(verbose=log.verbose)
    series = ens.kernel(p['t_end'], p['record_dt'])
    outputs = [misc.write_csv(series, os.path.join(out, 'series.csv'))]
    rows = []
    for pop in ('cooperators', 'defectors'):
        for w, frac in sorted(ens.histogram(pop).items()):
            rows.append((pop, w, frac))
    hist = pandas.DataFrame(rows, columns=['population', 'wealth', 'fraction'])
    outputs.append(misc.write_csv(hist, os.path.join(out, 'histogram.csv')))
    header = {'beta': ens.ens.beta, 'rho': ens.ens.rho}
    log.note('ensemble at t = %g: beta = %.6g, rho = %.6g', p['t_end'], ens.ens.beta, ens.ens.rho)
    return outputs, header

def _run_linearized(cfg, out, log):
    params = mf_params(cfg)
    p = cfg.params
    q0, t = p['q0'], p['t']
    mom = meanfield.analytic_moments(params, t, q0)
    log.note('linearized wealth: drift m = %.10g, variance rate = %.10g', mom.drift,
             mom.variance_rate)
    header = {'drift': mom.drift, 'variance_rate': mom.variance_rate}
    if mom.drift > 0:
        header['threshold'] = {str(eta): meanfield.survival_threshold(params, q0, eta)
                               for eta in p['eta']}

    rng = misc.make_rng(cfg.seed, 'cli-linearized')
    x = meanfield.sample_linearized(params, q0, t, p['n_paths'], rng)
    rows = []
    for eta in p['eta']:
        iv = meanfield.chebyshev_interval(params, q0, t, eta)
        inside = numpy.count_nonzero((x >= iv.lower) & (x <= iv.upper)) / len(x)
        rows.append((t, eta, mom.mean, mom.var, iv.lower, iv.upper, iv.coverage, inside,
                     float(x.mean()), float(x.var(ddof=1))))
    moments = pandas.DataFrame(rows, columns=['t', 'eta', 'mean', 'var', 'lower', 'upper',
                                              'coverage', 'empirical_coverage',
                                              'empirical_mean', 'empirical_var'])
    outputs = [misc.write_csv(moments, os.path.join(out, 'moments.csv'))]

    est = meanfield.survival_probability_estimate(params, q0, p['horizons'], p['n_paths'],
                                                  seed=cfg.seed)
    surv = pandas.DataFrame(est, columns=meanfield.SurvivalEstimate._fields)
    outputs.append(misc.write_csv(surv, os.path.join(out, 'survival.csv')))
    return outputs, header

def _run_sweep(cfg, out, log):
    log_dir = os.path.join(out, 'events') if cfg.keep_events else None
    spec = sweep_spec(cfg, log_dir)
    sw = sweep.Sweep(spec)
    sw.set(parallelism=cfg.parallelism, verbose=log.verbose)
    grid = sw.kernel()
    outputs = list(sweep.emit_heatmap(grid, os.path.join(out, 'heatmap.csv')))
    if cfg.chkfile:
        chkfile.dump_grid(cfg.chkfile, grid.cells)
    header = {'cells': len(grid)}
    log.note('sweep: %d cells x %d runs written to %s', len(grid), spec.batch_size, outputs[0])
    return outputs, header

RUNNERS = {
    'spatial': _run_spatial,
    'ghost': _run_spatial,
    'meanfield-master': _run_master,
    'meanfield-ensemble': _run_ensemble,
    'linearized': _run_linearized,
    'sweep': _run_sweep,
}

def output_dir(cfg):
    return cfg.out or getattr(__config__, 'OUTPUT_DIR', '.')

def write_manifest(cfg, out, outputs, header, cpu0, wall0):
    manifest = {'config': cfg.to_dict(),
                'mode': cfg.mode,
                'seed': cfg.seed,
                'versions': misc.versions(),
                'cpu_time': logger.process_clock() - cpu0,
                'wall_time': logger.perf_counter() - wall0,
                'header': header,
                'outputs': [os.path.relpath(x, out) for x in outputs]}
    path = os.path.join(out, MANIFEST)
    with open(path, 'w') as f:
        json.dump(manifest, f, indent=2, sort_keys=True, default=_jsonable)
        f.write('\n')
    return path

def _jsonable(x):
    if isinstance(x, numpy.integer):
        return int(x)
    if isinstance(x, numpy.floating):
        return float(x)
    raise TypeError(repr(x))

def dispatch(cfg, verbose=None):
    '''Run the mode of ``cfg`` and write its outputs and manifest.

    Returns:
        exit status, 0 on success, the exit code of the error category
        otherwise
    '''
    log = logger.new_logger(None, verbose)
    cpu0, wall0 = logger.process_clock(), logger.perf_counter()
    out = output_dir(cfg)
    try:
        validate_config(cfg)
        if not os.path.isdir(out):
            os.makedirs(out)
        log.note('dpdsim %s, seed %d, output %s', cfg.mode, cfg.seed, out)
        outputs, header = RUNNERS[cfg.mode](cfg, out, log)
        write_manifest(cfg, out, outputs, header, cpu0, wall0)
    except DPDError as e:
        log.error('%s: %s', e.category, e)
        return e.exit_code
    except (OSError, ValueError) as e:
        log.error('%s: %s', OutputError.category, e)
        return OutputError.exit_code
    log.timer('dpdsim %s' % cfg.mode, cpu0, wall0)
    return 0


#
# Command line
#
def _number(s):
    x = float(s)
    if x.is_integer() and re.fullmatch(r'[+-]?\d+', s.strip()):
        return int(s)
    return x

def _number_list(s):
    '''"a,b,c" or the inclusive range "start:stop:step".'''
    s = s.strip()
    if ':' in s:
        parts = [_number(x) for x in s.split(':')]
        if len(parts) == 2:
            parts.append(1)
        start, stop, step = parts
        if not step > 0:
            raise argparse.ArgumentTypeError('step must be positive')
        n = int(round((stop - start) / step))
        return [start + k * step for k in range(n + 1) if start + k * step <= stop]
    return [_number(x) for x in s.split(',') if x.strip()]

# (flag, key, type)
FLAGS = (
    ('--seed', 'seed', int), ('--out', 'out', str), ('--events', 'events', int),
    ('--stride', 'stride', int), ('--parallelism', 'parallelism', int),
    ('--chkfile', 'chkfile', str),
    ('--m', 'm', int), ('--K', 'K', int), ('--d', 'd', _number), ('--v', 'v', _number),
    ('--b', 'b', _number), ('--w0', 'w0', _number), ('--wc', 'wc', _number),
    ('--addressing', 'addressing', str), ('--ghost-scope', 'ghost_scope', str),
    ('--T', 'T', _number), ('--R', 'R', _number), ('--S', 'S', _number), ('--P', 'P', _number),
    ('--n-coop', 'n_coop', int), ('--n-def', 'n_def', int), ('--wealth', 'wealth', _number),
    ('--beta0', 'beta0', _number), ('--rho0', 'rho0', _number), ('--q0', 'q0', _number),
    ('--rate-convention', 'rate_convention', str), ('--n-ens', 'n_ens', int),
    ('--t-end', 't_end', _number), ('--dt', 'dt', _number), ('--method', 'method', str),
    ('--record-dt', 'record_dt', _number),
    ('--n-paths', 'n_paths', int), ('--t', 't', _number), ('--eta', 'eta', _number_list),
    ('--horizons', 'horizons', _number_list),
    ('--R-values', 'R_values', _number_list), ('--S-values', 'S_values', _number_list),
    ('--batch-size', 'batch_size', int), ('--t-offset', 't_offset', _number),
    ('--p-offset', 'p_offset', _number),
)

def build_parser():
    parser = argparse.ArgumentParser(
        prog='dpdsim', allow_abbrev=False,
        description="Demographic Prisoner's Dilemma simulations")
    parser.add_argument('command', choices=sorted(COMMANDS))
    parser.add_argument('--mode', dest='mode', choices=MODES, default=None)
    parser.add_argument('--config', dest='config', default=None, help='JSON run configuration')
    parser.add_argument('--preset', dest='preset', choices=sorted(PRESETS), default=None)
    parser.add_argument('--check', dest='check', action='store_const', const=True, default=None,
                        help='assert the per-event invariants of the true dynamics')
    parser.add_argument('--keep-events', dest='keep_events', action='store_const', const=True,
                        default=None, help='write the event log')
    parser.add_argument('--strict', dest='strict', action='store_const', const=True,
                        default=None, help='require T > R > 0 and S > P > 0')
    parser.add_argument('--no-strict', dest='strict', action='store_const', const=False,
                        help='only require 0 < w0 < wc and nonnegative rates')
    parser.add_argument('--verbose', dest='verbose', type=int, default=None)
    for flag, key, typ in FLAGS:
        parser.add_argument(flag, dest=key, type=typ, default=None)
    return parser

def config_from_args(args):
    overrides = {}
    for key in list(RUN_DEFAULTS) + list(PARAM_DEFAULTS):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    base = {'mode': COMMANDS[args.command][0]}
    cfg = parse_config(args.config, overrides, base=base)
    if cfg.mode not in COMMANDS[args.command]:
        raise ConfigError('mode %s is not available with the %s command'
                          % (cfg.mode, args.command))
    return cfg

def main(argv=None):
    args = build_parser().parse_args(argv)
    verbose = args.verbose
    if verbose is None:
        verbose = getattr(__config__, 'VERBOSE', logger.NOTE)
    log = logger.new_logger(None, verbose)
    try:
        cfg = config_from_args(args)
    except DPDError as e:
        log.error('%s: %s', e.category, e)
        return e.exit_code
    if args.command == 'validate':
        log.note('%s', emit_config(cfg).rstrip())
        return 0
    return dispatch(cfg, verbose)

if __name__ == '__main__':
    sys.exit(main())
