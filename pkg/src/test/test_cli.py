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

import os
import json
import shutil
import tempfile
import unittest
from dpdsim import cli
from dpdsim import chkfile
from dpdsim import parameters as param
from dpdsim.exceptions import ParseError, UnknownKey, ZeroRate, ConfigError, OutputError

def setUpModule():
    global tmpdir
    tmpdir = tempfile.mkdtemp()

def tearDownModule():
    global tmpdir
    shutil.rmtree(tmpdir)
    del tmpdir

def outdir(name):
    return os.path.join(tmpdir, name)

def write_text(name, text):
    path = os.path.join(tmpdir, name)
    with open(path, 'w') as f:
        f.write(text)
    return path

def read_bytes(path):
    with open(path, 'rb') as f:
        return f.read()

def load_manifest(out):
    with open(os.path.join(out, cli.MANIFEST)) as f:
        return json.load(f)


class KnowValues(unittest.TestCase):
    def test_preset_with_seed(self):
        cfg = cli.parse_config(overrides={'seed': 42}, preset='figure2')
        self.assertEqual(cfg.seed, 42)
        self.assertEqual(cfg.preset, 'figure2')
        self.assertEqual(cfg['K'], 10**7)
        self.assertEqual(cfg['m'], 7)
        self.assertEqual(cfg['addressing'], param.ADDRESS_ALIVE)
        self.assertFalse(cfg.strict)
        self.assertEqual(cfg.events, 10000)
        self.assertEqual(cfg['batch_size'], 100)
        # flags win over the preset
        cfg = cli.parse_config(overrides={'events': 50}, preset='figure2')
        self.assertEqual(cfg.events, 50)

    def test_unknown_key(self):
        path = write_text('unknown.json', '{\n  "seed": 1,\n  "wealths": 10\n}\n')
        with self.assertRaises(UnknownKey) as ctx:
            cli.parse_config(path)
        self.assertEqual(ctx.exception.key, 'wealths')
        self.assertEqual(ctx.exception.line, 3)
        self.assertIn('wealths', str(ctx.exception))
        self.assertEqual(ctx.exception.exit_code, 2)
        self.assertEqual(cli.main(['run', '--config', path, '--verbose', '0']), 2)

    def test_parse_errors(self):
        path = write_text('broken.json', '{\n  "seed": 1,\n  "m" 7\n}\n')
        with self.assertRaises(ParseError) as ctx:
            cli.parse_config(path)
        self.assertEqual(ctx.exception.line, 3)
        path = write_text('badtype.json', '{\n  "seed": 1,\n  "events": "many"\n}\n')
        with self.assertRaises(ParseError) as ctx:
            cli.parse_config(path)
        self.assertEqual((ctx.exception.line, ctx.exception.key), (3, 'events'))
        self.assertRaises(ParseError, cli.parse_config, overrides={'mode': 'lattice'})
        self.assertRaises(ParseError, cli.parse_config, preset='figure3')

    def test_emit_parse_round_trip(self):
        for cfg in (cli.parse_config(),
                    cli.parse_config(overrides={'seed': 42}, preset='figure2'),
                    cli.parse_config(overrides={'mode': 'linearized', 'beta0': .6,
                                                'rho0': .4, 'v': 1, 'eta': [2, 3]})):
            path = outdir('emitted.json')
            cli.emit_config(cfg, path)
            self.assertEqual(cli.parse_config(path), cfg)

    def test_validate_command(self):
        path = write_text('valid.json', '{"mode": "ghost", "events": 20}\n')
        self.assertEqual(cli.main(['validate', '--config', path, '--verbose', '0']), 0)

    def test_number_list(self):
        self.assertEqual(cli._number_list('0,10,100'), [0, 10, 100])
        self.assertEqual(cli._number_list('0:100:25'), [0, 25, 50, 75, 100])
        self.assertEqual(cli._number_list('.5, 2'), [.5, 2])

    def test_linearized_header(self):
        out = outdir('linearized')
        status = cli.main(['linearized', '--beta0', '0.6', '--rho0', '0.4', '--R', '3',
                           '--S', '2', '--v', '1', '--n-paths', '2000',
                           '--horizons', '10,20', '--out', out, '--verbose', '0'])
        self.assertEqual(status, 0)
        man = load_manifest(out)
        self.assertAlmostEqual(man['header']['drift'], 1.0, 12)
        self.assertAlmostEqual(man['header']['variance_rate'], .6*9 + .4*4, 12)
        self.assertEqual(man['mode'], 'linearized')
        self.assertEqual(sorted(man['outputs']), ['moments.csv', 'survival.csv'])
        surv = open(os.path.join(out, 'survival.csv')).read().splitlines()
        self.assertEqual(len(surv), 3)

    def test_sweep_one_cell(self):
        out = outdir('sweep')
        status = cli.main(['sweep', '--preset', 'figure2', '--R-values', '100',
                           '--S-values', '2', '--batch-size', '2', '--events', '200',
                           '--out', out, '--verbose', '0'])
        self.assertEqual(status, 0)
        self.assertEqual(sorted(os.listdir(out)),
                         ['heatmap.csv', 'heatmap_matrix.csv', cli.MANIFEST])
        lines = open(os.path.join(out, 'heatmap.csv')).read().splitlines()
        self.assertEqual(len(lines), 2)
        man = load_manifest(out)
        self.assertEqual(man['config']['R_values'], [100])
        self.assertEqual(man['header'], {'cells': 1})
        self.assertIn('numpy', man['versions'])

    def test_zero_rate(self):
        out = outdir('zero')
        status = cli.main(['run', '--d', '0', '--v', '0', '--b', '0', '--events', '10',
                           '--out', out, '--verbose', '0'])
        self.assertEqual(status, ZeroRate.exit_code)
        self.assertNotEqual(status, 0)

    def test_output_error(self):
        path = write_text('not_a_directory', 'x')
        status = cli.main(['run', '--events', '5', '--out', path, '--verbose', '0'])
        self.assertEqual(status, OutputError.exit_code)
        self.assertEqual(status, 10)

    def test_mode_mismatch(self):
        self.assertEqual(cli.main(['run', '--mode', 'sweep', '--verbose', '0']),
                         ConfigError.exit_code)

    def test_constraint_exit_code(self):
        self.assertEqual(cli.main(['run', '--w0', '20', '--out', outdir('bad'),
                                   '--verbose', '0']), 3)

    def test_grid_payoffs_strict_flag(self):
        argv = ['run', '--preset', 'figure2', '--R', '0', '--S', '100', '--T', '1', '--P', '99',
                '--events', '200', '--verbose', '0']
        self.assertEqual(cli.main(argv + ['--out', outdir('cell')]), 0)
        self.assertFalse(load_manifest(outdir('cell'))['config']['strict'])
        self.assertEqual(cli.main(argv + ['--strict', '--out', outdir('cell_strict')]), 3)
        self.assertEqual(cli.main(['run', '--R', '0', '--T', '1', '--out', outdir('strict'),
                                   '--verbose', '0']), 3)
        self.assertEqual(cli.main(['run', '--R', '0', '--T', '1', '--no-strict', '--events', '20',
                                   '--out', outdir('no_strict'), '--verbose', '0']), 0)

    def test_determinism(self):
        argv = ['run', '--m', '3', '--K', '12', '--n-coop', '4', '--n-def', '4',
                '--events', '500', '--seed', '7', '--keep-events', '--verbose', '0']
        self.assertEqual(cli.main(argv + ['--out', outdir('det1')]), 0)
        self.assertEqual(cli.main(argv + ['--out', outdir('det2')]), 0)
        for name in ('trajectory.csv', 'final.csv', 'events.csv'):
            self.assertEqual(read_bytes(os.path.join(outdir('det1'), name)),
                             read_bytes(os.path.join(outdir('det2'), name)))
        man = load_manifest(outdir('det1'))
        self.assertEqual(man['seed'], 7)
        self.assertEqual(man['header']['events'], 500)
        traj = open(os.path.join(outdir('det1'), 'trajectory.csv')).read().splitlines()
        self.assertEqual(len(traj), 502)
        self.assertTrue(traj[0].startswith('event,clock,kind,coop_alive'))

    def test_ghost_and_chkfile(self):
        out = outdir('ghost')
        h5 = os.path.join(tmpdir, 'ghost.h5')
        status = cli.main(['run', '--mode', 'ghost', '--m', '3', '--K', '12', '--events', '100',
                           '--n-coop', '4', '--n-def', '4', '--stride', '10',
                           '--chkfile', h5, '--out', out, '--verbose', '0'])
        self.assertEqual(status, 0)
        self.assertEqual(load_manifest(out)['header']['flavor'], param.FLAVOR_GHOST)
        records = chkfile.load_records(h5)
        self.assertEqual(list(records['event']), list(range(0, 101, 10)))
        self.assertEqual(chkfile.load(h5, 'trajectory/n_events'), 100)
        self.assertEqual(chkfile.load(h5, 'trajectory/stop_reason'), 'max_events')

    def test_meanfield_master(self):
        out = outdir('master')
        status = cli.main(['meanfield', '--v', '1', '--t-end', '1', '--record-dt', '.5',
                           '--out', out, '--verbose', '0'])
        self.assertEqual(status, 0)
        man = load_manifest(out)
        self.assertEqual(man['mode'], 'meanfield-master')
        self.assertLess(man['header']['mass_drift'], 1e-8)
        self.assertEqual(sorted(man['outputs']), ['lattice.csv', 'series.csv'])

    def test_meanfield_ensemble(self):
        out = outdir('ensemble')
        status = cli.main(['meanfield', '--mode', 'meanfield-ensemble', '--v', '1',
                           '--n-ens', '200', '--t-end', '1', '--out', out, '--verbose', '0'])
        self.assertEqual(status, 0)
        header = load_manifest(out)['header']
        self.assertTrue(0 <= header['beta'] <= 1)
        self.assertTrue(os.path.isfile(os.path.join(out, 'histogram.csv')))


if __name__ == '__main__':
    print('Full Tests for cli')
    unittest.main()
