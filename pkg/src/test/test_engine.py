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
import math
import unittest
import numpy
import pandas
from dpdsim import model
from dpdsim import engine
from dpdsim import observables
from dpdsim import sweep
from dpdsim import parameters as param
from dpdsim.model import PayoffMatrix, SimParams, Particle, COOPERATOR, DEFECTOR
from dpdsim.exceptions import ZeroRate

FULL = os.environ.get('DPDSIM_FULL_ACCEPTANCE') == '1'

pm = PayoffMatrix(T=4, R=3, S=2, P=1)
oracle_params = SimParams(m=1, K=2, d=1, v=1, b=0, w0=3, wc=10)
birth_params = SimParams(m=1, K=3, d=1, v=1, b=1, w0=3, wc=10)


def empirical_one_step(config, payoffs, nsamples, seed):
    '''Restart from ``config`` nsamples times and count the outcome
    signatures of one step.'''
    state = engine.make_state(config.copy(), payoffs, seed, 'oracle')
    counts = {}
    keys = {}
    for k in range(nsamples):
        state.config = config.copy()
        state, ev = engine.step(state)
        sig = ev.signature()
        counts[sig] = counts.get(sig, 0) + 1
        keys[sig] = state.config.key()
    return counts, keys


class KnowValues(unittest.TestCase):
    def test_pair_index(self):
        for p in range(500):
            i, j = engine.pair_slots(p)
            self.assertTrue(0 <= i < j)
            self.assertEqual(engine.pair_index(i, j), p)
            self.assertEqual(engine.pair_index(j, i), p)
        self.assertEqual(engine.pair_slots(0), (0, 1))
        self.assertEqual(engine.pair_slots(1), (0, 2))
        self.assertEqual(engine.pair_slots(2), (1, 2))

    def check_oracle(self, config, nsamples, seed):
        table = engine.transition_table(config, pm)
        self.assertAlmostEqual(sum(p for p, _ in table.values()), 1., 12)
        counts, keys = empirical_one_step(config, pm, nsamples, seed)
        for sig in counts:
            self.assertIn(sig, table)
            self.assertEqual(keys[sig], table[sig][1])
        for sig, (p, _) in table.items():
            freq = counts.get(sig, 0) / nsamples
            se = math.sqrt(p * (1 - p) / nsamples)
            self.assertLessEqual(abs(freq - p), 4 * se + 1e-12, sig)

    def test_oracle_cd(self):
        config = model.Configuration.from_particles(
            oracle_params, [Particle((0, 0), 10, COOPERATOR), Particle((0, 0), 10, DEFECTOR)])
        table = engine.transition_table(config, pm)
        # 8 moves of probability 1/12, the CD game merges both coin values
        self.assertEqual(len(table), 9)
        self.assertAlmostEqual(table[(param.EVENT_MOVE, 0, -1, param.UP, -1)][0], 1/12., 12)
        self.assertAlmostEqual(table[(param.EVENT_GAME, 0, 1, -1, -1)][0], 1/3., 12)
        self.check_oracle(config, 20000 if not FULL else 100000, 11)

    def test_oracle_dd(self):
        config = model.Configuration.from_particles(
            oracle_params, [Particle((0, 0), 10, DEFECTOR), Particle((0, 0), 10, DEFECTOR)])
        table = engine.transition_table(config, pm)
        self.assertAlmostEqual(table[(param.EVENT_GAME, 0, 1, -1, param.HEADS)][0], 1/6., 12)
        self.assertAlmostEqual(table[(param.EVENT_GAME, 0, 1, -1, param.TAILS)][0], 1/6., 12)
        self.check_oracle(config, 20000, 12)

    def test_oracle_birth(self):
        config = model.Configuration.from_particles(
            birth_params, [Particle((0, 0), 20, COOPERATOR), Particle((0, 0), 5, DEFECTOR)])
        table = engine.transition_table(config, pm)
        # slot 0 gives birth into the Unborn slot 2, slot 1 is below wc
        self.assertIn((param.EVENT_BIRTH, 0, 2, -1, -1), table)
        self.assertIn((param.EVENT_BIRTH, 1, -1, -1, -1), table)
        self.check_oracle(config, 20000, 13)

    def test_birth_conserves_wealth(self):
        config = model.Configuration.from_particles(
            birth_params, [Particle((0, 0), 20, COOPERATOR), Particle((0, 0), 5, DEFECTOR)])
        engine.apply_birth(config, 0, .3)
        self.assertEqual(config.wealth[:3], [17, 5, 3])
        self.assertEqual(config.strategy[2], COOPERATOR)
        self.assertEqual(config.total_wealth(), 25)
        # no Unborn slot left
        engine.apply_birth(config, 0, .3)
        self.assertEqual(config.total_wealth(), 25)
        self.assertEqual(config.n_born, 3)

    def test_positivity_gate(self):
        config = model.Configuration.from_particles(
            oracle_params, [Particle((0, 0), 0, COOPERATOR), Particle((0, 0), 10, DEFECTOR)])
        engine.apply_game(config, 0, param.HEADS, pm)
        self.assertEqual(config.wealth, [0, 10])
        ghost = config.with_params(flavor=param.FLAVOR_GHOST)
        engine.apply_game(ghost, (0, 1), param.HEADS, pm)
        self.assertEqual(ghost.wealth, [-2, 14])

    def test_unborn_noop(self):
        params = SimParams(m=3, K=3, d=1, v=1, b=1)
        config = model.Configuration.from_particles(params, [Particle((0, 0), 10, COOPERATOR)])
        before = config.copy()
        engine.apply_move(config, 2, param.UP)
        engine.apply_game(config, (1, 2), param.HEADS, pm)
        engine.apply_birth(config, 1, .5)
        self.assertEqual(config, before)
        engine.apply_move(config, 0, param.UP)
        self.assertEqual(config.particle(0).position, (0, 1))
        engine.apply_move(config, 0, param.LEFT)
        self.assertEqual(config.particle(0).position, (2, 1))

    def test_next_event_categories(self):
        params = SimParams(m=3, K=2, d=1, v=2, b=1)
        config = model.initial_configuration(params, 1, 1, 10, rng=0)
        for p in engine.category_probabilities(config):
            self.assertAlmostEqual(p, 1/3., 12)
        state = engine.make_state(config, pm, 11)
        counts = numpy.zeros(3)
        n = 30000
        for k in range(n):
            counts[engine.next_event(state).kind] += 1
        se = math.sqrt(2/9. / n)
        self.assertTrue(numpy.all(abs(counts / n - 1/3.) <= 4 * se))
        # drawing does not apply the event
        self.assertEqual(state.event_count, 0)
        self.assertEqual(state.clock, 0)

        config = model.initial_configuration(SimParams(m=3, K=1, d=1, v=7, b=1),
                                             0, 1, 10, rng=0)
        self.assertEqual(engine.category_probabilities(config)[1], 0)
        config = model.initial_configuration(SimParams(m=7, K=10, d=5, v=5, b=1),
                                             5, 5, 10, rng=0)
        probs = engine.category_probabilities(config)
        self.assertAlmostEqual(probs[0], 50/285., 12)
        self.assertAlmostEqual(probs[1], 225/285., 12)
        self.assertAlmostEqual(probs[2], 10/285., 12)

    def test_alive_addressing(self):
        params = SimParams(m=1, K=3, d=1, v=1, b=0, addressing=param.ADDRESS_ALIVE)
        config = model.Configuration.from_particles(
            params, [Particle((0, 0), 0, COOPERATOR), Particle((0, 0), 10, COOPERATOR),
                     Particle((0, 0), 10, DEFECTOR)])
        self.assertEqual(engine.actors(config), [1, 2])
        probs = engine.category_probabilities(config)
        self.assertAlmostEqual(probs[0], 2/3., 12)
        self.assertAlmostEqual(probs[1], 1/3., 12)
        table = engine.transition_table(config, pm)
        self.assertTrue(all(sig[1] != 0 for sig in table))
        self.check_oracle(config, 20000, 14)

        born = config.with_params(addressing=param.ADDRESS_BORN)
        self.assertEqual(engine.actors(born), [0, 1, 2])
        self.assertAlmostEqual(engine.category_probabilities(born)[1], .5, 12)
        ghost = config.with_params(flavor=param.FLAVOR_GHOST)
        self.assertEqual(engine.actors(ghost), [0, 1, 2])

    def test_alive_addressing_extinct(self):
        params = SimParams(m=1, K=2, d=0, v=1, b=0, addressing=param.ADDRESS_ALIVE)
        config = model.initial_configuration(params, 2, 0, 1, rng=0)
        traj = engine.run(engine.make_state(config, PayoffMatrix(T=1, R=-5, S=1, P=0), 0), 10)
        self.assertEqual(traj.stop_reason, 'extinct')
        self.assertEqual(traj.n_events, 1)
        self.assertEqual(observables.survival_counts(traj.config), (0, 0))

    def test_move_marginal(self):
        params = SimParams(m=5, K=1, d=1, v=0, b=0)
        config = model.Configuration.from_particles(params, [Particle((0, 0), 10, DEFECTOR)])
        state = engine.make_state(config, pm, 3)
        counts = numpy.zeros(4)
        n = 20000
        for k in range(n):
            state, ev = engine.step(state)
            self.assertEqual(ev.kind, param.EVENT_MOVE)
            counts[ev.direction] += 1
        se = math.sqrt(.25 * .75 / n)
        self.assertTrue(numpy.all(abs(counts / n - .25) <= 4 * se))
        dx = (counts[param.RIGHT] - counts[param.LEFT]) % 5
        dy = (counts[param.UP] - counts[param.DOWN]) % 5
        self.assertEqual(state.config.particle(0).position, (dx, dy))

    def test_clock(self):
        params = SimParams(m=5, K=1, d=2, v=0, b=0)
        config = model.Configuration.from_particles(params, [Particle((0, 0), 10, DEFECTOR)])
        traj = engine.run(engine.make_state(config, pm, 5), 20000, observables_keys=())
        # 20000 events at rate 2
        self.assertAlmostEqual(traj.state.clock / 10000., 1., 1)
        self.assertEqual(traj.n_events, 20000)
        self.assertEqual(traj.stop_reason, 'max_events')

    def test_zero_rate(self):
        params = SimParams(m=3, K=4, d=0, v=0, b=0)
        config = model.initial_configuration(params, 1, 1, 10, rng=0)
        state = engine.make_state(config, pm, 0)
        self.assertRaises(ZeroRate, engine.step, state)
        self.assertRaises(ZeroRate, engine.category_probabilities, config)

    def test_stop_condition(self):
        config = model.initial_configuration(SimParams(), 10, 10, 10, rng=0)
        traj = engine.run(engine.make_state(config, pm, 1),
                          engine.StopCondition(max_events=10**6, max_time=.5))
        self.assertEqual(traj.stop_reason, 'max_time')
        self.assertGreaterEqual(traj.state.clock, .5)
        traj = engine.run(engine.make_state(config, pm, 1),
                          engine.StopCondition(max_events=10**6,
                                               predicate=lambda s: s.event_count >= 17))
        self.assertEqual(traj.stop_reason, 'predicate')
        self.assertEqual(traj.n_events, 17)

    def test_determinism(self):
        config = model.initial_configuration(SimParams(), 10, 10, 10, rng=4)
        t1 = engine.run(engine.make_state(config, pm, 99), 3000, keep_events=True)
        t2 = engine.run(engine.make_state(config, pm, 99), 3000, keep_events=True)
        pandas.testing.assert_frame_equal(t1.records, t2.records)
        self.assertEqual(t1.events, t2.events)
        self.assertEqual(t1.state.config, t2.state.config)
        t3 = engine.run(engine.make_state(config, pm, 100), 3000)
        self.assertNotEqual(t1.state.config.key(), t3.state.config.key())

    def test_state_copy(self):
        config = model.initial_configuration(SimParams(), 10, 10, 10, rng=4)
        state = engine.make_state(config, pm, 8)
        engine.run(state, 100)
        fork = state.copy()
        a = engine.run(state, 500).state.config
        b = engine.run(fork, 500).state.config
        self.assertEqual(a, b)

    def test_stride(self):
        config = model.initial_configuration(SimParams(), 10, 10, 10, rng=4)
        traj = engine.run(engine.make_state(config, pm, 2), 1001, stride=100)
        self.assertEqual(list(traj.records['event']), [0] + list(range(100, 1001, 100)) + [1001])

    def test_conservation_and_persistence(self):
        # per-event wealth balance, frozen dead slots and a positive
        # defector at all times are asserted by run(check=True)
        ntraj, nevents = (1000, 10000) if FULL else (10, 2000)
        preset = sweep.FIGURE2
        # grid corners R=0 S=100 and R=100 S=2 included
        for payoffs in (pm, PayoffMatrix(T=1, R=0, S=100, P=99),
                        PayoffMatrix(T=101, R=100, S=2, P=1)):
            for k in range(ntraj):
                rng = numpy.random.default_rng(k)
                config = preset.initial_configuration(rng)
                state = engine.make_state(config, payoffs, k, 'conservation')
                traj = engine.run(state, nevents, observables_keys=('def_alive',), check=True)
                self.assertEqual(traj.n_events, nevents)
                self.assertTrue(numpy.all(traj.series('def_alive') >= 1))

    def test_ghost_cooperators_survive(self):
        # cooperators rich in CC rewards stay positive despite the
        # per-event decrement
        params = SimParams(m=1, K=4, d=1, v=1, b=0, w0=3, wc=10**9,
                           flavor=param.FLAVOR_GHOST)
        payoffs = PayoffMatrix(T=101, R=100, S=2, P=1)
        config = model.initial_configuration(params, 2, 2, 300, positions=[(0, 0)]*4)
        nruns = 100
        survived = 0
        for k in range(nruns):
            traj = engine.run(engine.make_state(config, payoffs, k, 'ghost'), 2000,
                              observables_keys=('min_coop_wealth',))
            if observables.running_min_wealth(traj)[-1] > 0:
                survived += 1
        self.assertGreaterEqual(survived, 90)

    def test_ghost_births(self):
        params = SimParams(m=1, K=4, d=1, v=1, b=1, w0=3, wc=10, flavor=param.FLAVOR_GHOST)
        config = model.Configuration.from_particles(
            params, [Particle((0, 0), 20, COOPERATOR), Particle((0, 0), 20, DEFECTOR)])
        # cooperators do not reproduce but pay w0
        ev = engine._apply(config, pm, engine.Event(1, 0., param.EVENT_BIRTH, 0, u_aux=0.))
        self.assertFalse(ev.applied)
        self.assertEqual(config.wealth[:2], [17, 20])
        # defector births are free and the parent is exempt
        ev = engine._apply(config, pm, engine.Event(2, 0., param.EVENT_BIRTH, 1, u_aux=0.))
        self.assertTrue(ev.applied)
        self.assertEqual(config.wealth[:3], [14, 20, 3])
        self.assertEqual(config.strategy[ev.other], DEFECTOR)

    def test_ghost_scope_all(self):
        params = SimParams(m=1, K=2, d=1, v=0, b=0, flavor=param.FLAVOR_GHOST,
                           ghost_scope='all')
        config = model.Configuration.from_particles(
            params, [Particle((0, 0), 20, COOPERATOR), Particle((0, 0), 20, DEFECTOR)])
        state = engine.make_state(config, pm, 0)
        engine.step(state)
        self.assertEqual(state.config.wealth, [17, 17])

        # the parent is exempt, the newborn pays
        params = SimParams(m=1, K=3, d=1, v=1, b=1, w0=3, wc=10, flavor=param.FLAVOR_GHOST,
                           ghost_scope='all')
        config = model.Configuration.from_particles(
            params, [Particle((0, 0), 20, COOPERATOR), Particle((0, 0), 20, DEFECTOR)])
        ev = engine._apply(config, pm, engine.Event(1, 0., param.EVENT_BIRTH, 1, u_aux=0.))
        self.assertTrue(ev.applied)
        self.assertEqual(config.wealth[:3], [17, 20, 0])

    def test_engine_object(self):
        config = model.initial_configuration(SimParams(), 10, 10, 10, rng=1)
        eng = engine.Engine(config, pm, seed=7).set(verbose=0, stride=10)
        traj = eng.kernel(engine.StopCondition(max_events=200))
        self.assertEqual(traj.n_events, 200)
        self.assertEqual(list(traj.records.columns),
                         ['event', 'clock', 'kind'] + list(engine.DEFAULT_OBSERVABLES))
        # the input configuration is not modified
        self.assertEqual(config, model.initial_configuration(SimParams(), 10, 10, 10, rng=1))


if __name__ == '__main__':
    print('Full Tests for engine')
    unittest.main()
