#!/usr/bin/env python
# Copyright 2014-2020 The PySCF Developers.
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
HDF5 dumps of simulation results

Dicts are stored as HDF5 groups, lists and tuples as groups whose name ends
with ``__from_list__`` holding the items under zero-padded keys, everything
else as datasets.
'''

import json
import numpy
import pandas
import h5py


def load(chkfile, key):
    '''Load array(s) from chkfile

    Args:
        chkfile : str
            Name of the HDF5 file.
        key : str
            HDF5 dataset name or group name.  A group is loaded into a
            Python dict (or list), recursively.

    Returns:
        whatever read from chkfile, None if key does not exist

    Examples:

    >>> dump('run.h5', 'trajectory', {'event': [0, 1, 2]})
    >>> load('run.h5', 'trajectory/event')
    [0, 1, 2]
    '''
    def load_as_dic(key, group):
        if key in group:
            val = group[key]
        elif key + '__from_list__' in group:
            key = key + '__from_list__'
            val = group[key]
        else:
            return None

        if isinstance(val, h5py.Group):
            if key.endswith('__from_list__'):
                return [load_as_dic(k, val) for k in sorted(val)]
            else:
                return dict([(k.replace('__from_list__', ''),
                              load_as_dic(k, val)) for k in val])
        else:
            out = val[()]
            if isinstance(out, bytes):
                out = out.decode('utf-8')
            return out

    with h5py.File(chkfile, 'r') as fh5:
        return load_as_dic(key, fh5)

def dump(chkfile, key, value):
    '''Save array(s) in chkfile under ``key``, replacing an existing entry.

    ``key`` can contain "/" to address a path inside the file.  Dicts and
    lists are saved recursively as groups.
    '''
    def save_as_group(key, value, root):
        if isinstance(value, dict):
            root1 = root.create_group(key)
            for k in value:
                save_as_group(str(k), value[k], root1)
        elif isinstance(value, (tuple, list, range)):
            root1 = root.create_group(key + '__from_list__')
            for k, v in enumerate(value):
                save_as_group('%06d' % k, v, root1)
        elif value is None:
            root[key] = h5py.Empty('f')
        else:
            try:
                root[key] = value
            except (TypeError, ValueError) as e:
                if not (e.args[0].startswith('Object dtype') or
                        e.args[0].startswith('could not broadcast input array')):
                    raise e
                root1 = root.create_group(key + '__from_list__')
                for k, v in enumerate(value):
                    save_as_group('%06d' % k, v, root1)

    if h5py.is_hdf5(chkfile):
        with h5py.File(chkfile, 'r+') as fh5:
            if key in fh5:
                del fh5[key]
            elif key + '__from_list__' in fh5:
                del fh5[key + '__from_list__']
            save_as_group(key, value, fh5)
    else:
        with h5py.File(chkfile, 'w') as fh5:
            save_as_group(key, value, fh5)
save = dump


def _frame_to_dict(frame):
    out = {}
    for col in frame.columns:
        values = frame[col].to_numpy()
        if values.dtype == object:
            values = numpy.asarray([str(x) for x in values], dtype='S')
        out[col] = values
    return out

def dump_trajectory(chkfile, trajectory, key='trajectory'):
    '''Save the recorded series and the final configuration of a
    :class:`dpdsim.engine.Trajectory`.'''
    config = trajectory.state.config
    value = {'records': _frame_to_dict(trajectory.records),
             'stop_reason': str(trajectory.stop_reason),
             'n_events': trajectory.n_events,
             'clock': trajectory.state.clock,
             'params': json.dumps(config.params.to_dict()),
             'config': {'x': numpy.asarray(config.xs, dtype=numpy.int64),
                        'y': numpy.asarray(config.ys, dtype=numpy.int64),
                        'wealth': numpy.asarray(config.wealth, dtype=float),
                        'strategy': numpy.asarray(config.strategy, dtype=numpy.int8)}}
    dump(chkfile, key, value)

def load_records(chkfile, key='trajectory'):
    rec = load(chkfile, key + '/records')
    return pandas.DataFrame({k: (numpy.char.decode(v) if getattr(v, 'dtype', None) is not None
                                 and v.dtype.kind == 'S' else v)
                             for k, v in rec.items()})

def dump_lattices(chkfile, coop, dfct, key='master'):
    '''Save the cooperator and defector wealth lattices of the master
    equation.'''
    def lat(x):
        return {'w_min': x.w_min, 'step': x.step, 'masses': x.masses,
                'below': x.below, 'above': x.above}
    dump(chkfile, key, {'cooperators': lat(coop), 'defectors': lat(dfct)})

def load_lattices(chkfile, key='master'):
    from dpdsim.meanfield import WealthLattice
    dat = load(chkfile, key)
    def lat(x):
        return WealthLattice(int(x['w_min']), int(x['step']), numpy.asarray(x['masses']),
                             float(x['below']), float(x['above']))
    return lat(dat['cooperators']), lat(dat['defectors'])

def dump_grid(chkfile, cells, key='sweep'):
    '''Save the per-run survival counts of every sweep cell.'''
    value = {}
    for c in cells:
        value['R=%s,S=%s' % (c.R, c.S)] = {
            'R': c.R, 'S': c.S,
            'coop_counts': numpy.asarray(c.coop_counts, dtype=numpy.int64),
            'def_counts': numpy.asarray(c.def_counts, dtype=numpy.int64),
            'runtime': c.runtime}
    dump(chkfile, key, value)
