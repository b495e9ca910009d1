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
Some helper functions
'''

import os
import sys
import zlib
import warnings
import platform
import numpy
import pandas
from concurrent.futures import ProcessPoolExecutor

from dpdsim import parameters as param
from dpdsim import __config__

RNG_BLOCK_SIZE = getattr(__config__, 'misc_rng_block_size', 4096)
POOL_CHUNKSIZE = getattr(__config__, 'misc_pool_chunksize', 4)


#
# Seeds
#
# All random streams derive from one 64-bit master seed.  A stream is
# identified by a tuple of labels; the labels become the spawn key of a
# numpy SeedSequence, so streams of different labels are independent and a
# stream never depends on the order in which other streams were created.
#
def label_code(label):
    '''Map a context label to the non-negative integer used in spawn keys.

    Non-negative integers are used as is.  Other values (strings, negative
    or fractional payoffs) are encoded by the CRC32 of their repr, offset by
    2**32 so that they never collide with small integer labels.
    '''
    if isinstance(label, (bool, numpy.bool_)):
        return int(label)
    if isinstance(label, (int, numpy.integer)) and label >= 0:
        return int(label)
    if isinstance(label, (float, numpy.floating)) and float(label).is_integer() and label >= 0:
        return int(label)
    return (1 << 32) + zlib.crc32(repr(label).encode('utf-8'))

def seed_sequence(master_seed, *labels):
    return numpy.random.SeedSequence(entropy=int(master_seed),
                                     spawn_key=tuple(label_code(x) for x in labels))

def derive_seed(master_seed, *labels):
    '''Stable 64-bit seed for the stream (master_seed, labels).'''
    return int(seed_sequence(master_seed, *labels).generate_state(1, numpy.uint64)[0])

def make_rng(master_seed, *labels):
    return numpy.random.Generator(numpy.random.PCG64(seed_sequence(master_seed, *labels)))


class UniformStream(object):
    '''Buffered stream of uniform [0, 1) doubles.

    The simulators consume a fixed number of uniforms per event, one at a
    time.  Draws are taken from a numpy Generator in blocks and handed out
    as Python floats, so the n-th uniform of the stream only depends on the
    seed and n, never on how the consumer interprets earlier draws.
    '''
    __slots__ = ('generator', 'block_size', '_buf', '_pos', 'ndraws')

    def __init__(self, generator, block_size=RNG_BLOCK_SIZE):
        if not isinstance(generator, numpy.random.Generator):
            generator = numpy.random.default_rng(generator)
        self.generator = generator
        self.block_size = int(block_size)
        self._buf = []
        self._pos = 0
        self.ndraws = 0

    def __call__(self):
        pos = self._pos
        if pos >= len(self._buf):
            self._buf = self.generator.random(self.block_size).tolist()
            pos = 0
        self._pos = pos + 1
        self.ndraws += 1
        return self._buf[pos]

    def take(self, n):
        return [self() for i in range(n)]

    def copy(self):
        new = UniformStream.__new__(UniformStream)
        bitgen = type(self.generator.bit_generator)()
        bitgen.state = self.generator.bit_generator.state
        new.generator = numpy.random.Generator(bitgen)
        new.block_size = self.block_size
        new._buf = list(self._buf)
        new._pos = self._pos
        new.ndraws = self.ndraws
        return new


class StreamObject(object):
    '''Base class of the simulation drivers.

    1 ``.set`` function to update object attributes, eg
    ``Engine(state).set(verbose=4)``

    2 ``.run`` function to execute the kernel function.  Keyword arguments
    first update the attributes, positional arguments are passed to kernel.
    The return value is the object itself so calls can be chained.

    3 ``.dump_flags`` prints the input attributes at INFO level.
    '''

    verbose = getattr(__config__, 'VERBOSE', param.VERBOSE_NOTICE)
    stdout = sys.stdout
    _keys = set(['verbose', 'stdout'])

    def kernel(self, *args, **kwargs):
        pass

    def run(self, *args, **kwargs):
        self.set(**kwargs)
        self.kernel(*args)
        return self

    def set(self, *args, **kwargs):
        if args:
            warnings.warn('method set() only supports keyword arguments.\n'
                          'Arguments %s are ignored.' % (args,))
        for k, v in kwargs.items():
            setattr(self, k, v)
        return self

    __call__ = set

    def dump_flags(self, verbose=None):
        from dpdsim import logger
        log = logger.new_logger(self, verbose)
        log.info('')
        log.info('******** %s ********', self.__class__)
        for key in sorted(self._keys):
            if key in ('verbose', 'stdout'):
                continue
            log.info('%s = %s', key, getattr(self, key, None))
        return self


def pool_map(func, tasks, parallelism=1, chunksize=POOL_CHUNKSIZE):
    '''Apply func to every task and return the results in task order.

    With parallelism > 1 the tasks run in a process pool; the result list is
    still ordered like ``tasks``, independent of completion order.
    '''
    tasks = list(tasks)
    if parallelism is None or parallelism <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    nworkers = min(int(parallelism), len(tasks))
    with ProcessPoolExecutor(max_workers=nworkers) as ex:
        return list(ex.map(func, tasks, chunksize=max(1, chunksize)))


def write_csv(frame, path):
    '''Write a DataFrame in the package CSV dialect (comma, dot decimal,
    header row, LF line endings, fixed float format).'''
    if not isinstance(frame, pandas.DataFrame):
        frame = pandas.DataFrame(frame)
    dirname = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(dirname):
        os.makedirs(dirname)
    frame.to_csv(path, sep=param.CSV_SEPARATOR, index=False,
                 lineterminator=param.CSV_LINE_TERMINATOR,
                 float_format=param.CSV_FLOAT_FORMAT)
    return path


def versions():
    '''Versions of the interpreter and of the numerical stack.'''
    import scipy
    import h5py
    from dpdsim import __version__
    return {'dpdsim': __version__,
            'python': platform.python_version(),
            'numpy': numpy.__version__,
            'scipy': scipy.__version__,
            'pandas': pandas.__version__,
            'h5py': h5py.version.version}


def isinteger(obj):
    '''Check if an object is an integer (numpy integers included, bools not).'''
    if isinstance(obj, (bool, numpy.bool_)):
        return False
    if isinstance(obj, (int, numpy.integer)):
        return True
    return False

def isintegral(x):
    '''Check if a number has an exact integer value.'''
    if isinteger(x):
        return True
    try:
        return float(x).is_integer()
    except (TypeError, ValueError, OverflowError):
        return False
