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

'''
Global defaults of dpdsim.

The modules read their tunables with ``getattr(__config__, name, default)``
so any of them can be overridden by a user configuration file.  The file
is a plain Python script executed in this module's namespace.  It is looked
up in ``$DPDSIM_CONFIG_FILE``, then ``~/.dpdsim_conf.py``, then
``~/.dpdsim/dpdsim_conf.py``.

Example of ``~/.dpdsim_conf.py``::

    VERBOSE = 4
    OUTPUT_DIR = '/scratch/dpd'
    engine_rng_block_size = 8192
'''

import os
import sys

VERBOSE = int(os.environ.get('DPDSIM_VERBOSE', 3))
OUTPUT_DIR = os.environ.get('DPDSIM_OUTPUT_DIR', '.')

conf_file = os.environ.get('DPDSIM_CONFIG_FILE', None)
if conf_file is None:
    for _path in ('~/.dpdsim_conf.py', '~/.dpdsim/dpdsim_conf.py'):
        _path = os.path.expanduser(_path)
        if os.path.isfile(_path):
            conf_file = _path
            break

if conf_file is not None:
    if os.path.isfile(conf_file):
        with open(conf_file, 'r') as f:
            exec(f.read())
    else:
        sys.stderr.write('dpdsim config file %s not found\n' % conf_file)
