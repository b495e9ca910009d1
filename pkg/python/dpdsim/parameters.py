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
Fixed constants of dpdsim.

Tunable values (tolerances, buffer sizes, output directory) live in
:mod:`dpdsim.__config__`; the values here are part of the model or of the
file formats and never change at run time.


Event encoding
--------------

Every event of the unified Poisson process is one of three kinds.  The
integer codes are written to event logs and HDF5 dumps.

Directions
----------

A move shifts a particle by one lattice step on the torus.  The order of
:data:`DIRECTIONS` fixes the meaning of the direction draw: index 0 is Up,
1 Down, 2 Left, 3 Right.
'''

EVENT_MOVE  = 0
EVENT_GAME  = 1
EVENT_BIRTH = 2
EVENT_NAMES = ('move', 'game', 'birth')

UP, DOWN, LEFT, RIGHT = 0, 1, 2, 3
DIRECTION_NAMES = ('up', 'down', 'left', 'right')
# (dx, dy) per direction
DIRECTIONS = ((0, 1), (0, -1), (-1, 0), (1, 0))

# Coin of the DD game: HEADS means the first player of the pair is punished
HEADS = 0
TAILS = 1

FLAVOR_TRUE  = 'true'
FLAVOR_GHOST = 'ghost'

ADDRESS_SLOTS = 'slots'
ADDRESS_BORN  = 'born'
ADDRESS_ALIVE = 'alive'
ADDRESSING = (ADDRESS_SLOTS, ADDRESS_BORN, ADDRESS_ALIVE)

# CSV dialect shared by every writer
CSV_SEPARATOR = ','
CSV_LINE_TERMINATOR = '\n'
CSV_FLOAT_FORMAT = '%.12g'

VERBOSE_DEBUG  = 5
VERBOSE_INFO   = 4
VERBOSE_NOTICE = 3
VERBOSE_WARN   = 2
VERBOSE_ERR    = 1
VERBOSE_QUIET  = 0
