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

'''Errors and exceptions

Each class has a ``category`` label and the process ``exit_code`` that
:func:`dpdsim.cli.main` returns when the error reaches the command line.
'''

class DPDError(RuntimeError):
    category = 'error'
    exit_code = 1

class ConstraintViolation(DPDError, ValueError):
    '''A parameter inequality does not hold.  ``args[0]`` names it.'''
    category = 'constraint'
    exit_code = 3

class UnbornPlayer(DPDError, ValueError):
    category = 'unborn'
    exit_code = 4

class ZeroRate(DPDError):
    '''The total rate of the unified Poisson process is zero.'''
    category = 'zero-rate'
    exit_code = 5

class EmptyGroup(DPDError, ValueError):
    category = 'empty-group'
    exit_code = 6

class WindowOverflow(DPDError):
    '''Probability mass left the truncation window of a wealth lattice.'''
    category = 'window-overflow'
    exit_code = 7

class NegativeMass(DPDError):
    category = 'negative-mass'
    exit_code = 8

class NonpositiveDrift(DPDError, ValueError):
    category = 'nonpositive-drift'
    exit_code = 9

class OutputError(DPDError):
    '''Reading or writing a result file failed.'''
    category = 'io'
    exit_code = 10

class ConfigError(DPDError):
    category = 'config'
    exit_code = 2

class ParseError(ConfigError):
    def __init__(self, msg, line=None, key=None):
        ConfigError.__init__(self, msg)
        self.line = line
        self.key = key

    def __str__(self):
        msg = ConfigError.__str__(self)
        if self.line is not None:
            msg = 'line %d: %s' % (self.line, msg)
        if self.key is not None:
            msg = '%s (key %r)' % (msg, self.key)
        return msg

class UnknownKey(ParseError):
    def __init__(self, key, line=None):
        ParseError.__init__(self, 'unknown key %r' % key, line=line, key=key)
