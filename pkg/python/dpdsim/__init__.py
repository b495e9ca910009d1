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
Demographic Prisoner's Dilemma simulations

Spatial event-driven engine, mean-field ensemble and master equation,
linearized cooperator wealth and payoff sweeps.
'''

__version__ = '0.1.0'

from dpdsim import parameters
param = parameters
from dpdsim import logger
from dpdsim import misc
from dpdsim import model
from dpdsim import engine
from dpdsim import observables
from dpdsim import meanfield
from dpdsim import sweep
from dpdsim import chkfile
from dpdsim.misc import StreamObject
from dpdsim.model import PayoffMatrix, SimParams, Configuration
from dpdsim.engine import Engine, StopCondition
