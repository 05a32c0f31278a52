# Copyright (c) 2026 snpeaks Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import argparse
import random
import sys

import numpy as np

from snpeaks.apis import manager
from snpeaks.apis.commands import run_command
from snpeaks.utils.logger import logger


def parse_args(argv=None):
    """
    """
    parser = argparse.ArgumentParser(
        description='Normalized peak solutions laboratory')
    parser.add_argument(
        'command',
        help='One of {}'.format(', '.join(
            manager.COMMANDS.keys_with_prefix())),
        type=str)
    parser.add_argument(
        "--config", dest="cfg", help="The config file.", default=None, type=str)
    parser.add_argument(
        '--out',
        dest='out',
        help='Result directory, defaults to $SNPEAKS_OUTPUT/<name>',
        type=str,
        default=None)
    parser.add_argument(
        '--workers',
        dest='workers',
        help='Number of worker processes for ladders and sweeps',
        type=int,
        default=None)
    parser.add_argument(
        '--seed',
        dest='seed',
        help='Random seed of the randomized property checks.',
        default=None,
        type=int)
    parser.add_argument(
        '--only',
        dest='only',
        help='Run only the checks whose key starts with this prefix',
        type=str,
        default=None)
    parser.add_argument(
        '--log_level',
        dest='log_level',
        help='Logging level',
        type=str,
        default='INFO')

    return parser.parse_args(argv)


def main(args) -> int:
    """
    """
    logger.set_level(args.log_level.upper())

    if args.seed is not None:
        logger.info("use random seed {}".format(args.seed))
        np.random.seed(args.seed)
        random.seed(args.seed)

    if args.cfg is None:
        logger.error("No configuration file specified!")
        return 2

    return run_command(
        args.command,
        path=args.cfg,
        output=args.out,
        workers=args.workers,
        seed=args.seed,
        only=args.only)


if __name__ == '__main__':
    args = parse_args()
    sys.exit(main(args))
