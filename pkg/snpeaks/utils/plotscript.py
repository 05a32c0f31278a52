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

import os
from typing import List, Optional, Sequence, Tuple


def gnuplot_script(csv_path: str,
                   title: str,
                   xlabel: str,
                   ylabel: str,
                   series: Sequence[Tuple[str, str]],
                   logscale: bool = True,
                   output: Optional[str] = None) -> str:
    """
    Build gnuplot commands plotting columns of a table written by
    `write_table`.

    Args:
        series: (using-expression, legend) pairs, e.g. ('1:2', 'measured').
    """
    csv_name = os.path.basename(csv_path)
    output = output or os.path.splitext(csv_name)[0] + '.png'

    lines: List[str] = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        "set terminal pngcairo size 900,650",
        "set output '{}'".format(output),
        "set title '{}'".format(title),
        "set xlabel '{}'".format(xlabel),
        "set ylabel '{}'".format(ylabel),
        "set grid",
    ]
    if logscale:
        lines.append("set logscale xy")

    plots = [
        "'{}' using {} with linespoints title '{}'".format(
            csv_name, using, legend) for using, legend in series
    ]
    lines.append('plot ' + ', \\\n     '.join(plots))
    return '\n'.join(lines) + '\n'


def write_gnuplot_script(path: str, *args, **kwargs) -> str:
    text = gnuplot_script(*args, **kwargs)
    with open(path, 'w') as file:
        file.write(text)
    return path
