#   Copyright (c) 2026  snpeaks Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License"
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

from setuptools import find_packages, setup

import snpeaks

with open("requirements.txt") as fin:
    REQUIRED_PACKAGES = fin.read()


def get_all_files(directory: str, filetypes: list = None):
    all_files = []
    filetypes = filetypes or []
    for root, _, files in os.walk(directory):
        root = os.path.relpath(root, directory)
        for file in files:
            if filetypes and os.path.splitext(file)[1][1:] not in filetypes:
                continue
            all_files.append(os.path.join(root, file))

    return all_files


setup(
    name='snpeaks',
    version=snpeaks.__version__.replace('-', ''),
    description=('Numerical laboratory for normalized concentrating '
                 'solutions of the Schrodinger-Newton equation'),
    long_description='',
    author='snpeaks Authors',
    author_email='',
    install_requires=REQUIRED_PACKAGES,
    packages=find_packages(exclude=['tests', 'tests.*']),
    data_files=[('configs', [
        os.path.join('configs', f)
        for f in get_all_files('configs', filetypes=['yml'])
    ])],
    # PyPI package information.
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Education',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    license='Apache 2.0',
    keywords=('schrodinger-newton choquard normalized-solutions '
              'lyapunov-schmidt pohozaev'))
