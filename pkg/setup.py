#!/usr/bin/env python
#------------------------------------------------------------------------------
#
# This code is licensed under the MIT License.
#
#------------------------------------------------------------------------------

from setuptools import setup, find_packages
import re, io

# setup.py shall not import main package
__version__ = re.search(
    r'__version__\s*=\s*[\'"]([^\'"]*)[\'"]',  # It excludes inline comment too
    io.open('noiseplane/report.py', encoding='utf_8_sig').read()
    ).group(1)

long_description = open('README.md').read()

setup(
    name='noiseplane',
    version=__version__,
    description=' '.join(
        """Quantify how random a time series is, with permutation entropy,
        statistical complexity and spectral exponents measured against
        colored-noise references, and backtest naive and statistical
        forecasters by horizon-filtered MAPE.""".split()),
    long_description=long_description,
    long_description_content_type="text/markdown",
    license='MIT',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Information Analysis',
    ],
    packages=find_packages(exclude=["tests"]),
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.20',  # sliding_window_view
        'scipy>=1.7',  # Bounded Nelder-Mead
        'pandas>=1.5',  # to_csv(lineterminator=...)
        'statsmodels>=0.12',  # Holt(initialization_method="known")
    ],
    entry_points={
        'console_scripts': ['noiseplane=noiseplane.__main__:main'],
    },
)

