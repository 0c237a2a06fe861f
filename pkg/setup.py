#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""The setup script."""

from setuptools import setup, find_packages

with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()

requirements = [
    'numpy>=1.20', 'scipy>=1.6', 'pandas>=1.5', 'requests', 'url-normalize']

setup_requirements = ['pytest-runner', ]

test_requirements = ['pytest>=3', 'hypothesis']

setup(
    author="pyResFlow developers",
    author_email='resflow-dev@users.noreply.github.com',
    python_requires='>=3.8',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    description=("Residual networks as discretized dynamical systems: "
                 "forward maps, Rademacher complexity estimates and "
                 "generalization bounds"),
    entry_points={
        'console_scripts': [
            'resflow=pyResFlow.cli:main',
        ],
    },
    long_description_content_type='text/x-rst',
    install_requires=requirements,
    license="GNU General Public License v3",
    long_description=readme + '\n\n' + history,
    include_package_data=True,
    keywords='pyResFlow',
    name='pyResFlow',
    packages=find_packages(include=['pyResFlow', 'pyResFlow.*']),
    setup_requires=setup_requirements,
    test_suite='tests',
    tests_require=test_requirements,
    url='https://github.com/resflow/pyResFlow',
    version="0.1.0",
    zip_safe=False,
)
