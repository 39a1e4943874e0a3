"""wlrewrite - datalog rewritings of disjunctive datalog programs.
"""

import os
try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

with open('requirements.txt') as f:
    required = f.read().splitlines()

setup(
    name='wlrewrite',
    version=open('wlrewrite/__init__.py').readlines()[-1].split()[-1].strip('\''),
    description='Datalog rewritings of disjunctive datalog programs.',
    license='MIT',
    install_requires=required,
    packages=['wlrewrite', 'wlrewrite.tests', 'wlrewrite.apps'],
    package_data={'wlrewrite': ['data/*']},
    include_package_data=True,
    entry_points={
        'console_scripts': ['wlrewrite=wlrewrite.apps.cli:main'],
    },
    keywords='datalog disjunctive rewriting ontology reasoning'
)
