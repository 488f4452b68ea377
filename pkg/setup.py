#!/usr/bin/env python
# coding: utf-8
from setuptools import setup, find_packages

VERSION = "0.1.0"

install_requires = [
    'tqdm',
    'scipy',
    'numpy',
    'scikit_learn',
    'numba>=0.46.0',
    'texttable',
]

setup_requires = ['pytest-runner']
tests_require = ['pytest', 'pytest-cov', 'hypothesis']

setup(
    name='c2fgrasp',
    version=VERSION,
    description='Coarse-to-fine 6-DoF grasp pose codec, losses, sampler and evaluation toolkit.',
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    keywords=[
        'grasping',
        'robotics',
        'point-cloud',
        '6-dof',
        'pose-estimation',
    ],
    python_requires='>=3.7',
    license="MIT LICENSE",
    install_requires=install_requires,
    setup_requires=setup_requires,
    tests_require=tests_require,
    extras_require={'test': tests_require},
    packages=find_packages(exclude=("examples", "test", "test.*")),
    entry_points={'console_scripts': ['c2fgrasp = c2fgrasp.cli:main']},
    classifiers=[
        'Development Status :: 3 - Alpha',
        "Programming Language :: Python :: 3",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        'Topic :: Scientific/Engineering',
        'Topic :: Software Development :: Libraries',
        "Operating System :: OS Independent"
    ],
)
