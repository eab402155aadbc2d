#! /usr/bin/env python
# -*- coding: utf-8 -*-
from setuptools import setup, find_packages

from docs import getVersion


# Variables ===================================================================
changelog = open('CHANGES.rst').read()
long_description = "\n\n".join([
    open('README.rst').read(),
    open('CONTRIBUTORS.rst').read(),
    changelog
])


# Package definitions =========================================================
setup(
    name='raycollide',
    version=getVersion(changelog),
    description="Mesh and swept sphere collision detection by ray tracing",
    long_description=long_description,

    url='https://github.com/raycollide/raycollide',

    author='Raycollide team',
    author_email='raycollide@users.noreply.github.com',

    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering",
        "Topic :: Software Development :: Libraries :: Python Modules"
    ],
    license='MIT',

    packages=find_packages('src'),
    package_dir={'': 'src'},

    include_package_data=True,
    python_requires=">=3.8",

    zip_safe=False,
    install_requires=[
        'setuptools',
        "numpy>=1.20",
        "scipy>=1.7",
        "trimesh>=3.9.20",
        "pandas>=1.2",
    ],
    extras_require={
        "test": [
            "pytest",
        ],
        "docs": [
            "sphinx",
        ]
    },
    entry_points={
        "console_scripts": [
            "raycollide-bench = raycollide.bench:main",
        ],
    },
)
