import os
from setuptools import setup

def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()

setup(
    name = "specsynth",
    version = "0.1.0",
    description = ("Contract inference for heap-manipulating C functions "
        "by symbolic execution, shape abstraction and testing."),
    license = "MIT",
    keywords = "symbolic execution contract inference postcondition "
        "lazy initialization shape abstraction",
    packages=['specsynth', 'specsynth.tests'],
    package_data={'specsynth.tests': ['fixtures/*.c']},
    long_description=read('README.md'),
    python_requires='>=3.8',
    install_requires=[
        'pycparser>=2.20',
        'graphviz>=0.16',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['specsynth=specsynth.cli:main'],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Topic :: Software Development :: Testing",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
    ],
)
