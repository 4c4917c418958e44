from setuptools import setup
from gatedelay import __version__, __description__, __url__, __author__, \
    __author_email__, __keywords__

NAME = 'gatedelay'

setup(
    name=NAME,
    version=__version__,
    description=__description__,
    long_description='See ' + __url__,
    url=__url__,
    author=__author__,
    author_email=__author_email__,
    keywords=__keywords__,

    license='MIT',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Electronic Design Automation (EDA)',
    ],
    packages=[NAME, NAME + '.cli'],
    install_requires=['numpy', 'pyparsing>=3.0'],
    entry_points={
        'console_scripts': ['gatedelay=gatedelay.cli.main:main'],
    },
)
