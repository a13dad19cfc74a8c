import os
from setuptools import find_packages, setup

with open(os.path.join(os.path.dirname(__file__), 'README.md')) as readme:
    README = readme.read()

TEST_REQUIREMENTS = [
    'pytest',
    'hypothesis',
]

setup(
    name='mixdescent',
    version='0.1.0',
    packages=find_packages(),
    include_package_data=True,
    package_data={
        'mixdescent': ['importers/tests/libsvm/*.libsvm']
    },
    description='weight descent for mixture models under alpha-divergences',
    long_description=README,
    long_description_content_type='text/markdown',
    test_suite='runtests.runtests',
    license='AGPL-3.0',
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.8',
        'pandas>=1.5',
        'openpyxl~=3.0',
        'dpath>=2.0',
    ],
    tests_require=TEST_REQUIREMENTS,
    extras_require={
        'test': TEST_REQUIREMENTS,
    },
    entry_points={
        'console_scripts': [
            'mixdescent=mixdescent.management:main',
        ],
    },
    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    zip_safe=False,
)
