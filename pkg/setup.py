from setuptools import setup, find_packages

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name="rqsolv",
    version='0.1.0',
    description="Decides residual rational solvability of one-relator groups and computes the maximal residually "
                "rationally solvable quotient.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=['examples', 'examples.*']),
    install_requires=[
        'numpy>=1.17', 'tqdm>=4.31.1', 'psutil>5.6.0'
    ],
    extras_require={
        'test': ['pytest>=6.0', 'hypothesis>=5.0', 'sympy>=1.5'],
    },
    entry_points={
        'console_scripts': ['rqsolv = rqsolv.cli:main'],
    },
    python_requires='>=3.6.0',
    classifiers=[
        "Programming Language :: Python :: 3",
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics"
    ],
)
