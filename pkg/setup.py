from setuptools import setup, find_packages

setup(
    name='hlbs',
    version='0.1.0',
    python_requires='>3.12',
    packages=find_packages(include=[
        'hlbs',
        'hlbs.*',
    ]),
    install_requires=[
        'numpy==2.1.2',
        'scipy==1.14.1',
        'matplotlib==3.9.2',
        'compress_pickle==2.1.0',
    ],
    extras_require={
        'test': [
            'pytest>=8.0',
            'hypothesis>=6.100',
        ],
    },
    entry_points={
        'console_scripts': [
            'hlbs=hlbs.cli:main',
        ],
    },
)
