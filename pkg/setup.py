"""Package definition."""

from setuptools import find_packages, setup

with open('README.md', 'r') as f:
    long_description = f.read()

setup(
    name='ldfm',
    version='0.1.0',
    packages=find_packages(exclude=['tests']),
    description='Multi-label feature selection with a linear encoder-decoder over learned numeric labels',
    long_description=long_description,
    long_description_content_type='text/markdown',
    author='LDFM contributors',
    keywords=['multi-label', 'feature-selection', 'ml-knn', 'mulan'],
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=['numpy>=1.21', 'scipy>=1.7', 'scikit-learn>=1.0'],
    entry_points={'console_scripts': ['ldfm=ldfm.cli:main']},
    python_requires='>=3.8'
)
