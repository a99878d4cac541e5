from setuptools import setup, find_packages

with open('Readme.md') as f:
    readme = f.read()

with open('requirements.txt') as f:
    requirements = f.read().splitlines()

with open('requirements-test.txt') as f:
    test_requirements = f.read().splitlines()

setup(
    name='oldoind',
    version='0.1.0',
    author='oldoind developers',
    description='Decide and construct open-independent open-locating-dominating sets',
    long_description=readme,
    install_requires=requirements,
    extras_require={'test': test_requirements},
    python_requires='>=3.10',
    packages=find_packages(exclude=('tests', 'docs')),
)
