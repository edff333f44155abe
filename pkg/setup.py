import setuptools

with open('README.md', 'r') as file:
    long_description = file.read()

setuptools.setup(
        name='drawext',
        version='0.1.0',
        license='MIT',
        description='Extend partial 1-planar and IC-planar drawings to drawings of a whole graph.',
        long_description=long_description,
        long_description_content_type='text/markdown',
        packages=setuptools.find_packages(exclude=['tests', 'tests.*']),
        classifiers=[
            'Programming Language :: Python :: 3.8',
            'Programming Language :: Python :: 3.9',
            'License :: OSI Approved :: MIT License',
            'Operating System :: OS Independent',
            'Typing :: Typed',
            'Topic :: Scientific/Engineering :: Mathematics',
            'Intended Audience :: Science/Research',
            'Development Status :: 3 - Alpha',
        ],
        python_requires='>=3.8',
        install_requires=[
            'networkx>=2.6',
        ],
        extras_require={
            'test': ['pytest>=6.0', 'hypothesis>=6.0'],
            'docs': ['sphinx', 'sphinx_rtd_theme', 'recommonmark'],
        },
        entry_points={
            'console_scripts': ['drawext = drawext.cli:main'],
        },
)
