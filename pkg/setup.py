import os

from setuptools import setup

# get __version__ variable
here = os.path.abspath(os.path.dirname(__file__))
exec(open(os.path.join(here, 'burgesspy', '_version.py')).read())

if __name__ == "__main__":
    setup(name="burgesspy",
          version=__version__,
          description="Exact Dirichlet characters, character sums and "
                      "numerical checks of Burgess-type moment bounds",
          long_description=open("README.md").read(),
          long_description_content_type="text/markdown",
          license="MIT License",
          classifiers=["Development Status :: 3 - Alpha",
                       "Intended Audience :: Education",
                       "Intended Audience :: Science/Research",
                       "Topic :: Scientific/Engineering",
                       "Topic :: Scientific/Engineering :: Mathematics",
                       "Programming Language :: Python :: 3.8",
                       "Programming Language :: Python :: 3.9",
                       "Programming Language :: Python :: 3.10",
                       "Programming Language :: Python :: Implementation :: CPython",
                       "Operating System :: POSIX :: Linux",
                       'Operating System :: Microsoft :: Windows',
                       "Operating System :: MacOS :: MacOS X"],
          install_requires=["numpy",
                            "scikit-learn",
                            "tensorboardX",
                            "tqdm",
                            "click",
                            "typing_extensions"],
          packages=["burgesspy",
                    "burgesspy.experiments"],
          python_requires=">=3.8.0",
          zip_safe=False,
          package_data={'burgesspy': ['py.typed']},
          entry_points={'console_scripts': ['burgesspy=burgesspy.cli:cli']})
