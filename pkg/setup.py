from setuptools import setup, find_packages

pkgs = ['numpy==1.26.4',
	'scipy==1.11.4',
	'pandas==2.1.4']

tests_pkgs = ['pytest==7.4.4',
	'hypothesis==6.92.1']

setup(name='oam_optics',
      version='1.0',
      description='Compiler and simulator of single-photon OAM and path optical setups',
      python_requires='>=3.9',
      license='Apache 2.0',
      zip_safe=False,
      install_requires=pkgs,
      extras_require={'tests': tests_pkgs},
      packages=find_packages(exclude=['*.tests', '*.tests.*', 'tests.*', 'tests']),
      entry_points={'console_scripts': ['oam-optics=oam_optics.cli:main']},
      classifiers=[
          'Intended Audience :: Science/Research',
          'Programming Language :: Python',
          'Topic :: Scientific/Engineering :: Physics',
          'Operating System :: Unix'
      ]
      )
