from setuptools import setup

DEPENDENCIES = [
	'numpy',
	'scipy',
	'pandas',
	'rich'
]

setup(
	name = "ltirelay",
	version = "0.1.0",
	description = "Capacity of the Gaussian relay channel with linear time-invariant relaying",
	url = "to add",
	python_requires = ">=3.8",
	license = "MIT",

	packages = ["ltirelay", "ltirelay.channel", "ltirelay.optimizer", "ltirelay.oracle", "ltirelay.spectral", "ltirelay.filterbank"],
	install_requires = DEPENDENCIES,
	extras_require = {
		'test': ["hypothesis"],
		'docs': ["mkdocs-material", "mkdocstrings[python]"]
	},
	entry_points = {
		'console_scripts': ["ltirelay = ltirelay.cli:main"]
	},
	classifiers = [
		"Intended Audience :: Science/Research",
		"License :: OSI Approved :: MIT License",
		"Natural Language :: English",
		"Programming Language :: Python",
		"Programming Language :: Python :: 3 :: Only",
		"Programming Language :: Python :: 3.8",
		"Topic :: Scientific/Engineering :: Information Analysis",
	],
)
