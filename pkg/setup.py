"""Package up wcusp_waves: the winged-cusp wave library and its `wcusp` CLI."""

from setuptools import setup

with open("requirements.modules.txt") as f:
    requirements = f.read().splitlines()

with open("README.md") as f:
    long_description = f.read()

from wcusp_waves import __version__

setup(
    name="wcusp_waves",
    description="Skeletons, simulations and pattern classification for winged-cusp waves",
    python_requires=">=3.8",
    install_requires=requirements,
    license="MIT license",
    packages=[
        "wcusp_waves",
        "wcusp_waves.commands",
        "wcusp_waves.config",
        "wcusp_waves.core",
        "wcusp_waves.figures",
        "wcusp_waves.models",
        "wcusp_waves.pde",
        "wcusp_waves.shared",
        "wcusp_waves.skeleton",
    ],
    package_data={"wcusp_waves.figures": ["*.json"]},
    entry_points={"console_scripts": ["wcusp=wcusp_waves.app:run"]},
    long_description=long_description,
    long_description_content_type="text/markdown",
    version=__version__,
    zip_safe=False,
)
