from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="energystudio",
    version="0.1.0",
    author="EnergyStudio developers",
    description="Free energies, functional inequalities and ground states of fast diffusion on hyperbolic model manifolds.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"energystudio.cli.defaults": ["*.ini"]},
    install_requires=[
        "numpy>=1.26.0,<3.0.0",
        "scipy>=1.11.0,<2.0.0",
        "pandas>=2.1.0,<3.0.0",
        "pydantic>=2.5.0,<3.0.0",
        "python-dotenv>=1.0.1,<2.0.0",
        "srsly>=2.5.1",
    ],
    extras_require={"test": ["pytest>=8.3.3,<9.0.0", "hypothesis>=6.100.0"]},
    entry_points={"console_scripts": ["energystudio=energystudio.cli.main:main"]},
    python_requires=">=3.10",
)
