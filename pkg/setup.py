import setuptools

setuptools.setup(
    name="qevo",
    version="0.1.0",
    description="Evolve Clifford+T quantum circuits toward target states",
    long_description=open("README.md", "r", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    licence="Apache Licence Version 2.0",
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "jax>=0.4.14",
        "jaxlib>=0.4.14",
        "numpy",
        "pydantic>=2",
        "tomli>=1.1.0; python_version < '3.11'",
        "tomli-w",
        "tqdm",
    ],
    entry_points={"console_scripts": ["qevo=qevo.cli:main"]},
)
