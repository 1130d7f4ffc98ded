from setuptools import setup, find_packages

setup(
    name="squarepeg",
    version="0.1.0",
    package_dir={"": "src", "config": "config"},
    packages=find_packages(where="src") + ["config"],
    package_data={"config": ["default_suite.yaml"]},
    install_requires=[
        "numpy>=1.21.0",
        "scipy>=1.7.0",
        "pandas>=1.3.0",
        "pydantic>=2.0.0",
        "pyyaml>=6.0",
        "python-dotenv>=0.19.0",
        "matplotlib>=3.5.0",
    ],
    extras_require={
        "test": ["hypothesis>=6.0.0"],
    },
    entry_points={
        "console_scripts": ["squarepeg=cli_io.cli:main"],
    },
    python_requires=">=3.8",
)
