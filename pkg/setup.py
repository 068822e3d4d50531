import pathlib
from setuptools import setup

HERE = pathlib.Path(__file__).parent
README = (HERE / "README.md").read_text()

setup(
    name="stcpivot",
    version="0.1.0",
    description="Correlation clustering approximations through strong triadic closure labelings.",
    long_description=README,
    long_description_content_type="text/markdown",
    author="Zucchinetti Hervé",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    packages=[
        "stcpivot",
        "stcpivot/examples",
        "stcpivot/utils"
    ],
    include_package_data=True,
    install_requires=[
        "numpy>=1.21",
        "scipy>=1.7",
        "click>=8.0,<8.2",
        "tqdm>=4.62",
    ],
    extras_require={
        "tests": ["pytest>=6.2", "networkx>=2.6"],
    },
    entry_points={
        "console_scripts": ["stcpivot=stcpivot.cli:main"],
    },
)
