from setuptools import setup, find_packages

def parse_requirements(filename):
    with open(filename, "r", encoding="utf-8") as f:
        return [
            line.strip()
            for line in f
            if line.strip() and not line.startswith("#")
        ]


setup(
    name="tametop",
    version="0.1.0",
    description=(
        "Exact and numerical tame topology: ordinals below epsilon-zero, tame subsets "
        "of the line, Pillay rank on stratified complexes and Whitney condition checks"
    ),
    long_description=open("README.md", "r", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=parse_requirements("requirements.txt"),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.10",
    include_package_data=True,
    entry_points={
        "console_scripts": [
            "tametop=tametop.cli.cli_starter:main",
        ],
    },
    keywords="o-minimal tame topology Cantor-Bendixson Pillay rank Whitney stratification",
)
