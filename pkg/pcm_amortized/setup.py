from setuptools import find_packages, setup

setup(
    name="pcm_amortized",
    packages=find_packages(exclude=["pcm_amortized_tests"]),
    install_requires=[
        "dagster",
        "numpy>=1.22",
        "pandas",
        "pandera",
        "pydantic>=2.0",
        "python-dotenv",
        "scipy>=1.8",
    ],
    extras_require={"dev": ["dagster-webserver", "pytest"]},
    entry_points={"console_scripts": ["pcm-amortized=pcm_amortized.cli:main"]},
)
