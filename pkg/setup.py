from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [
        line.split("#")[0].strip()
        for line in fh
        if line.strip() and not line.startswith("#")
    ]

# Development tools are installed through the "dev" extra
dev_requirements = [r for r in requirements if r.split(">=")[0] in ("pytest", "black", "flake8")]
requirements = [r for r in requirements if r not in dev_requirements]

setup(
    name="pwtest",
    version="1.0.0",
    description="Two-sample hypothesis testing with the projected Wasserstein distance",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={
        "dev": dev_requirements,
        "oracle": ["POT>=0.9.0"],
    },
    entry_points={
        "console_scripts": [
            "pwtest=pwtest.cli:main",
        ],
    },
    include_package_data=True,
)
