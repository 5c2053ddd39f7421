"""
Setup configuration for hkinv-verify
"""

from setuptools import setup, find_packages

# Read README for long description
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

# Read requirements
with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="hk-involution-census",
    version="1.0.0",
    description="Verification toolkit for symplectic involutions on hyperkähler fourfolds with b2 = 23",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="backend"),
    package_dir={"": "backend"},
    package_data={"apps.epw": ["fixtures/*.toml"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Framework :: Django :: 5.0",
    ],
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={
        "dev": [
            "pytest>=7.4.3",
            "pytest-django>=4.7.0",
            "hypothesis>=6.92.0",
            "black>=23.12.1",
            "flake8>=7.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "hkinv-verify=apps.core.management.commands.verify:main",
        ],
    },
)
