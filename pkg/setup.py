#!/usr/bin/env python
"""Setup script for backwards compatibility with older pip."""

from setuptools import setup

# All configuration is in setup.cfg / pyproject.toml
setup()
