# Configuration file for the Sphinx documentation builder.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

project = "ldfm"
copyright = "2026, LDFM contributors"
author = "LDFM contributors"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
]

source_suffix = ".rst"
master_doc = "index"
exclude_patterns = ["_build"]

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "ldfmdoc"

autodoc_member_order = "bysource"
