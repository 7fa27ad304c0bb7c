# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

sys.path.insert(0, os.path.abspath("../.."))


# -- Project information -----------------------------------------------------

project = "qevo"
copyright = "2026, the qevo developers"
author = "the qevo developers"


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
]

templates_path = ["_templates"]
pygments_style = "nord"
exclude_patterns = []


# -- Options for HTML output -------------------------------------------------

html_theme = "alabaster"
html_theme_options = {
    "description": "Genetic synthesis of Clifford+T circuits.",
    "show_powered_by": False,
    "show_related": False,
    "pre_bg": "#3B4252",
    "page_width": 1140,
}
html_static_path = ["_static"]
