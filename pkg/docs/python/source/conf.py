import os
import sys

# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Project information -----------------------------------------------------

project = 'impg'
copyright = '2026, impg contributors'
author = 'impg contributors'
release = '0.1.0'

# -- General configuration ---------------------------------------------------

sys.path.insert(0, os.path.abspath('../../../python'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.githubpages'
]

templates_path = ['_templates']
exclude_patterns = []

napoleon_google_docstring = True
napoleon_numpy_docstring = False

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
html_theme_options = {
    'style_external_links': True,
    'style_nav_header_background': '#2980B9'
}

autodoc_member_order = 'bysource'
