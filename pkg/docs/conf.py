#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# Sphinx configuration of the pyResFlow documentation.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

import pyResFlow  # noqa: E402

# -- General configuration ---------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.intersphinx',
    'sphinx.ext.napoleon',
    'sphinx.ext.mathjax',
]

source_suffix = '.rst'
master_doc = 'index'

project = 'pyResFlow'
copyright = "2026, pyResFlow developers"
author = "pyResFlow developers"

version = pyResFlow.__version__
release = pyResFlow.__version__

language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

# napoleon: document __init__ arguments with the class
napoleon_include_init_with_doc = True

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
    'requests': ('https://requests.readthedocs.io/en/latest/', None),
}

# -- Options for HTML output -------------------------------------------

html_theme = 'alabaster'
htmlhelp_basename = 'pyResFlowdoc'

# -- Options for LaTeX, manual page and Texinfo output -----------------

latex_documents = [
    (master_doc, 'pyResFlow.tex', 'pyResFlow Documentation', author,
     'manual'),
]

man_pages = [
    (master_doc, 'pyResFlow', 'pyResFlow Documentation', [author], 1)
]

texinfo_documents = [
    (master_doc, 'pyResFlow', 'pyResFlow Documentation', author,
     'pyResFlow', 'Residual network flows and generalization bounds.',
     'Science'),
]
