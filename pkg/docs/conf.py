#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# tr2c documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys

sys.path.append('..')
import tr2c


# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
    'sphinx.ext.githubpages',
    'sphinx.ext.napoleon',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'tr2c'
copyright = '2026, tr2c developers'
author = 'tr2c developers'

# The full version, including alpha/beta/rc tags.
release = tr2c.__version__
# The short X.Y version.
version = '.'.join(release.split('.')[:2])

language = None
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = 'classic'
html_static_path = ['_static']
htmlhelp_basename = 'tr2cdoc'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
    'sklearn': ('https://scikit-learn.org/stable/', None),
}

viewcode_import = True


# -- Options for LaTeX and manual page output -----------------------------

latex_documents = [
    (master_doc, 'tr2c.tex', 'tr2c Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'tr2c', 'tr2c Documentation', [author], 1)
]
