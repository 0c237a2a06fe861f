# -*- coding: utf-8 -*-

"""Top-level package for residual networks as dynamical systems, Rademacher
complexity estimation and generalization bounds."""

__author__ = """pyResFlow developers"""
__email__ = 'resflow-dev@users.noreply.github.com'
__version__ = '0.1.0'
