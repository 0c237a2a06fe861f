#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 19 09:20:31 2026
"""


class DimensionError(ValueError):
    """Raised when array shapes don't agree"""


class ParameterError(ValueError):
    """Deal with values outside their admissible range"""


class NonFiniteError(ArithmeticError):
    """Raised when a state or a gradient becomes non finite

    Attributes:
        time (float): first offending time (ODE flows)
        layer (int): first offending layer (gradients)
    """

    def __init__(self, message, time=None, layer=None):
        super().__init__(message)
        self.time = time
        self.layer = layer


class DivergenceError(RuntimeError):
    """Raised when training loss is no more finite"""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class EnumerationBudgetError(RuntimeError):
    """Raised when an exact enumeration exceeds its budget"""


class ContractionError(ArithmeticError):
    """Raised when the classic contraction inequality is violated"""


class ConfigError(ValueError):
    """Deal with errors in configuration files

    Attributes:
        key (str): the offending key, if any
        line (int): the offending line, if any
    """

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line


class IDXFormatError(Exception):
    """Deal with issues in IDX data format"""


class DownloadError(ConnectionError):
    """Deal with connection issues while downloading data"""
