#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 19 10:02:16 2026

Structured activation functions. Every activation is written as::

    psi(x) = phi1(x - alpha) - phi2(-x - beta)

where ``phi1`` and ``phi2`` are nondecreasing Lipschitz pieces vanishing on
``(-inf, 0]``. The interval ``[-beta, alpha]`` is the dead zone, where
``psi`` is zero.
"""

import logging

import numpy as np

from .exceptions import ParameterError

logger = logging.getLogger(__name__)


class MonotonePiece():
    """Base class of a nondecreasing piece vanishing on nonpositive reals

    Attributes:
        lip (float): the Lipschitz constant of the piece
    """

    lip = 0.0

    def eval(self, y):
        raise NotImplementedError("eval not implemented in base class")

    def deriv(self, y):
        """Derivative in the interior, 0 for y <= 0"""

        raise NotImplementedError("deriv not implemented in base class")

    def __repr__(self):
        return "<{name} lip={lip}>".format(
            name=self.__class__.__name__, lip=self.lip)


class LinearPiece(MonotonePiece):
    """y -> slope * y on y >= 0"""

    def __init__(self, slope):
        if slope < 0:
            raise ParameterError(
                "slope must be non negative (got {0})".format(slope))

        self.slope = float(slope)
        self.lip = self.slope

    def eval(self, y):
        return self.slope * np.maximum(y, 0.0)

    def deriv(self, y):
        return np.where(np.asarray(y) > 0, self.slope, 0.0)


class ExpPiece(MonotonePiece):
    """y -> scale * (1 - exp(-y)) on y >= 0, the negative branch of ELU"""

    def __init__(self, scale):
        if scale <= 0:
            raise ParameterError(
                "scale must be positive (got {0})".format(scale))

        self.scale = float(scale)
        self.lip = self.scale

    def eval(self, y):
        return -self.scale * np.expm1(-np.maximum(y, 0.0))

    def deriv(self, y):
        y = np.asarray(y)
        return np.where(
            y > 0, self.scale * np.exp(-np.maximum(y, 0.0)), 0.0)


class TanhPiece(MonotonePiece):
    """y -> tanh(y) on y >= 0"""

    lip = 1.0

    def eval(self, y):
        return np.tanh(np.maximum(y, 0.0))

    def deriv(self, y):
        y = np.asarray(y)
        return np.where(y > 0, 1.0 - np.tanh(np.maximum(y, 0.0)) ** 2, 0.0)


def zero_piece():
    return LinearPiece(0.0)


class ActivationSpec():
    """An activation with its decomposition ``(phi1, phi2, alpha, beta)``

    Instances are callable and act elementwise::

        from pyResFlow.activation import catalog
        relu = catalog("ReLU")
        relu([-1., 2.])  # array([0., 2.])

    Attributes:
        phi1 (MonotonePiece): the right piece
        phi2 (MonotonePiece): the left piece
        alpha (float): right end of the dead zone
        beta (float): minus the left end of the dead zone
        name (str): catalog name
        params (tuple): catalog parameters
    """

    def __init__(self, phi1, phi2, alpha=0.0, beta=0.0, name="custom",
                 params=()):
        if alpha < 0 or beta < 0:
            raise ParameterError(
                "alpha and beta must be non negative (got {0}, {1})".format(
                    alpha, beta))

        self.phi1 = phi1
        self.phi2 = phi2
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.name = name
        self.params = tuple(float(param) for param in params)

    def __repr__(self):
        return "<ActivationSpec {name}{params} alpha={alpha} beta={beta}>"\
            .format(name=self.name, params=list(self.params),
                    alpha=self.alpha, beta=self.beta)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.phi1.eval(x - self.alpha) - self.phi2.eval(-x - self.beta)

    def derivative(self, x):
        """Almost everywhere derivative. Kinks and the closed dead zone get
        the one-sided value of the pieces at zero, which is 0"""

        x = np.asarray(x, dtype=float)
        return (self.phi1.deriv(x - self.alpha) +
                self.phi2.deriv(-x - self.beta))

    def grad_shift(self, x):
        """Return the elementwise partial derivatives of psi(x) with respect
        to alpha and beta

        Args:
            x (numpy.ndarray): pre activations

        Returns:
            tuple: (d psi / d alpha, d psi / d beta)
        """

        x = np.asarray(x, dtype=float)
        return (-self.phi1.deriv(x - self.alpha),
                self.phi2.deriv(-x - self.beta))

    @property
    def lip(self):
        """Lipschitz constant of psi"""

        return max(self.phi1.lip, self.phi2.lip)

    def structural_constant(self):
        """Return Lip_phi1 * alpha + Lip_phi2 * beta"""

        return self.phi1.lip * self.alpha + self.phi2.lip * self.beta

    def with_shift(self, alpha, beta):
        """Return a copy with a new dead zone"""

        return ActivationSpec(
            self.phi1, self.phi2, alpha, beta, self.name, self.params)

    def to_record(self):
        return {
            "name": self.name,
            "params": list(self.params),
            "alpha": self.alpha,
            "beta": self.beta,
        }


def _check_count(name, params, allowed):
    if len(params) not in allowed:
        raise ParameterError(
            "activation {name} takes {allowed} parameters (got {count})"
            .format(name=name, allowed=" or ".join(
                str(count) for count in allowed), count=len(params)))


def _check_positive(name, **values):
    for key, value in values.items():
        if not value > 0:
            raise ParameterError(
                "activation {name}: {key} must be positive (got {value})"
                .format(name=name, key=key, value=value))


def _check_non_negative(name, **values):
    for key, value in values.items():
        if not value >= 0:
            raise ParameterError(
                "activation {name}: {key} must be non negative (got {value})"
                .format(name=name, key=key, value=value))


def _relu(params):
    _check_count("ReLU", params, (0, 1))

    # phi2 is zero, so a free beta never contributes
    beta = params[0] if params else 0.0
    _check_non_negative("ReLU", beta=beta)

    return LinearPiece(1.0), zero_piece(), 0.0, beta


def _prelu(params):
    _check_count("PReLU", params, (1, ))
    a1 = params[0]

    if not 0 <= a1 <= 1:
        raise ParameterError(
            "activation PReLU: a1 must be in [0, 1] (got {0})".format(a1))

    return LinearPiece(1.0), LinearPiece(a1), 0.0, 0.0


def _trelu(params):
    _check_count("TReLU", params, (1, ))
    _check_positive("TReLU", lam=params[0])

    return LinearPiece(1.0), zero_piece(), params[0], 0.0


def _elu(params):
    _check_count("ELU", params, (0, 1))
    a2 = params[0] if params else 1.0
    _check_positive("ELU", a2=a2)

    return LinearPiece(1.0), ExpPiece(a2), 0.0, 0.0


def _terelu(params):
    _check_count("TEReLU", params, (2, 3))
    lam1, lam2 = params[0], params[1]
    a2 = params[2] if len(params) == 3 else 1.0
    _check_positive("TEReLU", lam1=lam1, lam2=lam2, a2=a2)

    return LinearPiece(1.0), ExpPiece(a2), lam1, lam2


def _soft_threshold_sym(params):
    _check_count("SoftThresholdSym", params, (1, ))
    _check_positive("SoftThresholdSym", lam=params[0])

    return LinearPiece(1.0), LinearPiece(1.0), params[0], params[0]


def _soft_threshold_asym(params):
    _check_count("SoftThresholdAsym", params, (2, ))
    _check_positive("SoftThresholdAsym", lam1=params[0], lam2=params[1])

    return LinearPiece(1.0), LinearPiece(1.0), params[0], params[1]


def _tanh(params):
    _check_count("Tanh", params, (0, ))

    return TanhPiece(), TanhPiece(), 0.0, 0.0


def _dead_zone_leaky(params):
    _check_count("DeadZoneLeaky", params, (4, ))
    a, b, alpha, beta = params
    _check_non_negative("DeadZoneLeaky", a=a, b=b, alpha=alpha, beta=beta)

    return LinearPiece(a), LinearPiece(b), alpha, beta


CATALOG = {
    "ReLU": _relu,
    "PReLU": _prelu,
    "TReLU": _trelu,
    "ELU": _elu,
    "TEReLU": _terelu,
    "SoftThresholdSym": _soft_threshold_sym,
    "SoftThresholdAsym": _soft_threshold_asym,
    "Tanh": _tanh,
    "DeadZoneLeaky": _dead_zone_leaky,
}

# parameters used when a family is requested without its parameters
EXAMPLE_PARAMS = {
    "ReLU": [],
    "PReLU": [0.1],
    "TReLU": [0.5],
    "ELU": [1.0],
    "TEReLU": [0.5, 0.5, 1.0],
    "SoftThresholdSym": [0.5],
    "SoftThresholdAsym": [0.5, 0.25],
    "Tanh": [],
    "DeadZoneLeaky": [1.0, 0.05, 0.5, 0.5],
}


def catalog(name, params=()):
    """Build an activation of the catalog

    Args:
        name (str): one of the keys of :py:data:`CATALOG`
        params (list): family parameters, ``[a1]`` for PReLU, ``[lam]`` for
            TReLU and SoftThresholdSym, ``[a2]`` (optional) for ELU,
            ``[lam1, lam2, a2]`` for TEReLU, ``[lam1, lam2]`` for
            SoftThresholdAsym and ``[a, b, alpha, beta]`` for DeadZoneLeaky

    Returns:
        ActivationSpec: the activation
    """

    if name not in CATALOG:
        raise NameError("activation: {name} not found".format(name=name))

    params = [float(param) for param in params]
    phi1, phi2, alpha, beta = CATALOG[name](params)

    logger.debug("Built activation %s with params %s" % (name, params))

    return ActivationSpec(phi1, phi2, alpha, beta, name, params)


def activation_from_record(record):
    """Rebuild an activation from a record written by
    :py:meth:`ActivationSpec.to_record`. A record without shift keeps the
    catalog dead zone"""

    act = catalog(record["name"], record.get("params", []))

    if "alpha" in record or "beta" in record:
        act = act.with_shift(
            record.get("alpha", act.alpha), record.get("beta", act.beta))

    return act


def apply_elementwise(spec, v):
    return spec(v)


def apply_deriv(spec, v):
    return spec.derivative(v)
