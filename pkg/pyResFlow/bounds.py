#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Oct 21 10:21:09 2026

Closed form generalization bounds of discrete and continuous residual
networks. Every bound is the sum of three terms::

    leading       = 2 sqrt(2) n B_kappa B_theta M / sqrt(S)
    concentration = 4 B_ell sqrt(2 log(4 / delta) / S)
    structural    <= 0, driven by the activation dead zone

Logarithms are natural.
"""

import logging
import collections

import numpy as np

from .exceptions import ParameterError

logger = logging.getLogger(__name__)

CONVENTIONS = ("as-printed", "match-discrete")

BoundReport = collections.namedtuple(
    "BoundReport",
    ["leading", "concentration", "structural", "total", "m_factor"])


class BoundInputs():
    """Inputs of the bound calculators

    Attributes:
        n (int): output dimension
        n_d (int): input dimension
        T (float): horizon
        S (int): sample count
        delta (float): confidence in (0, 1)
        budget (ParamBudget): B_theta and B_in
        act (ActivationSpec): activation
        b_kappa (float): envelope of the loss local Lipschitz constant
        b_ell (float): bound on the loss
        L (int): layers, discrete bound only
        c_slack (float or list): one slack constant for each layer or a
            single value (broadcast, and the continuous constant)
        clamp (bool): clamp slack constants outside their admissible
            interval instead of rejecting them
        convention (str): structural term of the continuous bound,
            ``"as-printed"`` or ``"match-discrete"``
    """

    def __init__(self, n, n_d, T, S, delta, budget, act, b_kappa, b_ell,
                 L=None, c_slack=0.0, clamp=False, convention="as-printed"):
        if int(n) < 1 or int(n_d) < 1 or int(S) < 1:
            raise ParameterError(
                "n, n_d and S must be positive (got {0}, {1}, {2})".format(
                    n, n_d, S))

        if not T >= 0:
            raise ParameterError("T must be non negative (got {0})".format(T))

        if not 0 < delta < 1:
            raise ParameterError(
                "delta must be in (0, 1) (got {0})".format(delta))

        if not b_kappa >= 0 or not b_ell >= 0:
            raise ParameterError("b_kappa and b_ell must be non negative")

        if L is not None and int(L) < 1:
            raise ParameterError("L must be positive (got {0})".format(L))

        if convention not in CONVENTIONS:
            raise ParameterError(
                "convention: {0} not in {1}".format(convention, CONVENTIONS))

        self.n = int(n)
        self.n_d = int(n_d)
        self.T = float(T)
        self.S = int(S)
        self.delta = float(delta)
        self.budget = budget
        self.act = act
        self.b_kappa = float(b_kappa)
        self.b_ell = float(b_ell)
        self.L = None if L is None else int(L)
        self.c_slack = c_slack
        self.clamp = clamp
        self.convention = convention

    def replace(self, **kwargs):
        values = dict(vars(self))
        values.update(kwargs)

        return BoundInputs(**values)

    def to_record(self):
        return {
            "n": self.n, "n_d": self.n_d, "T": self.T, "L": self.L,
            "S": self.S, "delta": self.delta,
            "b_theta": self.budget.b_theta, "b_in": self.budget.b_in,
            "activation": self.act.name, "lip": self.act.lip,
            "structural_constant": self.act.structural_constant(),
            "b_kappa": self.b_kappa, "b_ell": self.b_ell,
        }


def c_slack_limit(inputs):
    """Upper end of the admissible interval of the slack constants"""

    denominator = inputs.act.structural_constant()

    if denominator == 0:
        return float(inputs.S)

    return min(
        np.sqrt(inputs.S) * (1 + 2 * inputs.act.lip * inputs.budget.b_theta)
        / (2 * denominator), float(inputs.S))


def _admissible(inputs, values):
    values = np.array(values, dtype=float, ndmin=1)
    limit = c_slack_limit(inputs)
    outside = (values < 0) | (values > limit)

    if np.any(outside):
        if not inputs.clamp:
            raise ParameterError(
                "slack constants must be in [0, {0}] (got {1})".format(
                    limit, values[outside].tolist()))

        logger.warning(
            "Clamping %s slack constants to [0, %s]" % (
                int(np.sum(outside)), limit))
        values = np.clip(values, 0.0, limit)

    return values


def _layer_slack(inputs):
    if inputs.L is None:
        raise ParameterError("the discrete bound needs L")

    values = np.array(inputs.c_slack, dtype=float, ndmin=1)

    if values.size == 1:
        values = np.full(inputs.L, values[0])

    if values.size != inputs.L:
        raise ParameterError(
            "expected {0} slack constants, got {1}".format(
                inputs.L, values.size))

    return _admissible(inputs, values)


def m_factor(T, act, n_d, budget):
    """Depth independent complexity factor::

        (Lip B_in sqrt(2 log(2 n_d)) + 1 + T (1 + 2 Lip B)) exp(2 T Lip B^2)
    """

    lip, bound = act.lip, budget.b_theta

    return float(
        (lip * budget.b_in * np.sqrt(2 * np.log(2 * n_d)) + 1 +
         T * (1 + 2 * lip * bound)) * np.exp(2 * T * lip * bound ** 2))


def _shared_terms(inputs):
    factor = m_factor(inputs.T, inputs.act, inputs.n_d, inputs.budget)
    leading = (2 * np.sqrt(2) * inputs.n * inputs.b_kappa *
               inputs.budget.b_theta * factor / np.sqrt(inputs.S))
    concentration = 4 * inputs.b_ell * np.sqrt(
        2 * np.log(4 / inputs.delta) / inputs.S)

    return factor, float(leading), float(concentration)


def discrete_bound(inputs):
    """Bound of a network with L layers and per layer slack constants

    Returns:
        BoundReport: the decomposed bound
    """

    slack = _layer_slack(inputs)
    factor, leading, concentration = _shared_terms(inputs)

    act, bound = inputs.act, inputs.budget.b_theta
    tau = inputs.T / inputs.L

    structural = -(2 * np.sqrt(2) * inputs.n * inputs.b_kappa * bound *
                   act.structural_constant() *
                   np.exp(inputs.T * act.lip * bound ** 2) / inputs.S *
                   tau * np.sum(slack))

    # no negative zero
    structural = float(structural) + 0.0

    return BoundReport(
        leading, concentration, structural,
        leading + concentration + structural, factor)


def continuous_bound(inputs):
    """Bound of the continuous model with one slack constant

    With ``convention="as-printed"`` the structural term is
    ``-(Lip_phi1 alpha + Lip_phi2 beta) exp(T Lip B^2) T C / S``; with
    ``"match-discrete"`` it carries the same ``2 sqrt(2) n B_kappa B`` factor
    as the discrete bound.

    Under ``"match-discrete"`` a clamped slack constant keeps the total non
    negative, as in the discrete bound. ``"as-printed"`` has no such
    guarantee: with a small ``B_kappa`` the structural term can exceed the
    other two. The total is then reported as is, and a warning is logged.
    """

    values = np.array(inputs.c_slack, dtype=float, ndmin=1)

    if values.size != 1:
        raise ParameterError("the continuous bound takes one slack constant")

    slack = float(_admissible(inputs, values)[0])
    factor, leading, concentration = _shared_terms(inputs)

    act, bound = inputs.act, inputs.budget.b_theta
    structural = (act.structural_constant() *
                  np.exp(inputs.T * act.lip * bound ** 2) *
                  inputs.T * slack / inputs.S)

    if inputs.convention == "match-discrete":
        structural *= 2 * np.sqrt(2) * inputs.n * inputs.b_kappa * bound

    structural = -float(structural) + 0.0
    total = leading + concentration + structural

    if total < 0:
        logger.warning(
            "Continuous bound is negative (%s) with the %s convention" % (
                total, inputs.convention))

    return BoundReport(leading, concentration, structural, total, factor)


def layered_recursion(inputs):
    """Iterate the layer wise complexity recursion::

        R^0 = Lip B (B_in sqrt(2 log(2 n_d)) + 1) / sqrt(S)
        R^(l+1) = (1 + 2 tau Lip B^2) R^l
                  + max(tau B (1 + 2 Lip B) / sqrt(S)
                        - tau B (Lip_phi1 alpha + Lip_phi2 beta) C^(l+1) / S,
                        0)

    Returns:
        list: R^0 ... R^L
    """

    slack = _layer_slack(inputs)
    act, bound = inputs.act, inputs.budget.b_theta
    lip, root = act.lip, np.sqrt(inputs.S)
    tau = inputs.T / inputs.L

    value = (lip * bound * (inputs.budget.b_in *
             np.sqrt(2 * np.log(2 * inputs.n_d)) + 1) / root)
    values = [float(value)]

    growth = 1 + 2 * tau * lip * bound ** 2
    drive = tau * bound * (1 + 2 * lip * bound) / root
    relief = tau * bound * act.structural_constant() / inputs.S

    for index in range(inputs.L):
        value = growth * value + max(drive - relief * slack[index], 0.0)
        values.append(float(value))

    return values


def recursion_closed_form(inputs):
    """Value of R^L without slack, ``(1 + x)^L R^0 + drive sum_k (1 + x)^k``
    with ``x = 2 tau Lip B^2``"""

    act, bound = inputs.act, inputs.budget.b_theta
    lip, root = act.lip, np.sqrt(inputs.S)
    tau = inputs.T / inputs.L

    start = (lip * bound * (inputs.budget.b_in *
             np.sqrt(2 * np.log(2 * inputs.n_d)) + 1) / root)
    growth = 1 + 2 * tau * lip * bound ** 2
    drive = tau * bound * (1 + 2 * lip * bound) / root

    powers = growth ** np.arange(inputs.L)

    return float(growth ** inputs.L * start + drive * np.sum(powers))


def recursion_envelope(inputs):
    """Depth independent envelope ``B / sqrt(S) * M``"""

    return (inputs.budget.b_theta / np.sqrt(inputs.S) *
            m_factor(inputs.T, inputs.act, inputs.n_d, inputs.budget))


def bound_rows(inputs_list, kind="discrete"):
    """Flatten a sweep of bounds for CSV export

    Args:
        inputs_list (list): :py:class:`BoundInputs` instances
        kind (str): ``"discrete"`` or ``"continuous"``

    Returns:
        list: one dict for each input
    """

    calculators = {"discrete": discrete_bound,
                   "continuous": continuous_bound}

    if kind not in calculators:
        raise ParameterError("kind: {0} not supported".format(kind))

    calculator = calculators[kind]
    rows = []

    for inputs in inputs_list:
        report = calculator(inputs)
        row = inputs.to_record()
        row.update(report._asdict())
        row["kind"] = kind
        row["convention"] = inputs.convention
        rows.append(row)

    return rows
