#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct 20 15:02:55 2026

Empirical Rademacher complexity of finite function classes::

    R(G) = 1/S E_eps [ max_j sum_s eps_s g_j(z_s) ]

computed exactly by enumerating every sign vector or approximated by Monte
Carlo, together with the contraction check of an activation applied on top
of a class and the soft-threshold class whose complexity has a closed form.
"""

import math
import logging
import collections

from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import seeding
from .resnet import forward_batch
from .activation import catalog
from .settings import (
    MAX_EXACT_SAMPLES, EXAMPLE33_MAX_SAMPLES, ENUMERATION_CHUNK,
    MC_MIN_DRAWS, MC_BATCH, CI_Z, CONTRACTION_TOL, IMPLIED_C_TOL)
from .exceptions import (
    DimensionError, ParameterError, EnumerationBudgetError, ContractionError)

logger = logging.getLogger(__name__)

# matrix entries evaluated at once during enumeration
CHUNK_CELLS = 2 ** 22

RademacherEstimate = collections.namedtuple(
    "RademacherEstimate", ["value", "kind", "draws", "half_width"])


class EvaluatedClass():
    """A finite class evaluated on a sample

    Attributes:
        values (numpy.ndarray): a (K, S) matrix, ``values[j, s] = g_j(z_s)``
        labels (list): optional metadata for each function
        symmetric (bool): True if the class is declared closed under
            negation
    """

    def __init__(self, values, labels=None, symmetric=False):
        values = np.array(values, dtype=float, ndmin=2)

        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DimensionError(
                "a class needs at least one function and one sample "
                "(got shape {0})".format(values.shape))

        if not np.all(np.isfinite(values)):
            raise ParameterError("class values must be finite")

        if labels is not None and len(labels) != values.shape[0]:
            raise DimensionError("one label for each function is needed")

        if symmetric:
            rows = {tuple(row) for row in values}

            if any(tuple(-row) not in rows for row in values):
                raise ParameterError("class declared symmetric is not")

        self.values = values
        self.labels = labels
        self.symmetric = symmetric

    def __repr__(self):
        return "<EvaluatedClass K={0} S={1}>".format(self.size, self.S)

    @property
    def S(self):
        return self.values.shape[1]

    @property
    def size(self):
        return self.values.shape[0]

    def apply(self, act):
        """Return the class psi o G"""

        return EvaluatedClass(act(self.values), self.labels)

    def extend(self, other):
        if other.S != self.S:
            raise DimensionError("classes are evaluated on different samples")

        return EvaluatedClass(np.vstack([self.values, other.values]))


def _chunk_sum(values, start, stop):
    samples = values.shape[1]
    index = np.arange(start, stop, dtype=np.int64)
    bits = (index[:, np.newaxis] >> np.arange(samples)) & 1
    signs = 1.0 - 2.0 * bits

    return float(np.sum(np.max(signs @ values.T, axis=1)))


def rademacher_exact(cls, workers=1):
    """Exact complexity by enumeration of all the 2^S sign vectors

    Chunks of sign vectors are reduced independently and summed with
    :py:func:`math.fsum`, so the result doesn't depend on ``workers``.

    Args:
        cls (EvaluatedClass): the class
        workers (int): threads used for enumeration

    Returns:
        RademacherEstimate: an exact estimate
    """

    samples = cls.S

    if samples > MAX_EXACT_SAMPLES:
        raise EnumerationBudgetError(
            "exact enumeration allowed up to S={0} (got S={1})".format(
                MAX_EXACT_SAMPLES, samples))

    total = 2 ** samples
    chunk = ENUMERATION_CHUNK

    while chunk > 1 and chunk * cls.size > CHUNK_CELLS:
        chunk //= 2

    chunk = min(chunk, total)
    starts = range(0, total, chunk)
    values = cls.values

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            sums = list(executor.map(
                lambda start: _chunk_sum(values, start, start + chunk),
                starts))

    else:
        sums = [_chunk_sum(values, start, start + chunk) for start in starts]

    value = math.fsum(sums) / total / samples

    if cls.symmetric:
        value = max(value, 0.0)

    logger.debug("Exact complexity %s over %s chunks" % (value, len(sums)))

    return RademacherEstimate(value, "exact", 0, 0.0)


def rademacher_mc(cls, draws, seed):
    """Monte Carlo estimate with a 95% normal confidence half width

    Args:
        cls (EvaluatedClass): the class
        draws (int): number of sign vectors
        seed (int): seed of the sign stream

    Returns:
        RademacherEstimate: a monte_carlo estimate
    """

    if draws < MC_MIN_DRAWS:
        raise ParameterError("draws must be at least {0} (got {1})".format(
            MC_MIN_DRAWS, draws))

    rng = seeding.make_rng(seed, seeding.SIGNS)
    sups = np.empty(draws)
    done = 0

    while done < draws:
        size = min(MC_BATCH, draws - done)
        signs = 2.0 * rng.integers(0, 2, size=(size, cls.S)) - 1.0
        sups[done:done + size] = np.max(signs @ cls.values.T, axis=1) / cls.S
        done += size

    value = float(np.mean(sups))
    half_width = float(CI_Z * np.std(sups, ddof=1) / np.sqrt(draws))

    return RademacherEstimate(value, "monte_carlo", draws, half_width)


class ContractionReport():
    """Outcome of :py:func:`contraction_check`

    Attributes:
        S (int): sample size
        activation (str): activation name
        r_g (float): complexity of G
        r_psi_g (float): complexity of psi o G (the left hand side)
        rhs_classic (float): Lip_psi * r_g
        slack (float): rhs_classic - r_psi_g
        implied_C (float): slack * S / (Lip_phi1 alpha + Lip_phi2 beta), nan
            when the denominator is zero
        bound_on_C (float): min(S, Lip_psi S r_g / denominator), nan when the
            denominator is zero
        in_range (bool): True when implied_C lies in [0, bound_on_C] up to
            tolerance (always True with a zero denominator)
    """

    fields = ["S", "activation", "r_g", "r_psi_g", "slack", "implied_C",
              "bound_on_C"]

    def __init__(self, S, activation, r_g, r_psi_g, rhs_classic, slack,
                 implied_C, bound_on_C, in_range):
        self.S = S
        self.activation = activation
        self.r_g = r_g
        self.r_psi_g = r_psi_g
        self.rhs_classic = rhs_classic
        self.slack = slack
        self.implied_C = implied_C
        self.bound_on_C = bound_on_C
        self.in_range = in_range

    @property
    def lhs(self):
        return self.r_psi_g

    def to_record(self):
        return {field: getattr(self, field) for field in self.fields}


def contraction_check(cls, act, workers=1):
    """Compare the complexity of psi o G with Lip_psi times the complexity of
    G and extract the slack constant of the refined inequality

    The classic inequality is checked with the absolute tolerance
    ``CONTRACTION_TOL``. The implied slack constant is only reported: when
    it falls outside ``[0, bound_on_C]`` a warning is logged and
    ``in_range`` is False. It never exceeds ``Lip_psi S r_g / denominator``,
    so ``in_range`` fails only when it exceeds S.

    Raises:
        ContractionError: if the classic inequality is violated
    """

    r_g = rademacher_exact(cls, workers).value
    r_psi_g = rademacher_exact(cls.apply(act), workers).value
    rhs = act.lip * r_g
    slack = rhs - r_psi_g

    if slack < -CONTRACTION_TOL:
        raise ContractionError(
            "classic contraction violated by {0} with {1}".format(
                -slack, act))

    denominator = act.structural_constant()

    if denominator > 0:
        implied = slack * cls.S / denominator
        bound = min(cls.S, act.lip * cls.S * r_g / denominator)
        in_range = -IMPLIED_C_TOL <= implied <= bound + IMPLIED_C_TOL

        if not in_range:
            logger.warning(
                "implied C %s outside [0, %s] for %s" % (
                    implied, bound, act.name))

    else:
        implied, bound, in_range = float("nan"), float("nan"), True

    return ContractionReport(
        cls.S, act.name, r_g, r_psi_g, rhs, slack, implied, bound, in_range)


class SoftThresholdClassSpec():
    """The class ``{c1 |.|_2 + c2}`` with ``(c1, c2)`` in
    ``[0, eta] x [alpha, gamma]`` or in ``[-eta, 0] x [-gamma, -beta]``,
    evaluated on S unit norm samples, under the soft threshold with dead
    zone ``[-beta, alpha]``. Values may be :py:class:`fractions.Fraction` for
    exact arithmetic.
    """

    def __init__(self, eta, gamma, alpha, beta, S):
        if not (eta > 0 and gamma > 0 and alpha > 0 and beta > 0):
            raise ParameterError("eta, gamma, alpha, beta must be positive")

        if not max(alpha, beta) < gamma:
            raise ParameterError(
                "max(alpha, beta) must be below gamma (got {0}, {1}, {2})"
                .format(alpha, beta, gamma))

        if int(S) < 1:
            raise ParameterError("S must be positive (got {0})".format(S))

        self.eta = eta
        self.gamma = gamma
        self.alpha = alpha
        self.beta = beta
        self.S = int(S)


def example33_closed_form(spec):
    """Closed form complexities of the soft-threshold class and of its
    image

    Returns:
        dict: with keys ``r_g`` and ``r_psi_g``
    """

    S = spec.S
    binomial = math.comb(S - 1, S // 2)

    r_g = Fraction(binomial, 2 ** (S - 1)) * (spec.eta + spec.gamma)
    r_psi_g = Fraction(binomial, 2 ** S) * (
        2 * spec.eta + 2 * spec.gamma - spec.beta - spec.alpha)

    # Fraction times float is a float, Fraction times Fraction stays exact
    return {"r_g": r_g, "r_psi_g": r_psi_g}


def example33_class(spec):
    """Evaluate the candidate functions of the soft-threshold class

    The samples are the first basis vector repeated, so every function is
    constant on the sample. For each sign vector the objective is linear in
    the constant and psi is monotone, so the supremum over each parameter
    rectangle is attained at its corners, which include the dead zone
    boundaries ``alpha`` and ``-beta``.

    Returns:
        EvaluatedClass: the candidates evaluated on the samples
    """

    samples = np.zeros((spec.S, 2))
    samples[:, 0] = 1.0
    norms = np.linalg.norm(samples, axis=1)

    corners = []

    for c1 in (0.0, float(spec.eta)):
        for c2 in (float(spec.alpha), float(spec.gamma)):
            corners.append((c1, c2))

    for c1 in (-float(spec.eta), 0.0):
        for c2 in (-float(spec.gamma), -float(spec.beta)):
            corners.append((c1, c2))

    values = [c1 * norms + c2 for c1, c2 in corners]

    return EvaluatedClass(values, labels=corners)


def example33_bruteforce(spec, workers=1):
    """Brute force complexities of the soft-threshold class and of its
    image, by enumeration of every sign vector"""

    if spec.S > EXAMPLE33_MAX_SAMPLES:
        raise EnumerationBudgetError(
            "brute force allowed up to S={0} (got S={1})".format(
                EXAMPLE33_MAX_SAMPLES, spec.S))

    cls = example33_class(spec)
    act = catalog(
        "SoftThresholdAsym", [float(spec.alpha), float(spec.beta)])

    return {
        "r_g": rademacher_exact(cls, workers).value,
        "r_psi_g": rademacher_exact(cls.apply(act), workers).value,
    }


def hypothesis_class_eval(params_grid, act, coord, data, layer=None):
    """Evaluate one state coordinate of a grid of networks on a sample

    Args:
        params_grid (list): :py:class:`DiscreteParams` sharing architecture
        act (ActivationSpec): activation
        coord (int): state coordinate (0-based)
        data (numpy.ndarray): a (S, n_d) input matrix
        layer (int): layer to read, the last one by default

    Returns:
        EvaluatedClass: values[j, s] = x^layer_coord(d_s; params_grid[j])
    """

    if not params_grid:
        raise ParameterError("parameter grid is empty")

    first = params_grid[0]

    for params in params_grid[1:]:
        if not params.same_architecture(first):
            raise DimensionError(
                "architecture mismatch in grid: {0} vs {1}".format(
                    params, first))

    if not 0 <= coord < first.n:
        raise IndexError("coordinate {0} out of range".format(coord))

    layer = first.L if layer is None else layer

    values = [forward_batch(params, act, data, keep=True)[layer][:, coord]
              for params in params_grid]

    return EvaluatedClass(values)


LayerComplexity = collections.namedtuple(
    "LayerComplexity",
    ["layer", "complexity", "growth_bound", "recursion_bound"])


def layer_complexity_profile(params_grid, act, coord, data, workers=1):
    """Exact complexity of a coordinate class at every layer

    Next to each value two bounds computed from the previous layer are
    reported: ``growth_bound``, the finite class bound R(l) + max_j
    |x^(l+1)_j - x^l_j|_2 sqrt(2 log K) / S, which always holds, and
    ``recursion_bound``, the layered recursion step evaluated with the
    largest parameter norm of the grid, reported for comparison only.

    Returns:
        list: a :py:class:`LayerComplexity` for each layer 0..L
    """

    first = params_grid[0]
    data = np.atleast_2d(data)
    samples = data.shape[0]

    states = np.array([
        forward_batch(params, act, data, keep=True)[:, :, coord]
        for params in params_grid])

    size = len(params_grid)
    norm = max(params.inf_norm() for params in params_grid)
    tau, lip = first.tau, act.lip

    profile = []
    previous = None

    for index in range(first.L + 1):
        complexity = rademacher_exact(
            EvaluatedClass(states[:, index]), workers).value

        if previous is None:
            growth, recursion = float("nan"), float("nan")

        else:
            increments = states[:, index] - states[:, index - 1]
            growth = previous + float(
                np.max(np.linalg.norm(increments, axis=1)) *
                np.sqrt(2 * np.log(size)) / samples)
            recursion = ((1 + 2 * tau * lip * norm ** 2) * previous +
                         tau * norm * (1 + 2 * lip * norm) /
                         np.sqrt(samples))

        profile.append(LayerComplexity(index, complexity, growth, recursion))
        previous = complexity

    return profile
