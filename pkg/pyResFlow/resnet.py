#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 19 11:15:40 2026

Discrete residual networks and their continuous time limit.

A discrete network with ``L`` layers and horizon ``T`` maps an input ``d`` to::

    x^0 = psi(U d + a)
    x^(l+1) = x^l + tau * (W^l psi(V^l x^l + b^l) + c^l),   tau = T / L

which is the explicit Euler scheme of the ODE::

    dx/dt = W(t) psi(V(t) x + b(t)) + c(t)

Norms of parameter blocks follow a ``convention``: ``"induced"`` (default)
uses the induced infinity norm, the maximum row 1-norm, for matrices and
the maximum absolute entry for vectors; ``"entry"`` uses the maximum absolute
entry for every block.
"""

import json
import struct
import logging

import numpy as np

from scipy.integrate import trapezoid

from .settings import PATH_QUADRATURE_POINTS
from .exceptions import DimensionError, ParameterError, NonFiniteError

logger = logging.getLogger(__name__)

# n_d, n, m, L as int64, then T as float64, all little endian
HEADER = struct.Struct("<qqqqd")

CONVENTIONS = ("induced", "entry")

INTEGRATORS = ("euler", "rk4")


def block_norm(block, convention="induced"):
    """Return the infinity norm of a parameter block

    The default ``"induced"`` norm of a matrix is its largest row 1-norm,
    so that ``|A x|_inf <= |A| |x|_inf`` and the state bounds hold for any
    input dimension. ``"entry"`` is the largest absolute entry: with it a
    row of n_d entries equal to B_theta maps the input ball to a value n_d
    times larger than the state bound allows. Vectors use the largest
    absolute entry under both conventions.

    Args:
        block (numpy.ndarray): a matrix or a vector
        convention (str): ``"induced"`` or ``"entry"``

    Returns:
        float: the norm
    """

    if convention not in CONVENTIONS:
        raise ParameterError(
            "convention: {0} not in {1}".format(convention, CONVENTIONS))

    block = np.asarray(block, dtype=float)

    if block.size == 0:
        return 0.0

    if block.ndim == 2 and convention == "induced":
        return float(np.max(np.sum(np.abs(block), axis=1)))

    return float(np.max(np.abs(block)))


def _project_block(block, b_theta, convention):
    """Project a block in place onto the ball of radius b_theta"""

    if block.ndim == 2 and convention == "induced":
        norms = np.sum(np.abs(block), axis=1)
        scale = np.where(
            norms > b_theta, b_theta / np.maximum(norms, 1e-300), 1.0)
        block *= scale[:, np.newaxis]

    else:
        np.clip(block, -b_theta, b_theta, out=block)


class ParamBudget():
    """Parameter and data budgets

    Attributes:
        b_theta (float): bound on parameter norms
        b_in (float): bound on input data
    """

    def __init__(self, b_theta, b_in):
        if not b_theta > 0 or not b_in > 0:
            raise ParameterError(
                "budgets must be positive (got b_theta={0}, b_in={1})".format(
                    b_theta, b_in))

        self.b_theta = float(b_theta)
        self.b_in = float(b_in)

    def __repr__(self):
        return "<ParamBudget b_theta={0} b_in={1}>".format(
            self.b_theta, self.b_in)


class PreprocessParams():
    """The input layer ``x^0 = psi(U d + a)``

    Attributes:
        U (numpy.ndarray): a (n, n_d) matrix
        a (numpy.ndarray): a (n, ) vector
    """

    def __init__(self, U, a):
        self.U = np.array(U, dtype=float, ndmin=2)
        self.a = np.array(a, dtype=float, ndmin=1)

        if self.a.ndim != 1 or self.U.shape[0] != self.a.shape[0]:
            raise DimensionError(
                "U has shape {0} but a has shape {1}".format(
                    self.U.shape, self.a.shape))

    @property
    def n(self):
        return self.U.shape[0]

    @property
    def n_d(self):
        return self.U.shape[1]

    def blocks(self):
        return [self.U, self.a]

    def inf_norm(self, convention="induced"):
        return max(block_norm(block, convention) for block in self.blocks())

    def copy(self):
        return PreprocessParams(self.U.copy(), self.a.copy())


class LayerParams():
    """Parameters of one residual block

    Attributes:
        V (numpy.ndarray): a (m, n) matrix
        W (numpy.ndarray): a (n, m) matrix
        b (numpy.ndarray): a (m, ) vector
        c (numpy.ndarray): a (n, ) vector
    """

    def __init__(self, V, W, b, c):
        self.V = np.array(V, dtype=float, ndmin=2)
        self.W = np.array(W, dtype=float, ndmin=2)
        self.b = np.array(b, dtype=float, ndmin=1)
        self.c = np.array(c, dtype=float, ndmin=1)

        m, n = self.V.shape

        if (self.W.shape != (n, m) or self.b.shape != (m, ) or
                self.c.shape != (n, )):
            raise DimensionError(
                "inconsistent layer shapes V={0} W={1} b={2} c={3}".format(
                    self.V.shape, self.W.shape, self.b.shape, self.c.shape))

    @property
    def n(self):
        return self.V.shape[1]

    @property
    def m(self):
        return self.V.shape[0]

    def blocks(self):
        return [self.V, self.W, self.b, self.c]

    def inf_norm(self, convention="induced"):
        return max(block_norm(block, convention) for block in self.blocks())

    def copy(self):
        return LayerParams(
            self.V.copy(), self.W.copy(), self.b.copy(), self.c.copy())


def _blocks_equal(first, second):
    return len(first) == len(second) and all(
        np.array_equal(a, b) for a, b in zip(first, second))


class DiscreteParams():
    """All the learnable parameters of a discrete network

    Attributes:
        pre (PreprocessParams): input layer
        layers (list): a list of :py:class:`LayerParams`
        horizon (float): the time horizon T
    """

    def __init__(self, pre, layers, horizon):
        layers = list(layers)

        if len(layers) < 1:
            raise ParameterError("a network needs at least one layer")

        if not horizon > 0:
            raise ParameterError(
                "horizon must be positive (got {0})".format(horizon))

        m = layers[0].m

        for index, layer in enumerate(layers):
            if layer.n != pre.n or layer.m != m:
                raise DimensionError(
                    "layer {0} has (n, m) = ({1}, {2}), expected "
                    "({3}, {4})".format(index, layer.n, layer.m, pre.n, m))

        self.pre = pre
        self.layers = layers
        self.horizon = float(horizon)

    def __repr__(self):
        return "<DiscreteParams n_d={0} n={1} m={2} L={3} T={4}>".format(
            self.n_d, self.n, self.m, self.L, self.horizon)

    def __eq__(self, other):
        if not isinstance(other, DiscreteParams):
            return NotImplemented

        return (self.horizon == other.horizon and
                _blocks_equal(self.blocks(), other.blocks()))

    __hash__ = None

    @property
    def L(self):
        return len(self.layers)

    @property
    def tau(self):
        return self.horizon / self.L

    @property
    def n_d(self):
        return self.pre.n_d

    @property
    def n(self):
        return self.pre.n

    @property
    def m(self):
        return self.layers[0].m

    def same_architecture(self, other):
        return (self.n_d, self.n, self.m, self.L, self.horizon) == (
            other.n_d, other.n, other.m, other.L, other.horizon)

    def blocks(self):
        """Return every block in the canonical order U, a, then V, W, b, c
        for each layer"""

        blocks = self.pre.blocks()

        for layer in self.layers:
            blocks.extend(layer.blocks())

        return blocks

    def inf_norm(self, convention="induced"):
        return max(block_norm(block, convention) for block in self.blocks())

    def copy(self):
        return DiscreteParams(
            self.pre.copy(), [layer.copy() for layer in self.layers],
            self.horizon)

    def project(self, b_theta, convention="induced"):
        """Project every block in place onto the budget ball. Matrices
        rows are rescaled (induced) or entries clipped (entry)"""

        for block in self.blocks():
            _project_block(block, b_theta, convention)

    def to_bytes(self):
        """Serialize to the flat binary format: a header with n_d, n, m, L
        (little-endian int64) and T (little-endian float64), then every
        block in canonical order as row-major little-endian float64"""

        header = HEADER.pack(self.n_d, self.n, self.m, self.L, self.horizon)
        body = b"".join(
            np.ascontiguousarray(block, dtype="<f8").tobytes()
            for block in self.blocks())

        return header + body

    @classmethod
    def from_bytes(cls, data):
        if len(data) < HEADER.size:
            raise ParameterError("truncated parameter header")

        n_d, n, m, L, horizon = HEADER.unpack_from(data, 0)

        if min(n_d, n, m, L) < 1:
            raise ParameterError(
                "invalid dimensions in header: {0}".format((n_d, n, m, L)))

        shapes = [(n, n_d), (n, )] + [(m, n), (n, m), (m, ), (n, )] * L
        expected = HEADER.size + 8 * sum(
            int(np.prod(shape)) for shape in shapes)

        if len(data) != expected:
            raise ParameterError(
                "expected {0} bytes, got {1}".format(expected, len(data)))

        offset = HEADER.size
        blocks = []

        for shape in shapes:
            count = int(np.prod(shape))
            block = np.frombuffer(data, dtype="<f8", count=count,
                                  offset=offset)
            blocks.append(block.astype(float).reshape(shape))
            offset += 8 * count

        pre = PreprocessParams(*blocks[:2])
        layers = [LayerParams(*blocks[2 + 4 * index: 6 + 4 * index])
                  for index in range(L)]

        return cls(pre, layers, horizon)

    def to_record(self):
        return {
            "horizon": self.horizon,
            "pre": {"U": self.pre.U.tolist(), "a": self.pre.a.tolist()},
            "layers": [
                {"V": layer.V.tolist(), "W": layer.W.tolist(),
                 "b": layer.b.tolist(), "c": layer.c.tolist()}
                for layer in self.layers],
        }

    def to_json(self):
        return json.dumps(self.to_record(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        record = json.loads(text)

        pre = PreprocessParams(record["pre"]["U"], record["pre"]["a"])
        layers = [
            LayerParams(layer["V"], layer["W"], layer["b"], layer["c"])
            for layer in record["layers"]]

        return cls(pre, layers, record["horizon"])


def save_params(params, path):
    """Save parameters as binary (``.bin``) or JSON (any other suffix)"""

    if str(path).endswith(".bin"):
        with open(path, "wb") as handle:
            handle.write(params.to_bytes())

    else:
        with open(path, "w") as handle:
            handle.write(params.to_json())

    logger.debug("Parameters written to %s" % (path))


def load_params(path):
    if str(path).endswith(".bin"):
        with open(path, "rb") as handle:
            return DiscreteParams.from_bytes(handle.read())

    with open(path) as handle:
        return DiscreteParams.from_json(handle.read())


def time_grid(horizon, steps):
    """Uniform grid t_k = k * (T / steps), k = 0..steps. Shared by the
    discrete recursion and the integrators so grid times agree bitwise"""

    return np.arange(steps + 1) * (horizon / steps)


class ParameterPath():
    """Base class of time dependent layer parameters ``t -> LayerParams``"""

    def __call__(self, t):
        raise NotImplementedError("path not implemented in base class")


class FunctionPath(ParameterPath):
    """A path given by a function returning the (V, W, b, c) tuple"""

    def __init__(self, func):
        self.func = func

    def __call__(self, t):
        return LayerParams(*self.func(t))


class FourierPath(ParameterPath):
    """A smooth path: for every block ``X``::

        X(t) = X_0 + sum_k A_k sin(2 pi k t / T + phase_k)

    Attributes:
        coefficients (list): for each of V, W, b, c an array with shape
            (modes + 1, *block_shape); item 0 is the constant term
        phases (numpy.ndarray): one phase for each mode
        horizon (float): the period T
    """

    def __init__(self, coefficients, phases, horizon):
        self.coefficients = [np.asarray(coef, dtype=float)
                             for coef in coefficients]
        self.phases = np.asarray(phases, dtype=float)
        self.horizon = float(horizon)

        modes = len(self.phases)

        for coef in self.coefficients:
            if coef.shape[0] != modes + 1:
                raise DimensionError(
                    "expected {0} coefficients, got {1}".format(
                        modes + 1, coef.shape[0]))

    @property
    def modes(self):
        return len(self.phases)

    def _omega(self):
        return 2 * np.pi * np.arange(1, self.modes + 1) / self.horizon

    def __call__(self, t):
        weights = np.concatenate(
            [[1.0], np.sin(self._omega() * t + self.phases)])

        return LayerParams(*[
            np.tensordot(weights, coef, axes=1)
            for coef in self.coefficients])

    def derivative(self, t):
        weights = np.concatenate(
            [[0.0], self._omega() * np.cos(self._omega() * t + self.phases)])

        return [np.tensordot(weights, coef, axes=1)
                for coef in self.coefficients]

    def sup_envelope(self, convention="induced"):
        """An analytic upper bound of the sup norm over time"""

        return max(block_norm(np.sum(np.abs(coef), axis=0), convention)
                   for coef in self.coefficients)

    def h1_envelope(self):
        """An analytic upper bound of the H1 seminorm"""

        omega = self._omega()

        return max(
            np.sqrt(self.horizon) * np.sum(
                omega * np.sqrt(np.sum(
                    coef[1:].reshape(self.modes, -1) ** 2, axis=1)))
            for coef in self.coefficients)


class GridPath(ParameterPath):
    """A path known on a grid of times

    Args:
        times (numpy.ndarray): ascending grid
        layers (list): a :py:class:`LayerParams` for each grid time
        kind (str): ``"previous"`` for the piecewise constant extension,
            ``"linear"`` for linear interpolation
    """

    def __init__(self, times, layers, kind="previous"):
        if kind not in ("previous", "linear"):
            raise ParameterError("kind: {0} not supported".format(kind))

        self.times = np.asarray(times, dtype=float)
        self.layers = list(layers)
        self.kind = kind

        if len(self.times) != len(self.layers) or len(self.layers) == 0:
            raise DimensionError("times and layers must have the same size")

    def __call__(self, t):
        # the last interval is closed and times past the end are held
        index = int(np.searchsorted(self.times, t, side="right")) - 1
        index = min(max(index, 0), len(self.layers) - 1)

        if self.kind == "previous" or index == len(self.layers) - 1:
            return self.layers[index]

        left, right = self.times[index], self.times[index + 1]
        weight = (t - left) / (right - left)

        if weight <= 0:
            return self.layers[index]

        return LayerParams(*[
            (1 - weight) * first + weight * second
            for first, second in zip(
                self.layers[index].blocks(),
                self.layers[index + 1].blocks())])


def _path_samples(path, horizon, points):
    times = np.linspace(0.0, horizon, points)
    return times, [path(t) for t in times]


def h1_seminorm(path, horizon, points=None):
    """Discrete H1 seminorm: for each block, the square root of the
    quadrature of squared (Frobenius) difference quotients; the maximum over
    blocks is returned"""

    points = points or PATH_QUADRATURE_POINTS
    times, samples = _path_samples(path, horizon, points)
    steps = np.diff(times)
    result = 0.0

    for block in range(4):
        values = np.array([sample.blocks()[block] for sample in samples])
        quotients = np.diff(values, axis=0).reshape(len(steps), -1) / \
            steps[:, np.newaxis]
        integral = np.sum(np.sum(quotients ** 2, axis=1) * steps)
        result = max(result, float(np.sqrt(integral)))

    return result


def sup_norm(path, horizon, points=None, convention="induced"):
    points = points or PATH_QUADRATURE_POINTS
    _, samples = _path_samples(path, horizon, points)

    return max(sample.inf_norm(convention) for sample in samples)


def l2_distance(path_a, path_b, horizon, points=None):
    """L2 distance in time of two paths (trapezoid rule on a uniform grid,
    Frobenius norm in space, maximum over blocks)"""

    points = points or 4 * PATH_QUADRATURE_POINTS
    times = np.linspace(0.0, horizon, points)
    squares = np.zeros((4, points))

    for index, t in enumerate(times):
        first, second = path_a(t).blocks(), path_b(t).blocks()

        for block in range(4):
            squares[block, index] = np.sum(
                (first[block] - second[block]) ** 2)

    return float(np.sqrt(max(
        trapezoid(squares[block], times) for block in range(4))))


class ContinuousParams():
    """Learnable parameters of the continuous model

    Attributes:
        pre (PreprocessParams): input layer
        path (ParameterPath): t -> LayerParams on [0, T]
        horizon (float): the time horizon T
    """

    def __init__(self, pre, path, horizon):
        if not horizon > 0:
            raise ParameterError(
                "horizon must be positive (got {0})".format(horizon))

        self.pre = pre
        self.path = path
        self.horizon = float(horizon)

        sample = path(0.0)

        if sample.n != pre.n:
            raise DimensionError(
                "path has n={0}, input layer has n={1}".format(
                    sample.n, pre.n))

        self.m = sample.m

    @property
    def n_d(self):
        return self.pre.n_d

    @property
    def n(self):
        return self.pre.n

    def sup_norm(self, points=None, convention="induced"):
        return sup_norm(self.path, self.horizon, points, convention)

    def h1_seminorm(self, points=None):
        return h1_seminorm(self.path, self.horizon, points)

    def inf_norm(self, points=None, convention="induced"):
        return max(self.pre.inf_norm(convention),
                   self.sup_norm(points, convention),
                   self.h1_seminorm(points))


class StateTrajectory():
    """States of one input along layers or time

    Attributes:
        states (numpy.ndarray): a (K + 1, n) array
        times (numpy.ndarray): the matching times
    """

    def __init__(self, states, times):
        self.states = np.asarray(states)
        self.times = np.asarray(times)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, index):
        return self.states[index]

    @property
    def final(self):
        return self.states[-1]


def _vector_field(layer, act, x):
    # x may be one state (n, ) or a batch (S, n)
    return act(x @ layer.V.T + layer.b) @ layer.W.T + layer.c


def check_input(d, n_d):
    d = np.asarray(d, dtype=float)

    if d.shape[-1:] != (n_d, ):
        raise DimensionError(
            "input has shape {0}, expected last dimension {1}".format(
                d.shape, n_d))

    return d


def initial_state(pre, act, d):
    return act(d @ pre.U.T + pre.a)


def discrete_forward(params, act, d):
    """Run the residual recursion on one input

    Args:
        params (DiscreteParams): network parameters
        act (ActivationSpec): activation
        d (numpy.ndarray): an input of dimension n_d

    Returns:
        StateTrajectory: states x^0 ... x^L at times l * T / L
    """

    d = check_input(d, params.n_d)

    if d.ndim != 1:
        raise DimensionError("discrete_forward takes a single input")

    tau = params.horizon / params.L
    x = initial_state(params.pre, act, d)
    states = [x]

    for layer in params.layers:
        x = x + tau * _vector_field(layer, act, x)
        states.append(x)

    return StateTrajectory(
        np.array(states), time_grid(params.horizon, params.L))


def forward_batch(params, act, D, keep=False):
    """Forward a sample matrix through the network

    Args:
        params (DiscreteParams): network parameters
        act (ActivationSpec): activation
        D (numpy.ndarray): a (S, n_d) input matrix
        keep (bool): return every layer instead of the output only

    Returns:
        numpy.ndarray: a (S, n) output, or a (L + 1, S, n) array
    """

    D = check_input(np.atleast_2d(D), params.n_d)

    tau = params.horizon / params.L
    x = initial_state(params.pre, act, D)
    states = [x]

    for layer in params.layers:
        x = x + tau * _vector_field(layer, act, x)
        states.append(x)

    if keep:
        return np.array(states)

    return x


def continuous_flow(params, act, d, integrator="euler", steps=100):
    """Integrate the continuous model on a uniform grid

    Args:
        params (ContinuousParams): parameters
        act (ActivationSpec): activation
        d (numpy.ndarray): an input of dimension n_d
        integrator (str): ``"euler"`` or ``"rk4"``
        steps (int): number of steps

    Returns:
        StateTrajectory: the states at ``time_grid(T, steps)``
    """

    if integrator not in INTEGRATORS:
        raise ParameterError(
            "integrator: {0} not in {1}".format(integrator, INTEGRATORS))

    if int(steps) < 1:
        raise ParameterError("steps must be positive (got {0})".format(steps))

    steps = int(steps)
    d = check_input(d, params.n_d)
    path = params.path

    h = params.horizon / steps
    times = time_grid(params.horizon, steps)
    x = initial_state(params.pre, act, d)
    states = [x]

    for k in range(steps):
        t = times[k]

        if integrator == "euler":
            x = x + h * _vector_field(path(t), act, x)

        else:
            middle = path(t + 0.5 * h)
            k1 = _vector_field(path(t), act, x)
            k2 = _vector_field(middle, act, x + 0.5 * h * k1)
            k3 = _vector_field(middle, act, x + 0.5 * h * k2)
            k4 = _vector_field(path(times[k + 1]), act, x + h * k3)
            x = x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)

        if not np.all(np.isfinite(x)):
            raise NonFiniteError(
                "non finite state at t={0}".format(times[k + 1]),
                time=times[k + 1])

        states.append(x)

    logger.debug("Integrated %s steps with %s" % (steps, integrator))

    return StateTrajectory(np.array(states), times)


def sample_params(cont, L):
    """Sample a continuous path at the left points t^l = l * T / L"""

    if int(L) < 1:
        raise ParameterError("L must be positive (got {0})".format(L))

    times = time_grid(cont.horizon, int(L))[:-1]

    return DiscreteParams(
        cont.pre.copy(), [cont.path(t).copy() for t in times], cont.horizon)


def extend_params(disc):
    """Piecewise constant extension: layer l on [t^l, t^(l+1)), the last
    interval being closed"""

    times = time_grid(disc.horizon, disc.L)[:-1]

    return ContinuousParams(
        disc.pre.copy(),
        GridPath(times, [layer.copy() for layer in disc.layers], "previous"),
        disc.horizon)


def state_bound(budget, act, T, l_over_L):
    """Bound on the infinity norm of the states at time T * l_over_L::

        (Lip B (B_in + 1) + t (Lip B^2 + B)) exp(t Lip B^2)

    Args:
        budget (ParamBudget): budgets
        act (ActivationSpec): activation
        T (float): horizon
        l_over_L (float): the fraction l / L in [0, 1]

    Returns:
        float: the bound
    """

    if not 0 <= l_over_L <= 1:
        raise ParameterError(
            "l_over_L must be in [0, 1] (got {0})".format(l_over_L))

    t = T * l_over_L
    lip, bound = act.lip, budget.b_theta

    return float(
        (lip * bound * (budget.b_in + 1) + t * (lip * bound ** 2 + bound)) *
        np.exp(t * lip * bound ** 2))


def layer_bounds(budget, act, T, L):
    return [state_bound(budget, act, T, index / L) for index in range(L + 1)]


def permute_params(disc, i1, i2):
    """Swap two state coordinates (0-based) in every layer. b is untouched

    Returns:
        DiscreteParams: parameters whose states are the swapped states of
        the original ones
    """

    for index in (i1, i2):
        if not 0 <= index < disc.n:
            raise IndexError(
                "coordinate {0} out of range [0, {1})".format(index, disc.n))

    order = np.arange(disc.n)
    order[[i1, i2]] = order[[i2, i1]]

    pre = PreprocessParams(disc.pre.U[order], disc.pre.a[order])
    layers = [
        LayerParams(layer.V[:, order], layer.W[order], layer.b.copy(),
                    layer.c[order])
        for layer in disc.layers]

    return DiscreteParams(pre, layers, disc.horizon)


def _random_matrix(rows, cols, bound, rng, convention):
    matrix = rng.uniform(-1.0, 1.0, size=(rows, cols))

    if convention == "entry":
        return bound * matrix

    # rows rescaled to a random 1-norm within the budget
    norms = np.maximum(np.sum(np.abs(matrix), axis=1), 1e-12)
    radius = bound * rng.uniform(0.5, 1.0, size=rows)

    return matrix * (radius / norms)[:, np.newaxis]


def random_params(n_d, n, m, L, T, budget, rng, convention="induced"):
    """Draw parameters within the budget"""

    bound = budget.b_theta
    pre = PreprocessParams(
        _random_matrix(n, n_d, bound, rng, convention),
        rng.uniform(-bound, bound, size=n))

    layers = [
        LayerParams(
            _random_matrix(m, n, bound, rng, convention),
            _random_matrix(n, m, bound, rng, convention),
            rng.uniform(-bound, bound, size=m),
            rng.uniform(-bound, bound, size=n))
        for _ in range(L)]

    return DiscreteParams(pre, layers, T)


def random_smooth_params(n_d, n, m, T, budget, rng, modes=3,
                         convention="induced"):
    """Draw a random Fourier path whose sup norm and H1 seminorm are both
    within the budget"""

    pre = PreprocessParams(
        _random_matrix(n, n_d, budget.b_theta, rng, convention),
        rng.uniform(-budget.b_theta, budget.b_theta, size=n))

    decay = 1.0 / np.arange(1, modes + 2)
    coefficients = []

    for shape in [(m, n), (n, m), (m, ), (n, )]:
        coef = rng.uniform(-1.0, 1.0, size=(modes + 1, ) + shape)
        coefficients.append(
            coef * decay.reshape((modes + 1, ) + (1, ) * len(shape)))

    phases = rng.uniform(0.0, 2 * np.pi, size=modes)
    path = FourierPath(coefficients, phases, T)

    scale = min(1.0, budget.b_theta / path.sup_envelope(convention),
                budget.b_theta / path.h1_envelope())
    path = FourierPath(
        [coef * scale for coef in coefficients], phases, T)

    return ContinuousParams(pre, path, T)


def constant_path_params(disc_layer, pre, T):
    """A continuous model with time independent parameters"""

    return ContinuousParams(pre, GridPath([0.0], [disc_layer]), T)


def init_params(n_d, n, m, L, T, rng, scale=1.0):
    """Training initialization: uniform weights scaled by fan-in, zero
    biases"""

    pre = PreprocessParams(
        scale * rng.uniform(-1, 1, size=(n, n_d)) / np.sqrt(n_d),
        np.zeros(n))

    layers = [
        LayerParams(
            scale * rng.uniform(-1, 1, size=(m, n)) / np.sqrt(n),
            scale * rng.uniform(-1, 1, size=(n, m)) / np.sqrt(m),
            np.zeros(m), np.zeros(n))
        for _ in range(L)]

    return DiscreteParams(pre, layers, T)
