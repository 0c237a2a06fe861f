#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct 20 09:40:12 2026

Losses, reverse mode gradients through the residual recursion and the
momentum SGD loop.
"""

import time
import logging
import collections

import numpy as np

from scipy.special import logsumexp, softmax

from . import seeding
from .resnet import (
    PreprocessParams, LayerParams, forward_batch, check_input,
    initial_state)
from .settings import DEFAULT_LR, DEFAULT_MOMENTUM, GAP_WINDOW
from .exceptions import (
    DimensionError, ParameterError, NonFiniteError, DivergenceError)

logger = logging.getLogger(__name__)

LOSSES = ("squared", "ramp", "cross_entropy")


class LossSpec():
    """A loss ``l(x, g)`` with its gradient and local Lipschitz envelope.
    Values and gradients accept a single state or a batch of states (last
    axis is the state dimension).

    For the ramp loss a one dimensional output is a binary problem with
    labels ``g = +1/-1`` and margin ``g x``; with more outputs ``g`` is one
    hot and the margin is ``x_y - max_{j != y} x_j``. The loss is
    ``clip(1 - margin / gamma, 0, 1)``.

    Attributes:
        kind (str): ``"squared"``, ``"ramp"`` or ``"cross_entropy"``
        margin (float): the ramp margin gamma
    """

    def __init__(self, kind="squared", margin=1.0):
        if kind not in LOSSES:
            raise NameError("loss: {kind} not found".format(kind=kind))

        if not margin > 0:
            raise ParameterError(
                "margin must be positive (got {0})".format(margin))

        self.kind = kind
        self.margin = float(margin)

    def __repr__(self):
        return "<LossSpec {0} margin={1}>".format(self.kind, self.margin)

    def _ramp_margin(self, x, g):
        if x.shape[-1] == 1:
            return (g * x)[..., 0], g

        labels = np.argmax(g, axis=-1)
        picked = np.take_along_axis(x, labels[..., np.newaxis], axis=-1)
        others = np.where(
            np.arange(x.shape[-1]) == labels[..., np.newaxis], -np.inf, x)
        runner = np.argmax(others, axis=-1)
        rival = np.take_along_axis(x, runner[..., np.newaxis], axis=-1)

        direction = (np.eye(x.shape[-1])[labels] -
                     np.eye(x.shape[-1])[runner])

        return (picked - rival)[..., 0], direction

    def value(self, x, g):
        x, g = np.asarray(x, dtype=float), np.asarray(g, dtype=float)

        if self.kind == "squared":
            return np.sum((x - g) ** 2, axis=-1)

        if self.kind == "ramp":
            margin, _ = self._ramp_margin(x, g)
            return np.clip(1.0 - margin / self.margin, 0.0, 1.0)

        return logsumexp(x, axis=-1) - np.sum(g * x, axis=-1)

    def grad_x(self, x, g):
        x, g = np.asarray(x, dtype=float), np.asarray(g, dtype=float)

        if self.kind == "squared":
            return 2 * (x - g)

        if self.kind == "ramp":
            margin, direction = self._ramp_margin(x, g)
            active = (margin > 0) & (margin < self.margin)
            return np.where(
                active[..., np.newaxis], -direction / self.margin, 0.0)

        return (softmax(x, axis=-1) * np.sum(g, axis=-1, keepdims=True) - g)

    def lipschitz(self, n):
        """Global Lipschitz constant in x (ramp and cross entropy only)"""

        if self.kind == "ramp":
            return (1.0 if n == 1 else np.sqrt(2)) / self.margin

        if self.kind == "cross_entropy":
            return np.sqrt(2)

        raise ParameterError("squared loss is only locally Lipschitz")

    def kappa(self, x, x_tilde, g):
        """Local Lipschitz envelope: ``|l(x, g) - l(x~, g)| <= kappa
        |x - x~|_2``"""

        x, x_tilde = np.asarray(x, dtype=float), np.asarray(x_tilde, float)
        g = np.asarray(g, dtype=float)

        if self.kind == "squared":
            return (np.linalg.norm(x - g, axis=-1) +
                    np.linalg.norm(x_tilde - g, axis=-1))

        if self.kind == "ramp" and x.shape[-1] == 1:
            return np.linalg.norm(g, axis=-1) / self.margin

        return np.full(x.shape[:-1], self.lipschitz(x.shape[-1]))


def loss_eval(spec, x, g):
    x, g = np.asarray(x, dtype=float), np.asarray(g, dtype=float)

    if x.shape != g.shape:
        raise DimensionError(
            "state has shape {0}, target has shape {1}".format(
                x.shape, g.shape))

    return float(spec.value(x, g))


def loss_envelope(spec, n, b_out, b_in):
    """Bounds (B_l, B_kappa) of the loss and of kappa for states with
    infinity norm below b_out and targets with 2-norm below b_in

    Returns:
        tuple: (b_ell, b_kappa)
    """

    if spec.kind == "squared":
        radius = np.sqrt(n) * b_out + b_in
        return radius ** 2, 2 * radius

    if spec.kind == "ramp":
        return 1.0, spec.lipschitz(n)

    return 2 * b_out + np.log(n), np.sqrt(2)


class GradientBundle():
    """Gradients with the same layout as :py:class:`DiscreteParams`

    Attributes:
        d_pre (PreprocessParams): gradients of U and a
        d_layers (list): gradients of V, W, b, c for each layer
        loss_value (float): mean loss at the forward output
        d_alpha (float): gradient with respect to the dead zone end alpha
        d_beta (float): gradient with respect to beta
    """

    def __init__(self, d_pre, d_layers, loss_value, d_alpha=0.0, d_beta=0.0):
        self.d_pre = d_pre
        self.d_layers = d_layers
        self.loss_value = loss_value
        self.d_alpha = d_alpha
        self.d_beta = d_beta

    def blocks(self):
        blocks = self.d_pre.blocks()

        for layer in self.d_layers:
            blocks.extend(layer.blocks())

        return blocks


def backprop_batch(params, act, spec, D, G):
    """Gradient of the mean loss over a batch

    Args:
        params (DiscreteParams): parameters
        act (ActivationSpec): activation
        spec (LossSpec): loss
        D (numpy.ndarray): a (S, n_d) input matrix
        G (numpy.ndarray): a (S, n) target matrix

    Returns:
        GradientBundle: gradients and mean loss
    """

    D = check_input(np.atleast_2d(D), params.n_d)
    G = np.atleast_2d(np.asarray(G, dtype=float))

    if G.shape != (D.shape[0], params.n):
        raise DimensionError(
            "targets have shape {0}, expected {1}".format(
                G.shape, (D.shape[0], params.n)))

    samples = D.shape[0]
    tau = params.horizon / params.L

    # forward pass keeping what the backward pass needs
    z0 = D @ params.pre.U.T + params.pre.a
    x = initial_state(params.pre, act, D)
    states, pre_acts, hidden = [x], [], []

    for layer in params.layers:
        u = x @ layer.V.T + layer.b
        h = act(u)
        x = x + tau * (h @ layer.W.T + layer.c)
        pre_acts.append(u)
        hidden.append(h)
        states.append(x)

    loss_value = float(np.mean(spec.value(x, G)))
    adjoint = spec.grad_x(x, G) / samples

    d_layers = [None] * params.L
    d_alpha, d_beta = 0.0, 0.0

    for index in reversed(range(params.L)):
        layer = params.layers[index]
        u, h, x = pre_acts[index], hidden[index], states[index]

        d_W = tau * adjoint.T @ h
        d_c = tau * np.sum(adjoint, axis=0)
        through = tau * adjoint @ layer.W
        delta = through * act.derivative(u)
        d_V = delta.T @ x
        d_b = np.sum(delta, axis=0)

        grad_alpha, grad_beta = act.grad_shift(u)
        d_alpha += float(np.sum(through * grad_alpha))
        d_beta += float(np.sum(through * grad_beta))

        adjoint = adjoint + delta @ layer.V

        d_layers[index] = LayerParams(d_V, d_W, d_b, d_c)

        if not all(np.all(np.isfinite(block))
                   for block in d_layers[index].blocks()):
            raise NonFiniteError(
                "non finite gradient at layer {0}".format(index),
                layer=index)

    delta = adjoint * act.derivative(z0)
    d_pre = PreprocessParams(delta.T @ D, np.sum(delta, axis=0))

    grad_alpha, grad_beta = act.grad_shift(z0)
    d_alpha += float(np.sum(adjoint * grad_alpha))
    d_beta += float(np.sum(adjoint * grad_beta))

    if not (all(np.all(np.isfinite(block)) for block in d_pre.blocks()) and
            np.isfinite(d_alpha) and np.isfinite(d_beta)):
        raise NonFiniteError("non finite gradient at the input layer")

    return GradientBundle(d_pre, d_layers, loss_value, d_alpha, d_beta)


def backprop(params, act, spec, d, g):
    """Gradient of ``l(x^L(d), g)`` with respect to every parameter

    Args:
        params (DiscreteParams): parameters
        act (ActivationSpec): activation
        spec (LossSpec): loss
        d (numpy.ndarray): one input
        g (numpy.ndarray): its target

    Returns:
        GradientBundle: the gradients
    """

    d, g = np.asarray(d, dtype=float), np.asarray(g, dtype=float)

    if d.ndim != 1 or g.shape != (params.n, ):
        raise DimensionError(
            "backprop takes one input and one target of dimension {0}"
            .format(params.n))

    return backprop_batch(params, act, spec, d[np.newaxis], g[np.newaxis])


class TrainConfig():
    """SGD hyperparameters

    Attributes:
        lr (float): learning rate
        momentum (float): momentum in [0, 1)
        epochs (int): number of epochs
        batch_size (int): samples per step
        seed (int): seed of the shuffling stream
        projection (float): if set, parameters are projected on this budget
            after every step
        learn_shift (bool): learn the dead zone (alpha, beta) too
        record_time (bool): fill the wall clock column of the log
    """

    def __init__(self, lr=DEFAULT_LR, momentum=DEFAULT_MOMENTUM, epochs=1,
                 batch_size=32, seed=0, projection=None, learn_shift=False,
                 record_time=False):
        if not lr >= 0:
            raise ParameterError("lr must be non negative (got {0})".format(
                lr))

        if not 0 <= momentum < 1:
            raise ParameterError(
                "momentum must be in [0, 1) (got {0})".format(momentum))

        if int(epochs) < 1 or int(batch_size) < 1:
            raise ParameterError(
                "epochs and batch_size must be positive (got {0}, {1})"
                .format(epochs, batch_size))

        if int(seed) < 0:
            raise ParameterError("seed must be non negative")

        if projection is not None and not projection > 0:
            raise ParameterError(
                "projection must be positive (got {0})".format(projection))

        self.lr = float(lr)
        self.momentum = float(momentum)
        self.epochs = int(epochs)
        self.batch_size = int(batch_size)
        self.seed = int(seed)
        self.projection = projection
        self.learn_shift = bool(learn_shift)
        self.record_time = bool(record_time)

    def replace(self, **kwargs):
        values = dict(vars(self))
        values.update(kwargs)

        return TrainConfig(**values)


LogRow = collections.namedtuple(
    "LogRow",
    ["epoch", "train_loss", "test_loss", "param_inf_norm", "wall_ms"])


class TrainingLog():
    """Per epoch training record

    Attributes:
        rows (list): a :py:class:`LogRow` for each epoch
        activation (ActivationSpec): the activation after training
    """

    columns = LogRow._fields

    def __init__(self):
        self.rows = []
        self.activation = None

    def __len__(self):
        return len(self.rows)

    def append(self, row):
        self.rows.append(row)

    def train_losses(self):
        return np.array([row.train_loss for row in self.rows])

    def test_losses(self):
        return np.array([row.test_loss for row in self.rows])

    def window(self, size=GAP_WINDOW):
        """Mean train and test losses over the last ``size`` epochs"""

        rows = self.rows[-size:]

        return (float(np.mean([row.train_loss for row in rows])),
                float(np.mean([row.test_loss for row in rows])))

    def gaps(self):
        return self.test_losses() - self.train_losses()


def mean_loss(params, act, spec, data):
    outputs = forward_batch(params, act, data.inputs)
    return float(np.mean(spec.value(outputs, data.targets)))


def accuracy(params, act, data):
    """Fraction of correctly classified samples"""

    outputs = forward_batch(params, act, data.inputs)

    if params.n == 1:
        hits = np.sign(outputs[:, 0]) == np.sign(data.targets[:, 0])

    else:
        hits = np.argmax(outputs, axis=1) == np.argmax(data.targets, axis=1)

    return float(np.mean(hits))


def sgd_train(params, act, spec, data, cfg, test=None):
    """Train a copy of ``params`` with momentum SGD

    Args:
        params (DiscreteParams): initial parameters (not modified)
        act (ActivationSpec): activation
        spec (LossSpec): loss
        data (Dataset): training samples, with ``inputs`` and ``targets``
        cfg (TrainConfig): hyperparameters
        test (Dataset): optional test samples

    Returns:
        tuple: trained (DiscreteParams, TrainingLog)
    """

    samples = len(data.inputs)

    if samples == 0:
        raise ParameterError("training set is empty")

    params = params.copy()
    rng = seeding.make_rng(cfg.seed, seeding.SHUFFLE)

    buffers = [np.zeros_like(block) for block in params.blocks()]
    shift_buffer = np.zeros(2)
    log = TrainingLog()
    step = 0

    for epoch in range(1, cfg.epochs + 1):
        start = time.perf_counter()
        order = rng.permutation(samples)

        for first in range(0, samples, cfg.batch_size):
            batch = order[first:first + cfg.batch_size]

            try:
                grads = backprop_batch(
                    params, act, spec, data.inputs[batch],
                    data.targets[batch])

            except NonFiniteError as exc:
                raise DivergenceError(
                    "training diverged at step {0}: {1}".format(step, exc),
                    step=step)

            if not np.isfinite(grads.loss_value):
                raise DivergenceError(
                    "training diverged at step {0}".format(step), step=step)

            for block, grad, buffer in zip(
                    params.blocks(), grads.blocks(), buffers):
                buffer *= cfg.momentum
                buffer += grad
                block -= cfg.lr * buffer

            if cfg.learn_shift:
                shift_buffer = cfg.momentum * shift_buffer + np.array(
                    [grads.d_alpha, grads.d_beta])
                alpha, beta = np.maximum(
                    np.array([act.alpha, act.beta]) - cfg.lr * shift_buffer,
                    0.0)
                act = act.with_shift(alpha, beta)

            if cfg.projection is not None:
                params.project(cfg.projection)

            step += 1

        train_loss = mean_loss(params, act, spec, data)
        test_loss = mean_loss(params, act, spec, test) \
            if test is not None else np.nan

        if not np.isfinite(train_loss):
            raise DivergenceError(
                "training loss not finite after epoch {0}".format(epoch),
                step=step)

        wall_ms = 0.0

        if cfg.record_time:
            wall_ms = 1000 * (time.perf_counter() - start)

        log.append(LogRow(
            epoch, train_loss, test_loss, params.inf_norm(), wall_ms))

        logger.debug("epoch %s: train %s, test %s" % (
            epoch, train_loss, test_loss))

    log.activation = act

    return params, log
