#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Oct 22 09:05:33 2026

Synthetic and MNIST based datasets. Every generated sample satisfies
``|d|_2 + |g|_2 <= b_in``: inputs lie in a ball of radius ``b_in / 2`` and
targets have norm at most ``b_in / 2``.
"""

import os
import logging
import collections

import numpy as np

from . import seeding
from .activation import catalog
from .idx import load_idx
from .resnet import ParamBudget, forward_batch, random_params
from .settings import B_IN_DATA
from .exceptions import ParameterError

logger = logging.getLogger(__name__)

# radius shrink keeping norms strictly inside their ball after rounding
SAFETY = 1 - 1e-12

Dataset = collections.namedtuple(
    "Dataset", ["inputs", "targets", "meta"], defaults=[None])

KINDS = ("teacher_net", "gaussian_mixture", "two_moons", "mnist_subset")

DEFAULTS = {
    "teacher_net": {
        "n_d": 4, "n": 2, "m": 8, "depth": 4, "horizon": 1.0,
        "teacher_b_theta": 1.0, "noise": 0.05, "activation": "ReLU"},
    "gaussian_mixture": {
        "n_d": 4, "classes": 3, "separation": 0.6, "spread": 0.25},
    "two_moons": {"noise": 0.1},
    "mnist_subset": {
        "train_images": None, "train_labels": None, "test_images": None,
        "test_labels": None, "classes": [0, 1]},
}


class DatasetSpec():
    """What to generate

    Attributes:
        kind (str): one of :py:data:`KINDS`
        s_train (int): training samples
        s_test (int): test samples
        seed (int): seed of the data streams
        params (dict): per kind settings, see :py:data:`DEFAULTS`
        b_in (float): bound on ``|d|_2 + |g|_2``
    """

    def __init__(self, kind, s_train, s_test, seed=0, params=None,
                 b_in=B_IN_DATA):
        if kind not in KINDS:
            raise NameError("dataset: {kind} not found".format(kind=kind))

        if int(s_train) < 1 or int(s_test) < 1:
            raise ParameterError(
                "dataset sizes must be positive (got {0}, {1})".format(
                    s_train, s_test))

        unknown = set(params or {}) - set(DEFAULTS[kind])

        if unknown:
            raise ParameterError(
                "unknown {0} settings: {1}".format(kind, sorted(unknown)))

        self.kind = kind
        self.s_train = int(s_train)
        self.s_test = int(s_test)
        self.seed = int(seed)
        self.params = dict(DEFAULTS[kind])
        self.params.update(params or {})
        self.b_in = float(b_in)

    def replace(self, **kwargs):
        values = dict(
            kind=self.kind, s_train=self.s_train, s_test=self.s_test,
            seed=self.seed, params=self.params, b_in=self.b_in)
        values.update(kwargs)

        return DatasetSpec(**values)

    @property
    def output_dim(self):
        """Dimension of targets, the state dimension n of a model"""

        if self.kind == "teacher_net":
            return int(self.params["n"])

        if self.kind == "gaussian_mixture":
            return int(self.params["classes"])

        if self.kind == "two_moons":
            return 2

        return len(self.params["classes"])

    @property
    def is_classification(self):
        return self.kind != "teacher_net"


def clip_norm(X, radius):
    """Scale the rows of X whose 2-norm exceeds radius back into the ball"""

    norms = np.linalg.norm(X, axis=1, keepdims=True)
    scale = np.minimum(
        1.0, radius * SAFETY / np.maximum(norms, np.finfo(float).tiny))

    return X * scale


def ball_samples(count, dim, radius, rng):
    """Uniform samples in a ball"""

    directions = rng.standard_normal((count, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * SAFETY * rng.uniform(size=(count, 1)) ** (1.0 / dim)

    return directions * radii


def one_hot(labels, classes, scale=1.0):
    targets = np.zeros((len(labels), classes))
    targets[np.arange(len(labels)), labels] = scale

    return targets


def teacher_labels(teacher, act, inputs, noise=None, radius=1.0):
    """Targets of a teacher network, optionally with additive noise, clipped
    to the target ball"""

    outputs = forward_batch(teacher, act, inputs)

    if noise is not None:
        outputs = outputs + noise

    return clip_norm(outputs, radius)


def _teacher_net(spec, total, radius):
    params = spec.params
    act = catalog(params["activation"])

    teacher = random_params(
        int(params["n_d"]), int(params["n"]), int(params["m"]),
        int(params["depth"]), float(params["horizon"]),
        ParamBudget(float(params["teacher_b_theta"]), radius),
        seeding.make_rng(spec.seed, seeding.TEACHER))

    rng = seeding.make_rng(spec.seed, seeding.DATA)
    inputs = ball_samples(total, int(params["n_d"]), radius, rng)
    noise = float(params["noise"]) * rng.standard_normal(
        (total, int(params["n"])))
    targets = teacher_labels(teacher, act, inputs, noise, radius)

    return inputs, targets, {"teacher": teacher, "activation": act,
                             "noise": noise}


def _gaussian_mixture(spec, total, radius):
    params = spec.params
    classes, n_d = int(params["classes"]), int(params["n_d"])
    rng = seeding.make_rng(spec.seed, seeding.DATA)

    means = rng.standard_normal((classes, n_d))
    means *= float(params["separation"]) / np.linalg.norm(
        means, axis=1, keepdims=True)

    labels = rng.integers(0, classes, size=total)
    inputs = means[labels] + float(params["spread"]) * rng.standard_normal(
        (total, n_d))

    return (clip_norm(inputs, radius), one_hot(labels, classes, radius),
            {"means": means, "labels": labels})


def _two_moons(spec, total, radius):
    rng = seeding.make_rng(spec.seed, seeding.DATA)

    labels = rng.integers(0, 2, size=total)
    angles = rng.uniform(0, np.pi, size=total)

    inputs = np.where(
        labels[:, np.newaxis] == 0,
        np.column_stack([np.cos(angles), np.sin(angles)]),
        np.column_stack([1 - np.cos(angles), 0.5 - np.sin(angles)]))
    inputs += float(spec.params["noise"]) * rng.standard_normal((total, 2))

    # center on the origin, then fit the ball
    inputs = (inputs - np.array([0.5, 0.25])) * radius / 1.6

    return (clip_norm(inputs, radius), one_hot(labels, 2, radius),
            {"labels": labels})


def _mnist_subset(spec, radius):
    params = spec.params
    keys = ("train_images", "train_labels", "test_images", "test_labels")

    for key in keys:
        if not params[key] or not os.path.exists(params[key]):
            raise FileNotFoundError(
                "mnist_subset needs the IDX file {0} (got {1}); see "
                "pyResFlow.idx.fetch_idx".format(key, params[key]))

    classes = list(params["classes"])
    per_class_train = -(-spec.s_train // len(classes))
    per_class_test = -(-spec.s_test // len(classes))

    train = load_idx(params["train_images"], params["train_labels"],
                     classes, per_class_train, 2 * radius)
    test = load_idx(params["test_images"], params["test_labels"],
                    classes, per_class_test, 2 * radius)

    return (_balanced(train, classes, spec.s_train),
            _balanced(test, classes, spec.s_test))


def _balanced(data, classes, size):
    """Keep size samples, the first ones of each class in file order, with
    class counts differing by at most one"""

    labels = np.argmax(data.targets, axis=1)
    quota, extra = divmod(size, len(classes))

    keep = [np.flatnonzero(labels == index)[:quota + int(index < extra)]
            for index in range(len(classes))]
    order = np.sort(np.concatenate(keep)).astype(int)

    if len(order) < size:
        logger.warning(
            "Only %s of %s samples available for classes %s" % (
                len(order), size, classes))

    return Dataset(data.inputs[order], data.targets[order],
                   {"classes": classes})


def generate_dataset(spec):
    """Generate a train and a test set

    Synthetic samples are drawn in one stream and split, so the two sets
    are disjoint draws of the same distribution.

    Args:
        spec (DatasetSpec): what to generate

    Returns:
        tuple: (train, test) :py:class:`Dataset` instances
    """

    radius = spec.b_in / 2

    if spec.kind == "mnist_subset":
        return _mnist_subset(spec, radius)

    total = spec.s_train + spec.s_test
    builder = {
        "teacher_net": _teacher_net,
        "gaussian_mixture": _gaussian_mixture,
        "two_moons": _two_moons,
    }[spec.kind]

    inputs, targets, meta = builder(spec, total, radius)

    logger.debug("Generated %s %s samples" % (total, spec.kind))

    cut = spec.s_train
    train_meta = dict(meta, part="train")
    test_meta = dict(meta, part="test")

    return (Dataset(inputs[:cut], targets[:cut], train_meta),
            Dataset(inputs[cut:], targets[cut:], test_meta))
