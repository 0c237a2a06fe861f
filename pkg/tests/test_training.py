#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Oct 29 10:12:03 2026
"""

from unittest import TestCase, skipUnless
from unittest.mock import patch

import numpy as np

from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pyResFlow import seeding
from pyResFlow.activation import catalog
from pyResFlow.datasets import Dataset, DatasetSpec, generate_dataset
from pyResFlow.resnet import (
    ParamBudget, PreprocessParams, LayerParams, DiscreteParams,
    random_params, init_params, forward_batch)
from pyResFlow.training import (
    LossSpec, TrainConfig, TrainingLog, LogRow, loss_eval, loss_envelope,
    backprop, backprop_batch, sgd_train, accuracy, mean_loss)
from pyResFlow.exceptions import (
    DimensionError, ParameterError, NonFiniteError, DivergenceError)

from .common import SLOW_TESTS, small_net, inputs_in_ball


def numeric_gradient(params, act, spec, D, G, h=1e-5):
    """Central differences of the mean loss, block by block"""

    gradients = []

    for block in params.blocks():
        gradient = np.zeros_like(block)

        for index in np.ndindex(block.shape):
            saved = block[index]
            block[index] = saved + h
            plus = np.mean(spec.value(forward_batch(params, act, D), G))
            block[index] = saved - h
            minus = np.mean(spec.value(forward_batch(params, act, D), G))
            block[index] = saved
            gradient[index] = (plus - minus) / (2 * h)

        gradients.append(gradient)

    return gradients


def relative_error(first, second, floor=1e-3):
    return np.max(np.abs(first - second) / np.maximum(
        np.maximum(np.abs(first), np.abs(second)), floor))


class LossTest(TestCase):
    def test_squared(self):
        spec = LossSpec("squared")

        self.assertEqual(loss_eval(spec, [1.0, 2.0], [1.0, 2.0]), 0.0)
        self.assertEqual(loss_eval(spec, [1.0, 0.0], [0.0, 0.0]), 1.0)

    def test_dimension(self):
        self.assertRaisesRegex(
            DimensionError, "target has shape", loss_eval, LossSpec(),
            [1.0, 2.0], [1.0])

    def test_unknown(self):
        self.assertRaisesRegex(NameError, "loss: hinge not found",
                               LossSpec, "hinge")

    def test_ramp_binary(self):
        spec = LossSpec("ramp", margin=2.0)

        self.assertEqual(loss_eval(spec, [3.0], [1.0]), 0.0)
        self.assertEqual(loss_eval(spec, [1.0], [1.0]), 0.5)
        self.assertEqual(loss_eval(spec, [1.0], [-1.0]), 1.0)

    def test_ramp_multiclass(self):
        spec = LossSpec("ramp")

        self.assertAlmostEqual(
            loss_eval(spec, [0.5, 0.0, 0.2], [1, 0, 0]), 0.7)
        self.assertEqual(loss_eval(spec, [0.0, 2.0, 0.0], [1, 0, 0]), 1.0)

    def test_cross_entropy(self):
        spec = LossSpec("cross_entropy")

        self.assertAlmostEqual(
            loss_eval(spec, [0.0, 0.0], [1.0, 0.0]), np.log(2))

    @settings(deadline=None)
    @given(arrays(float, 3, elements=st.floats(-5, 5)),
           arrays(float, 3, elements=st.floats(-5, 5)),
           st.integers(0, 2),
           st.sampled_from(["squared", "ramp", "cross_entropy"]))
    def test_kappa(self, x, x_tilde, label, kind):
        spec = LossSpec(kind, margin=0.5)
        g = np.eye(3)[label]

        difference = abs(spec.value(x, g) - spec.value(x_tilde, g))
        kappa = spec.kappa(x, x_tilde, g)

        self.assertLessEqual(
            difference, kappa * np.linalg.norm(x - x_tilde) + 1e-9)
        self.assertGreaterEqual(spec.value(x, g), 0)

    @settings(deadline=None)
    @given(arrays(float, 1, elements=st.floats(-5, 5)),
           arrays(float, 1, elements=st.floats(-5, 5)),
           st.sampled_from([-1.0, 1.0]))
    def test_kappa_binary_ramp(self, x, x_tilde, label):
        spec = LossSpec("ramp", margin=0.5)
        g = np.array([label])

        difference = abs(spec.value(x, g) - spec.value(x_tilde, g))
        self.assertLessEqual(
            difference,
            spec.kappa(x, x_tilde, g) * np.linalg.norm(x - x_tilde) + 1e-9)

    def test_envelope(self):
        rng = np.random.default_rng(7)
        n, b_out, b_in = 3, 2.0, 1.5

        for kind in ["squared", "ramp", "cross_entropy"]:
            spec = LossSpec(kind)
            b_ell, b_kappa = loss_envelope(spec, n, b_out, b_in)

            x = rng.uniform(-b_out, b_out, size=(10000, n))
            x_tilde = rng.uniform(-b_out, b_out, size=(10000, n))
            g = np.eye(n)[rng.integers(0, n, size=10000)]

            if kind == "squared":
                g = g * b_in

            self.assertTrue(np.all(spec.value(x, g) <= b_ell + 1e-12),
                            msg=kind)
            self.assertTrue(np.all(spec.kappa(x, x_tilde, g) <=
                                   b_kappa + 1e-12), msg=kind)


class BackpropTest(TestCase):
    def test_hand_computed(self):
        pre = PreprocessParams([[1.0]], [0.0])
        params = DiscreteParams(
            pre, [LayerParams([[1.0]], [[1.0]], [0.0], [0.0])], 1.0)

        grads = backprop(params, catalog("ReLU"), LossSpec(), [1.0], [0.0])
        layer = grads.d_layers[0]

        self.assertEqual(grads.loss_value, 4.0)
        self.assertEqual(layer.c.tolist(), [4.0])
        self.assertEqual(layer.W.tolist(), [[4.0]])
        self.assertEqual(layer.V.tolist(), [[4.0]])
        self.assertEqual(layer.b.tolist(), [4.0])
        self.assertEqual(grads.d_pre.U.tolist(), [[8.0]])
        self.assertEqual(grads.d_pre.a.tolist(), [8.0])

    def test_zero_residual(self):
        act = catalog("Tanh")
        params = small_net(3)

        for layer in params.layers:
            layer.W[:] = 0
            layer.c[:] = 0

        d = np.array([0.2, -0.1, 0.4])
        g = forward_batch(params, act, d)[0]
        grads = backprop(params, act, LossSpec(), d, g)

        self.assertEqual(grads.loss_value, 0.0)

        for layer in grads.d_layers:
            self.assertTrue(np.all(layer.W == 0))

    def test_loss_value(self):
        act = catalog("ELU")
        params = small_net(4)
        D = inputs_in_ball(4, 5, 3, 1.0)
        G = inputs_in_ball(5, 5, 2, 1.0)

        grads = backprop_batch(params, act, LossSpec(), D, G)

        self.assertAlmostEqual(
            grads.loss_value,
            mean_loss(params, act, LossSpec(), Dataset(D, G)), places=12)

    def test_shapes(self):
        params = small_net(5)
        grads = backprop(params, catalog("ReLU"), LossSpec(),
                         [0.1, 0.2, 0.3], [0.0, 1.0])

        for block, grad in zip(params.blocks(), grads.blocks()):
            self.assertEqual(block.shape, grad.shape)

    def test_target_dimension(self):
        self.assertRaises(
            DimensionError, backprop, small_net(0), catalog("ReLU"),
            LossSpec(), [0.1, 0.2, 0.3], [1.0])

    def test_non_finite_input_layer(self):
        act = catalog("ReLU")
        params = small_net(6)
        derivative = act.derivative
        calls = []

        # the input layer derivative is evaluated after the L blocks
        def overflowing(x):
            calls.append(x)

            if len(calls) > params.L:
                return np.full(np.shape(x), np.inf)

            return derivative(x)

        with patch.object(act, "derivative", side_effect=overflowing), \
                np.errstate(all="ignore"):
            self.assertRaisesRegex(
                NonFiniteError, "at the input layer", backprop_batch,
                params, act, LossSpec(), inputs_in_ball(6, 4, 3, 1.0),
                inputs_in_ball(7, 4, 2, 1.0))

        self.assertEqual(len(calls), params.L + 1)

    def test_finite_differences(self):
        rng = np.random.default_rng(11)

        for trial in range(100):
            n_d, n = rng.integers(1, 5, size=2)
            m, L = rng.integers(1, 7), rng.integers(1, 5)
            act = catalog(["Tanh", "ELU"][trial % 2])
            spec = LossSpec(["squared", "cross_entropy"][trial % 3 % 2])

            params = random_params(
                n_d, n, m, L, 1.0, ParamBudget(1.0, 1.0),
                seeding.make_rng(trial, seeding.INIT))
            D = inputs_in_ball(trial, 3, n_d, 1.0)
            G = np.eye(n)[rng.integers(0, n, size=3)]

            grads = backprop_batch(params, act, spec, D, G)
            numeric = numeric_gradient(params, act, spec, D, G)

            for exact, approx in zip(grads.blocks(), numeric):
                self.assertLessEqual(
                    relative_error(exact, approx), 1e-5,
                    msg="trial {0}".format(trial))

    def test_finite_differences_kinks(self):
        act = catalog("DeadZoneLeaky", [1.0, 0.05, 0.2, 0.1])
        spec = LossSpec()
        checked = 0

        for trial in range(20):
            params = small_net(trial, n=3, m=5, L=3)
            D = inputs_in_ball(trial, 2, 3, 1.0)
            G = inputs_in_ball(trial + 100, 2, 3, 1.0)

            # skip nets with a pre activation near a kink
            pre_acts = [D @ params.pre.U.T + params.pre.a]
            states = forward_batch(params, act, D, keep=True)

            for layer, x in zip(params.layers, states[:-1]):
                pre_acts.append(x @ layer.V.T + layer.b)

            distances = [np.min(np.abs(np.concatenate(
                [u.ravel() - kink for u in pre_acts])))
                for kink in (act.alpha, -act.beta)]

            if min(distances) < 1e-4:
                continue

            grads = backprop_batch(params, act, spec, D, G)

            for exact, approx in zip(
                    grads.blocks(), numeric_gradient(params, act, spec, D, G)):
                self.assertLessEqual(relative_error(exact, approx), 1e-5)

            h = 1e-6
            shifted = [
                np.mean(spec.value(forward_batch(
                    params, act.with_shift(act.alpha + sign * h, act.beta),
                    D), G))
                for sign in (1, -1)]
            self.assertAlmostEqual(
                grads.d_alpha, (shifted[0] - shifted[1]) / (2 * h), places=6)

            shifted = [
                np.mean(spec.value(forward_batch(
                    params, act.with_shift(act.alpha, act.beta + sign * h),
                    D), G))
                for sign in (1, -1)]
            self.assertAlmostEqual(
                grads.d_beta, (shifted[0] - shifted[1]) / (2 * h), places=6)

            checked += 1

        self.assertGreater(checked, 0)


class TrainConfigTest(TestCase):
    def test_ranges(self):
        self.assertRaisesRegex(
            ParameterError, "momentum must be in", TrainConfig, momentum=1.0)
        self.assertRaisesRegex(
            ParameterError, "epochs and batch_size", TrainConfig, epochs=0)
        self.assertRaises(ParameterError, TrainConfig, projection=0.0)

    def test_replace(self):
        cfg = TrainConfig(lr=0.1).replace(epochs=3)

        self.assertEqual((cfg.lr, cfg.epochs), (0.1, 3))


class TrainingLogTest(TestCase):
    def test_window(self):
        log = TrainingLog()

        for epoch in range(1, 6):
            log.append(LogRow(epoch, 1.0 / epoch, 2.0 / epoch, 1.0, 0.0))

        train, test = log.window(2)

        self.assertAlmostEqual(train, (1 / 4 + 1 / 5) / 2)
        self.assertAlmostEqual(test, (2 / 4 + 2 / 5) / 2)
        np.testing.assert_allclose(log.gaps(), 1.0 / np.arange(1, 6))


class SGDTest(TestCase):
    @classmethod
    def setup_class(cls):
        cls.train, cls.test = generate_dataset(
            DatasetSpec("teacher_net", 64, 32, seed=3,
                        params={"n_d": 3, "n": 2, "depth": 2}))
        cls.act = catalog("ReLU")

    def initial(self, seed=0):
        return init_params(3, 2, 4, 3, 1.0,
                           seeding.make_rng(seed, seeding.INIT))

    def test_zero_lr(self):
        params = self.initial()
        trained, log = sgd_train(
            params, self.act, LossSpec(), self.train,
            TrainConfig(lr=0.0, epochs=3, batch_size=8))

        self.assertEqual(trained, params)
        self.assertEqual(len(log), 3)
        self.assertTrue(np.all(np.isnan(log.test_losses())))

    def test_does_not_modify_input(self):
        params = self.initial()
        reference = params.copy()

        sgd_train(params, self.act, LossSpec(), self.train,
                  TrainConfig(lr=0.1, epochs=1))

        self.assertEqual(params, reference)

    def test_deterministic(self):
        cfg = TrainConfig(lr=0.05, epochs=4, batch_size=8, seed=9)

        first = sgd_train(self.initial(), self.act, LossSpec(), self.train,
                          cfg, self.test)
        second = sgd_train(self.initial(), self.act, LossSpec(), self.train,
                           cfg, self.test)

        self.assertEqual(first[0], second[0])
        self.assertEqual(first[1].rows, second[1].rows)

    def test_loss_decreases(self):
        _, log = sgd_train(
            self.initial(), self.act, LossSpec(), self.train,
            TrainConfig(lr=0.05, epochs=30, batch_size=8), self.test)

        self.assertLess(log.rows[-1].train_loss, log.rows[0].train_loss)

    def test_projection(self):
        trained, log = sgd_train(
            self.initial(), self.act, LossSpec(), self.train,
            TrainConfig(lr=0.5, epochs=3, batch_size=8, projection=0.25))

        self.assertLessEqual(trained.inf_norm(), 0.25 + 1e-12)
        self.assertTrue(all(row.param_inf_norm <= 0.25 + 1e-12
                            for row in log.rows))

    def test_divergence(self):
        with np.errstate(all="ignore"):
            with self.assertRaises(DivergenceError) as context:
                sgd_train(
                    self.initial(), catalog("PReLU", [1.0]), LossSpec(),
                    Dataset(self.train.inputs * 1e3, self.train.targets),
                    TrainConfig(lr=1e6, epochs=5, batch_size=8))

        self.assertIsNotNone(context.exception.step)

    def test_learn_shift(self):
        act = catalog("DeadZoneLeaky", [1.0, 0.05, 0.1, 0.1])
        _, log = sgd_train(
            self.initial(), act, LossSpec(), self.train,
            TrainConfig(lr=0.05, epochs=5, batch_size=8, learn_shift=True))

        self.assertGreaterEqual(log.activation.alpha, 0.0)
        self.assertGreaterEqual(log.activation.beta, 0.0)
        self.assertNotEqual(
            (log.activation.alpha, log.activation.beta), (0.1, 0.1))

    def test_wall_time(self):
        _, log = sgd_train(
            self.initial(), self.act, LossSpec(), self.train,
            TrainConfig(epochs=2))

        self.assertEqual([row.wall_ms for row in log.rows], [0.0, 0.0])

    def test_empty(self):
        self.assertRaisesRegex(
            ParameterError, "training set is empty", sgd_train,
            self.initial(), self.act, LossSpec(),
            Dataset(np.zeros((0, 3)), np.zeros((0, 2))), TrainConfig())

    def test_accuracy(self):
        params = DiscreteParams(
            PreprocessParams(np.eye(2), np.zeros(2)),
            [LayerParams(np.zeros((1, 2)), np.zeros((2, 1)), np.zeros(1),
                         np.zeros(2))], 1.0)
        data = Dataset(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 2.0]]),
                       np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]))

        self.assertAlmostEqual(accuracy(params, self.act, data), 2 / 3)

    @skipUnless(SLOW_TESTS, "set RESFLOW_SLOW_TESTS to run")
    def test_teacher_student_fit(self):
        train, _ = generate_dataset(
            DatasetSpec("teacher_net", 512, 16, seed=1,
                        params={"n_d": 1, "n": 1, "noise": 0.0}))
        params = init_params(1, 1, 8, 4, 1.0,
                             seeding.make_rng(1, seeding.INIT))

        _, log = sgd_train(
            params, self.act, LossSpec(), train,
            TrainConfig(lr=0.01, epochs=200, batch_size=32))

        self.assertLessEqual(log.rows[-1].train_loss, 1e-3)
