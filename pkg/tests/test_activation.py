#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Oct 28 09:20:44 2026
"""

import pickle

from unittest import TestCase

import numpy as np

from hypothesis import given, settings
from hypothesis import strategies as st

from pyResFlow.activation import (
    catalog, apply_elementwise, apply_deriv, activation_from_record,
    LinearPiece, ExpPiece, TanhPiece, CATALOG, EXAMPLE_PARAMS)
from pyResFlow.exceptions import ParameterError

GRID = np.linspace(-10, 10, 1000)


def closed_forms():
    """Piecewise forms of the catalog, written independently"""

    return {
        "ReLU": (catalog("ReLU"), lambda x: np.maximum(x, 0)),
        "PReLU": (catalog("PReLU", [0.1]),
                  lambda x: np.where(x >= 0, x, 0.1 * x)),
        "TReLU": (catalog("TReLU", [0.5]),
                  lambda x: np.where(x >= 0.5, x - 0.5, 0)),
        "ELU": (catalog("ELU", [2.0]),
                lambda x: np.where(x >= 0, x, 2.0 * (np.exp(x) - 1))),
        "TEReLU": (catalog("TEReLU", [0.5, 0.25, 1.0]),
                   lambda x: np.where(
                       x >= 0.5, x - 0.5,
                       np.where(x <= -0.25, np.exp(x + 0.25) - 1, 0))),
        "SoftThresholdSym": (catalog("SoftThresholdSym", [1.0]),
                             lambda x: np.sign(x) * np.maximum(
                                 np.abs(x) - 1, 0)),
        "SoftThresholdAsym": (catalog("SoftThresholdAsym", [0.5, 0.25]),
                              lambda x: np.where(
                                  x >= 0.5, x - 0.5,
                                  np.where(x <= -0.25, x + 0.25, 0))),
        "Tanh": (catalog("Tanh"), np.tanh),
        "DeadZoneLeaky": (catalog("DeadZoneLeaky", [1.0, 0.05, 0.3, 0.2]),
                          lambda x: np.where(
                              x >= 0.3, x - 0.3,
                              np.where(x <= -0.2, 0.05 * (x + 0.2), 0))),
    }


class PieceTest(TestCase):
    def test_vanish_on_negatives(self):
        negatives = np.linspace(-10, 0, 101)

        for piece in [LinearPiece(2.0), ExpPiece(1.5), TanhPiece()]:
            self.assertTrue(np.all(piece.eval(negatives) == 0))

    def test_monotone_and_lipschitz(self):
        for piece in [LinearPiece(2.0), ExpPiece(1.5), TanhPiece()]:
            values = piece.eval(GRID)
            self.assertTrue(np.all(np.diff(values) >= 0))
            self.assertTrue(np.all(
                np.abs(np.diff(values)) <=
                piece.lip * np.diff(GRID) + 1e-12))

    def test_negative_slope(self):
        self.assertRaisesRegex(
            ParameterError, "slope must be non negative", LinearPiece, -1)


class CatalogTest(TestCase):
    def test_relu(self):
        relu = catalog("ReLU")
        self.assertEqual(relu([-1, 0, 2]).tolist(), [0, 0, 2])

    def test_soft_threshold(self):
        act = catalog("SoftThresholdSym", [1])
        self.assertEqual(act([2, 0.5, -2]).tolist(), [1, 0, -1])

    def test_leaky(self):
        act = catalog("DeadZoneLeaky", [1, 0.05, 0, 0])
        self.assertAlmostEqual(act(-10), -0.5)

    def test_closed_forms(self):
        for name, (act, form) in closed_forms().items():
            np.testing.assert_allclose(
                act(GRID), form(GRID), atol=1e-12, err_msg=name)

    def test_monotone(self):
        for name in CATALOG:
            act = catalog(name, EXAMPLE_PARAMS[name])
            self.assertTrue(np.all(np.diff(act(GRID)) >= 0), msg=name)

    def test_lipschitz(self):
        for name in CATALOG:
            act = catalog(name, EXAMPLE_PARAMS[name])
            values = act(GRID)
            bound = act.lip * np.abs(GRID[:, None] - GRID[None, :])

            self.assertTrue(
                np.all(np.abs(values[:, None] - values[None, :]) <=
                       bound + 1e-12), msg=name)

    def test_dead_zone(self):
        act = catalog("SoftThresholdAsym", [0.5, 0.25])
        zone = np.linspace(-0.25, 0.5, 31)

        self.assertTrue(np.all(act(zone) == 0))
        self.assertTrue(np.all(act.derivative(zone) == 0))

    def test_unknown_name(self):
        self.assertRaisesRegex(
            NameError, "activation: Swish not found", catalog, "Swish")

    def test_bad_params(self):
        self.assertRaisesRegex(
            ParameterError, "a1 must be in", catalog, "PReLU", [1.5])
        self.assertRaisesRegex(
            ParameterError, "lam must be positive", catalog, "TReLU", [0])
        self.assertRaisesRegex(
            ParameterError, "takes 1 parameters", catalog,
            "SoftThresholdSym", [])

    def test_elu_default(self):
        self.assertEqual(catalog("ELU").phi2.scale, 1.0)

    def test_relu_free_beta(self):
        act = catalog("ReLU", [0.7])

        self.assertEqual(act.beta, 0.7)
        self.assertEqual(act.structural_constant(), 0.0)
        np.testing.assert_array_equal(act(GRID), np.maximum(GRID, 0))

    def test_tanh_no_structure(self):
        self.assertEqual(catalog("Tanh").structural_constant(), 0.0)
        self.assertEqual(catalog("Tanh").lip, 1.0)

    def test_structural_constant(self):
        act = catalog("DeadZoneLeaky", [1.0, 0.05, 0.3, 0.2])
        self.assertAlmostEqual(act.structural_constant(), 0.3 + 0.05 * 0.2)


class ApplyTest(TestCase):
    def test_apply_elementwise(self):
        self.assertEqual(
            apply_elementwise(catalog("ReLU"), np.array([-1., 3.])).tolist(),
            [0, 3])
        self.assertEqual(
            apply_elementwise(
                catalog("SoftThresholdAsym", [0.5, 0.5]),
                np.array([0.2, -0.2])).tolist(),
            [0, 0])
        self.assertEqual(
            apply_elementwise(catalog("Tanh"), np.array([0.])).tolist(), [0])

    def test_apply_deriv(self):
        self.assertEqual(
            apply_deriv(catalog("ReLU"), np.array([-1., 2.])).tolist(),
            [0, 1])
        self.assertEqual(
            apply_deriv(catalog("DeadZoneLeaky", [1, 0.05, 0, 0]),
                        np.array([-3.])).tolist(),
            [0.05])
        self.assertEqual(
            apply_deriv(catalog("SoftThresholdSym", [1]),
                        np.array([0.])).tolist(),
            [0])

    def test_finite_differences(self):
        rng = np.random.default_rng(42)
        h = 1e-6

        for name in CATALOG:
            act = catalog(name, EXAMPLE_PARAMS[name])
            points = rng.uniform(-10, 10, size=1000)

            # stay away from kinks
            kinks = np.array([act.alpha, -act.beta])
            points = points[np.min(
                np.abs(points[:, None] - kinks[None, :]), axis=1) > 1e-3]

            numeric = (act(points + h) - act(points - h)) / (2 * h)
            np.testing.assert_allclose(
                act.derivative(points), numeric, atol=1e-4, err_msg=name)

    def test_grad_shift(self):
        act = catalog("DeadZoneLeaky", [1.0, 0.05, 0.3, 0.2])
        x = np.array([-2.0, 0.0, 2.0])
        h = 1e-6

        d_alpha, d_beta = act.grad_shift(x)
        numeric_alpha = (act.with_shift(0.3 + h, 0.2)(x) -
                         act.with_shift(0.3 - h, 0.2)(x)) / (2 * h)
        numeric_beta = (act.with_shift(0.3, 0.2 + h)(x) -
                        act.with_shift(0.3, 0.2 - h)(x)) / (2 * h)

        np.testing.assert_allclose(d_alpha, numeric_alpha, atol=1e-6)
        np.testing.assert_allclose(d_beta, numeric_beta, atol=1e-6)

    @settings(deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=20))
    def test_same_length(self, values):
        act = catalog("TEReLU", [0.5, 0.5])
        self.assertEqual(act(np.array(values)).shape, (len(values), ))


class RecordTest(TestCase):
    def test_round_trip(self):
        act = catalog("DeadZoneLeaky", [1.0, 0.05, 0.3, 0.2]).with_shift(
            0.4, 0.1)
        other = activation_from_record(act.to_record())

        self.assertEqual((other.alpha, other.beta), (0.4, 0.1))
        np.testing.assert_array_equal(other(GRID), act(GRID))

    def test_pickle(self):
        act = catalog("ELU", [1.5])
        other = pickle.loads(pickle.dumps(act))

        np.testing.assert_array_equal(other(GRID), act(GRID))
