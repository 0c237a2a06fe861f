#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Oct 28 09:02:11 2026
"""

import os

import numpy as np

from pyResFlow import seeding
from pyResFlow.resnet import ParamBudget, random_params

# get my path
dir_path = os.path.dirname(os.path.realpath(__file__))

# define data path
DATA_PATH = os.path.join(dir_path, "data")

# set to run acceptance scale experiments
SLOW_TESTS = bool(os.environ.get("RESFLOW_SLOW_TESTS"))


def small_net(seed, n_d=3, n=2, m=4, L=3, T=1.0, b_theta=1.0, b_in=1.0):
    """Random parameters within a budget, for quick checks"""

    return random_params(
        n_d, n, m, L, T, ParamBudget(b_theta, b_in),
        seeding.make_rng(seed, seeding.INIT))


def inputs_in_ball(seed, count, dim, radius):
    rng = seeding.make_rng(seed, seeding.INPUTS)
    directions = rng.standard_normal((count, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    return directions * radius * rng.uniform(size=(count, 1))
