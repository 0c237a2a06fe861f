#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 19 09:12:04 2026

Library-wide constants
"""

# exact Rademacher enumeration: at most 2**MAX_EXACT_SAMPLES sign vectors
MAX_EXACT_SAMPLES = 24
EXAMPLE33_MAX_SAMPLES = 20

# sign vectors evaluated per chunk
ENUMERATION_CHUNK = 2 ** 16

MC_MIN_DRAWS = 100
MC_BATCH = 2 ** 14

# z value of a 95% normal confidence interval
CI_Z = 1.96

# tolerances used by checks
CONTRACTION_TOL = 1e-12
IMPLIED_C_TOL = 1e-9

# reference solution for convergence studies
RK4_REFERENCE_STEPS = 2 ** 12
SUPREMUM_SUBGRID = 16

# quadrature points for path norms
PATH_QUADRATURE_POINTS = 2049

# gap is averaged over the last GAP_WINDOW epochs
GAP_WINDOW = 10

# generated data satisfy |d|_2 + |g|_2 <= B_IN_DATA
B_IN_DATA = 2.0

# default SGD hyperparameters
DEFAULT_LR = 0.01
DEFAULT_MOMENTUM = 0.9

# MNIST mirror
MNIST_URL = "https://storage.googleapis.com/cvdf-datasets/mnist/"
MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte.gz",
    "train_labels": "train-labels-idx1-ubyte.gz",
    "test_images": "t10k-images-idx3-ubyte.gz",
    "test_labels": "t10k-labels-idx1-ubyte.gz",
}

# environment variable capping worker processes
THREADS_ENV = "RESFLOW_THREADS"
