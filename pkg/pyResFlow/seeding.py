#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 19 09:31:47 2026

Counter based random streams. Every generator is a
:py:class:`numpy.random.Philox` seeded by a
:py:class:`numpy.random.SeedSequence` whose ``spawn_key`` is the stream
identifier followed by job indices, so the same ``(seed, stream, *indices)``
always yields the same numbers whatever the scheduling order.
"""

import numpy as np

# stream identifiers
DATA = 1
INIT = 2
SHUFFLE = 3
TEACHER = 4
SIGNS = 5
PATH = 6
INPUTS = 7


def make_rng(seed, stream, *indices):
    """Return a generator for a (seed, stream, indices) triple

    Args:
        seed (int): master seed (non negative)
        stream (int): one of the stream identifiers of this module
        indices (int): optional job indices

    Returns:
        numpy.random.Generator: an independent generator
    """

    key = (int(stream), ) + tuple(int(index) for index in indices)
    sequence = np.random.SeedSequence(int(seed), spawn_key=key)

    return np.random.Generator(np.random.Philox(sequence))
