#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Oct 22 11:48:20 2026

Read (and download) MNIST files in the IDX format: a big endian header with
a magic number ``0x000008NN`` (unsigned bytes, NN dimensions), one 32 bit
size for each dimension, then the data.
"""

import os
import gzip
import struct
import logging
import collections

import numpy as np
import requests

from url_normalize import url_normalize

from . import __version__
from .settings import MNIST_URL, MNIST_FILES, B_IN_DATA
from .exceptions import IDXFormatError, DownloadError

logger = logging.getLogger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

# rows may be shrunk by one ulp-level factor to stay inside the ball
SAFETY = 1 - 1e-12

IDXData = collections.namedtuple("IDXData", ["inputs", "targets", "meta"])


def _open(path):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rb")

    return open(path, "rb")


def read_idx(path):
    """Read an IDX file of unsigned bytes

    Args:
        path (str): file path, gzip compressed if it ends with ``.gz``

    Returns:
        tuple: (magic, numpy.ndarray of uint8)
    """

    with _open(path) as handle:
        data = handle.read()

    if len(data) < 4:
        raise IDXFormatError("{0}: truncated header".format(path))

    magic = struct.unpack(">I", data[:4])[0]

    if magic >> 8 != 0x08 or not 1 <= magic & 0xff <= 4:
        raise IDXFormatError("{0}: bad magic {1:#010x}".format(path, magic))

    ndim = magic & 0xff
    offset = 4 + 4 * ndim

    if len(data) < offset:
        raise IDXFormatError("{0}: truncated header".format(path))

    dims = struct.unpack(">" + "I" * ndim, data[4:offset])
    count = int(np.prod(dims))

    if len(data) < offset + count:
        raise IDXFormatError(
            "{0}: truncated file, expected {1} bytes of data, got {2}".format(
                path, count, len(data) - offset))

    array = np.frombuffer(data, dtype=np.uint8, count=count, offset=offset)

    return magic, array.reshape(dims)


def load_idx(images_path, labels_path, classes, limit, b_in=B_IN_DATA):
    """Load a class balanced subset of an IDX image/label pair

    Pixels are scaled to [0, 1] and flattened; inputs whose norm exceeds
    ``b_in - 1`` are scaled back, so that with one hot targets
    ``|d|_2 + |g|_2 <= b_in``.

    Args:
        images_path (str): the images file
        labels_path (str): the labels file
        classes (list): labels to keep; targets are one hot in this order
        limit (int): at most this many samples for each class
        b_in (float): data bound

    Returns:
        IDXData: inputs (k, rows * cols), one hot targets (k, len(classes))
    """

    magic, images = read_idx(images_path)

    if magic != IMAGES_MAGIC:
        raise IDXFormatError(
            "{0}: bad magic {1:#010x} for images".format(images_path, magic))

    magic, labels = read_idx(labels_path)

    if magic != LABELS_MAGIC:
        raise IDXFormatError(
            "{0}: bad magic {1:#010x} for labels".format(labels_path, magic))

    if len(images) != len(labels):
        raise IDXFormatError(
            "{0} images but {1} labels".format(len(images), len(labels)))

    selected = []

    for cls in classes:
        indexes = np.flatnonzero(labels == cls)

        if len(indexes) == 0:
            raise IDXFormatError(
                "class {0} absent from {1}".format(cls, labels_path))

        selected.append(indexes[:max(int(limit), 0)])

    order = np.sort(np.concatenate(selected)).astype(int)

    inputs = images[order].reshape(len(order), -1) / 255.0
    norms = np.linalg.norm(inputs, axis=1, keepdims=True)
    radius = b_in - 1.0
    inputs = inputs * np.minimum(
        1.0, radius * SAFETY / np.maximum(norms, np.finfo(float).tiny))

    position = {cls: index for index, cls in enumerate(classes)}
    targets = np.zeros((len(order), len(classes)))
    targets[np.arange(len(order)),
            [position[label] for label in labels[order]]] = 1.0

    logger.debug("Loaded %s samples of classes %s" % (len(order), classes))

    return IDXData(inputs, targets, {"classes": list(classes)})


def check_status(response, url):
    """Raise :py:class:`DownloadError` unless response is a 200"""

    if int(response.status_code / 100) == 5:
        raise DownloadError(
            "Problems with mirror {0}: {1}".format(url, response.status_code))

    if int(response.status_code / 100) == 4:
        raise DownloadError(
            "Error with request {0}: {1}".format(url, response.status_code))

    if response.status_code != 200:
        raise DownloadError(
            "Got a status code different than expected: %s (%s)" % (
                response.status_code, url))


def fetch_idx(dest_dir, base_url=MNIST_URL, session=None):
    """Download the MNIST IDX files missing from ``dest_dir``

    Args:
        dest_dir (str): target directory
        base_url (str): mirror url
        session (requests.Session): an optional session

    Returns:
        dict: file role (``train_images``...) -> local path
    """

    session = session or requests.Session()
    headers = {'User-Agent': 'pyResFlow %s' % (__version__)}
    os.makedirs(dest_dir, exist_ok=True)
    paths = {}

    for key, name in sorted(MNIST_FILES.items()):
        path = os.path.join(dest_dir, name)
        paths[key] = path

        if os.path.exists(path):
            logger.debug("%s already present" % (path))
            continue

        url = url_normalize("/".join([base_url.rstrip("/"), name]))
        logger.info("Downloading %s" % (url))

        response = session.get(url, headers=headers)
        check_status(response, url)

        with open(path, "wb") as handle:
            handle.write(response.content)

    return paths
