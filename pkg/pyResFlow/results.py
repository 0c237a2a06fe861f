#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 26 15:40:12 2026

Result files. CSV files are written by :py:mod:`pandas` with ``.`` as
decimal separator, ``\\n`` line endings and ``nan`` for missing values; JSON
files have sorted keys. A ``manifest.json`` lists every written file with
its sha256, so identical inputs give identical manifests.
"""

import os
import json
import math
import hashlib
import logging

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
SUMMARY = "summary.json"


def _row(record):
    if hasattr(record, "_asdict"):
        return record._asdict()

    return dict(record)


def to_jsonable(value):
    """Convert numpy values, namedtuples and non finite floats to JSON
    friendly objects. NaN and infinities become strings"""

    if hasattr(value, "_asdict"):
        value = value._asdict()

    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}

    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(item) for item in value]

    if isinstance(value, (np.integer, )):
        return int(value)

    if isinstance(value, (float, np.floating)):
        value = float(value)

        if math.isnan(value):
            return "nan"

        if math.isinf(value):
            return "inf" if value > 0 else "-inf"

        return value

    if isinstance(value, np.bool_):
        return bool(value)

    return value


def write_json(path, data):
    text = json.dumps(to_jsonable(data), indent=2, sort_keys=True)

    try:
        with open(path, "w", newline="\n") as handle:
            handle.write(text + "\n")

    except OSError as exc:
        raise OSError("cannot write {0}: {1}".format(path, exc))

    return path


def write_csv(path, records, columns=None):
    """Write records (dicts or namedtuples) as CSV. An empty list gives a
    header only file"""

    rows = [_row(record) for record in records]

    if columns is None:
        columns = list(rows[0]) if rows else []

    table = pd.DataFrame(rows, columns=columns)

    try:
        table.to_csv(path, index=False, lineterminator="\n", na_rep="nan")

    except OSError as exc:
        raise OSError("cannot write {0}: {1}".format(path, exc))

    logger.debug("Wrote %s rows to %s" % (len(rows), path))

    return path


def write_training_log(log, path):
    """Write a :py:class:`TrainingLog`, one row per epoch"""

    return write_csv(path, log.rows, columns=list(log.columns))


def write_xy(path, x, y, names=("x", "y")):
    """Write a plot ready two column file"""

    table = pd.DataFrame({names[0]: np.asarray(x), names[1]: np.asarray(y)})
    table.to_csv(path, index=False, lineterminator="\n", na_rep="nan")

    return path


def file_digest(path):
    sha = hashlib.sha256()

    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            sha.update(block)

    return sha.hexdigest()


def _nan_rows(records):
    flagged = []

    for index, record in enumerate(records):
        row = _row(record)

        if any(isinstance(value, (float, np.floating)) and np.isnan(value)
               for value in row.values()):
            flagged.append(index)

    return flagged


def write_results(records, fits, output_dir, name="records", columns=None,
                  summary=None, tables=None, xy=None):
    """Write the results of a run and their manifest

    Args:
        records (list): main records, written to ``<name>.csv``
        fits (dict): fitted values, stored in the summary under ``fits``
        output_dir (str): target directory, created if missing
        name (str): name of the main CSV file
        columns (list): CSV header, required for a header only file
        summary (dict): more summary entries
        tables (dict): other CSV files, name -> (records, columns)
        xy (dict): plot ready files, name -> (x, y)

    Returns:
        list: manifest entries ``{"file", "sha256", "bytes"}``, sorted by
        file name
    """

    try:
        os.makedirs(output_dir, exist_ok=True)

    except OSError as exc:
        raise OSError("cannot create {0}: {1}".format(output_dir, exc))

    written = [write_csv(
        os.path.join(output_dir, name + ".csv"), records, columns)]

    for table_name, (table_records, table_columns) in sorted(
            (tables or {}).items()):
        written.append(write_csv(
            os.path.join(output_dir, table_name + ".csv"), table_records,
            table_columns))

    for xy_name, (x, y) in sorted((xy or {}).items()):
        written.append(write_xy(
            os.path.join(output_dir, xy_name + ".dat"), x, y))

    content = dict(summary or {})
    content["fits"] = fits or {}
    content["records"] = len(records)
    content["nan_records"] = _nan_rows(records)

    written.append(write_json(os.path.join(output_dir, SUMMARY), content))

    manifest = sorted(
        [{"file": os.path.basename(path), "sha256": file_digest(path),
          "bytes": os.path.getsize(path)} for path in written],
        key=lambda entry: entry["file"])

    write_json(os.path.join(output_dir, MANIFEST), {"files": manifest})

    logger.info("Wrote %s files to %s" % (len(manifest), output_dir))

    return manifest
