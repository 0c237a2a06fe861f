#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Nov  3 09:41:17 2026
"""

import os
import json
import tempfile
import collections

from unittest import TestCase

import numpy as np

from pyResFlow.results import (
    to_jsonable, write_csv, write_json, write_results, write_training_log,
    file_digest, MANIFEST, SUMMARY)
from pyResFlow.training import TrainingLog, LogRow

Point = collections.namedtuple("Point", ["x", "y"])


class JSONTest(TestCase):
    def test_to_jsonable(self):
        data = {
            "nan": float("nan"), "inf": np.inf, "int": np.int64(3),
            "array": np.array([1.5, np.nan]), "point": Point(1, 2.0),
            "flag": np.bool_(True), 4: "key"}

        self.assertEqual(to_jsonable(data), {
            "nan": "nan", "inf": "inf", "int": 3, "array": [1.5, "nan"],
            "point": {"x": 1, "y": 2.0}, "flag": True, "4": "key"})


class WriteTest(TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.path = self.tmpdir.name

    def tearDown(self):
        self.tmpdir.cleanup()

    def read(self, name):
        with open(os.path.join(self.path, name), newline="") as handle:
            return handle.read()

    def test_csv(self):
        write_csv(os.path.join(self.path, "points.csv"),
                  [Point(1, 0.5), Point(2, float("nan"))])

        self.assertEqual(self.read("points.csv"), "x,y\n1,0.5\n2,nan\n")

    def test_header_only(self):
        write_csv(os.path.join(self.path, "empty.csv"), [], ["x", "y"])

        self.assertEqual(self.read("empty.csv"), "x,y\n")

    def test_json_sorted(self):
        write_json(os.path.join(self.path, "data.json"), {"b": 1, "a": 2})

        self.assertEqual(self.read("data.json"),
                         '{\n  "a": 2,\n  "b": 1\n}\n')

    def test_training_log(self):
        log = TrainingLog()
        log.append(LogRow(1, 0.5, float("nan"), 1.0, 0.0))

        write_training_log(log, os.path.join(self.path, "log.csv"))

        self.assertEqual(
            self.read("log.csv"),
            "epoch,train_loss,test_loss,param_inf_norm,wall_ms\n"
            "1,0.5,nan,1.0,0.0\n")


class WriteResultsTest(TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def output(self, name):
        return os.path.join(self.tmpdir.name, name)

    def test_empty(self):
        manifest = write_results([], {}, self.output("empty"),
                                 columns=["x", "y"])

        self.assertEqual([entry["file"] for entry in manifest],
                         ["records.csv", SUMMARY])

        with open(os.path.join(self.output("empty"), "records.csv")) as \
                handle:
            self.assertEqual(handle.read(), "x,y\n")

        with open(os.path.join(self.output("empty"), MANIFEST)) as handle:
            self.assertEqual(len(json.load(handle)["files"]), 2)

    def test_manifest(self):
        records = [Point(1, 0.5), Point(2, float("nan"))]
        manifest = write_results(
            records, {"mu": 3.0}, self.output("run"), name="points",
            tables={"extra": ([{"a": 1}], ["a"])},
            xy={"curve": ([1, 2], [0.1, 0.2])})

        self.assertEqual(
            [entry["file"] for entry in manifest],
            ["curve.dat", "extra.csv", "points.csv", SUMMARY])

        for entry in manifest:
            path = os.path.join(self.output("run"), entry["file"])
            self.assertEqual(entry["sha256"], file_digest(path))
            self.assertEqual(entry["bytes"], os.path.getsize(path))

        with open(os.path.join(self.output("run"), SUMMARY)) as handle:
            summary = json.load(handle)

        self.assertEqual(summary["fits"], {"mu": 3.0})
        self.assertEqual(summary["records"], 2)
        self.assertEqual(summary["nan_records"], [1])

    def test_identical(self):
        records = [Point(1, 0.25), Point(2, 1 / 3)]

        write_results(records, {"mu": 1 / 7}, self.output("first"))
        write_results(records, {"mu": 1 / 7}, self.output("second"))

        with open(os.path.join(self.output("first"), MANIFEST), "rb") as a, \
                open(os.path.join(self.output("second"), MANIFEST),
                     "rb") as b:
            self.assertEqual(a.read(), b.read())
