#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Nov  2 15:20:08 2026
"""

import os

from unittest import TestCase

from pyResFlow.config import (
    parse_config, read_config, render_config, RunConfig, COMMANDS, SCHEMAS)
from pyResFlow.exceptions import ConfigError

from .common import DATA_PATH

EXAMPLE33 = """[run]
command = example33

[example33]
S = 3
eta = 1
gamma = 2
alpha = 0.5
beta = 0.5
"""

GAP = """[run]
command = gap-vs-s
output_dir = out
seed = 3

[activation]
name = DeadZoneLeaky
params = 1, 0.05, 0.1, 0.1   ; a, b, alpha, beta

[train]
epochs = 5
projection = 2.5

[dataset]
kind = two_moons
s_train = 64
noise = 0.2

[gap-vs-s]
archs = 1.0:4, 2:8
S_grid = 16, 32, 64
seeds = 0, 1
"""


class ParseConfigTest(TestCase):
    def test_example33(self):
        cfg = parse_config(EXAMPLE33)

        self.assertEqual(cfg.command, "example33")
        self.assertEqual(cfg.output_dir, "results")
        self.assertEqual(cfg.seed, 0)
        self.assertEqual(cfg.get("example33", "S"), 3)
        self.assertEqual(cfg["example33"]["gamma"], 2.0)
        self.assertTrue(cfg.get("example33", "bruteforce"))

    def test_read(self):
        cfg = read_config(os.path.join(DATA_PATH, "example33.ini"))

        self.assertEqual(cfg, parse_config(EXAMPLE33))

    def test_types(self):
        cfg = parse_config(GAP)

        self.assertEqual(cfg.seed, 3)
        self.assertEqual(cfg.get("activation", "params"),
                         [1.0, 0.05, 0.1, 0.1])
        self.assertEqual(cfg.get("train", "projection"), 2.5)
        self.assertEqual(cfg.get("train", "epochs"), 5)
        self.assertEqual(cfg.get("train", "lr"), 0.01)
        self.assertEqual(cfg.get("dataset", "noise"), 0.2)
        self.assertEqual(cfg.get("gap-vs-s", "archs"), [(1.0, 4), (2.0, 8)])
        self.assertEqual(cfg.get("gap-vs-s", "S_grid"), [16, 32, 64])
        self.assertEqual(cfg.get("network", "m"), 4)

    def test_sections(self):
        cfg = parse_config(GAP)

        self.assertEqual(sorted(cfg.sections), sorted(COMMANDS["gap-vs-s"]))

        for command, sections in COMMANDS.items():
            for section in sections:
                self.assertIn(section, SCHEMAS, msg=command)

    def test_misspelled_key(self):
        text = EXAMPLE33.replace("gamma", "ghama")

        with self.assertRaisesRegex(ConfigError, "unknown key 'ghama'") \
                as context:
            parse_config(text)

        self.assertEqual(context.exception.key, "ghama")
        self.assertEqual(context.exception.line, 7)

    def test_bad_value(self):
        text = """[run]
command = bounds

[bounds]
delta = 1.5
"""
        with self.assertRaisesRegex(
                ConfigError, r"delta must be in \(0, 1\)") as context:
            parse_config(text)

        self.assertEqual(context.exception.key, "delta")
        self.assertEqual(context.exception.line, 5)

    def test_not_a_number(self):
        with self.assertRaises(ConfigError) as context:
            parse_config(EXAMPLE33.replace("S = 3", "S = three"))

        self.assertEqual(context.exception.key, "S")
        self.assertEqual(context.exception.line, 5)

    def test_syntax_error(self):
        text = EXAMPLE33.replace("eta = 1", "eta 1")

        with self.assertRaisesRegex(ConfigError, "syntax error at line 6") \
                as context:
            parse_config(text)

        self.assertEqual(context.exception.line, 6)

    def test_duplicate(self):
        with self.assertRaisesRegex(ConfigError, "line 10") as context:
            parse_config(EXAMPLE33 + "beta = 0.2\n")

        self.assertEqual(context.exception.key, "beta")

    def test_missing_run(self):
        self.assertRaisesRegex(
            ConfigError, r"missing \[run\] section", parse_config,
            "[example33]\nS = 3\n")

    def test_missing_header(self):
        self.assertRaisesRegex(
            ConfigError, "missing section header", parse_config,
            "S = 3\n")

    def test_missing_command(self):
        self.assertRaisesRegex(
            ConfigError, "missing key 'command'", parse_config,
            "[run]\nseed = 1\n")

    def test_unknown_command(self):
        self.assertRaisesRegex(
            ConfigError, "command: 'train' not in", parse_config,
            "[run]\ncommand = train\n")

    def test_section_not_accepted(self):
        with self.assertRaisesRegex(
                ConfigError, r"section \[train\] not accepted by example33") \
                as context:
            parse_config(EXAMPLE33 + "\n[train]\nlr = 0.1\n")

        self.assertEqual(context.exception.line, 11)

    def test_dataset_kind(self):
        self.assertRaisesRegex(
            ConfigError, "unknown key 'n_d' in section", parse_config,
            GAP.replace("noise = 0.2", "n_d = 3"))
        self.assertRaisesRegex(
            ConfigError, r"\[dataset\] kind must be one of", parse_config,
            GAP.replace("kind = two_moons", "kind = spirals"))

    def test_ascending(self):
        self.assertRaisesRegex(
            ConfigError, "S_grid needs at least 3 values", parse_config,
            GAP.replace("S_grid = 16, 32, 64", "S_grid = 16"))

    def test_archs(self):
        self.assertRaisesRegex(
            ConfigError, "archs", parse_config,
            GAP.replace("archs = 1.0:4, 2:8", "archs = 1.0:0"))

    def test_case_sensitive(self):
        self.assertRaisesRegex(
            ConfigError, "unknown key 's'", parse_config,
            EXAMPLE33.replace("S = 3", "s = 3"))


class RenderConfigTest(TestCase):
    def test_round_trip(self):
        for text in (EXAMPLE33, GAP):
            cfg = parse_config(text)

            self.assertEqual(parse_config(render_config(cfg)), cfg)

    def test_round_trip_all_commands(self):
        for command in COMMANDS:
            cfg = parse_config("[run]\ncommand = {0}\n".format(command))

            self.assertEqual(parse_config(render_config(cfg)), cfg,
                             msg=command)

    def test_replace(self):
        cfg = parse_config(EXAMPLE33).replace(seed=5)

        self.assertIsInstance(cfg, RunConfig)
        self.assertEqual(cfg.seed, 5)


class CheckFilesTest(TestCase):
    def test_no_files(self):
        cfg = parse_config(EXAMPLE33)

        self.assertEqual(cfg.referenced_files(), [])
        cfg.check_files()

    def test_params_file(self):
        cfg = parse_config(
            "[run]\ncommand = forward\n\n[network]\n"
            "params_file = /nonexistent/params.npz\n")

        self.assertRaisesRegex(
            ConfigError, "network.params_file: file", cfg.check_files)

    def test_mnist(self):
        images = os.path.join(DATA_PATH, "images-idx3-ubyte")
        labels = os.path.join(DATA_PATH, "labels-idx1-ubyte")
        text = GAP.replace(
            "kind = two_moons\ns_train = 64\nnoise = 0.2",
            "kind = mnist_subset\ntrain_images = {0}\ntrain_labels = {1}\n"
            "test_images = {0}\ntest_labels = {1}\nclasses = 0, 1".format(
                images, labels))
        cfg = parse_config(text)

        self.assertEqual(cfg.get("dataset", "classes"), [0, 1])
        self.assertEqual(len(cfg.referenced_files()), 4)
        cfg.check_files()

        cfg = parse_config(text.replace(
            "test_labels = " + labels, "test_labels = missing"))

        with self.assertRaises(ConfigError) as context:
            cfg.check_files()

        self.assertEqual(context.exception.key, "test_labels")
