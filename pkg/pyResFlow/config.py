#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 26 10:02:47 2026

Run configuration files. A configuration is an INI document read by
:py:mod:`configparser`::

    [run]
    command = example33
    output_dir = results
    seed = 0

    [example33]
    S = 3
    eta = 1
    gamma = 2
    alpha = 0.5
    beta = 0.5

Each command accepts a fixed set of sections (see :py:data:`COMMANDS`); every
section and key is checked against :py:data:`SCHEMAS`. Missing keys take
their documented default, unknown keys are errors.
"""

import os
import logging
import configparser
import collections

from .datasets import DEFAULTS as DATASET_DEFAULTS, KINDS as DATASET_KINDS
from .exceptions import ConfigError

logger = logging.getLogger(__name__)


# --- value types: (parse, render) pairs

def _parse_bool(text):
    value = text.strip().lower()

    if value in ("true", "yes", "on", "1"):
        return True

    if value in ("false", "no", "off", "0"):
        return False

    raise ValueError("not a boolean: {0}".format(text))


def _split(text):
    return [item.strip() for item in text.split(",") if item.strip()]


def _parse_arch(text):
    T, L = text.split(":")
    return (float(T), int(L))


def _parse_optional_float(text):
    if text.strip().lower() == "none":
        return None

    return float(text)


ValueType = collections.namedtuple("ValueType", ["parse", "render"])

INT = ValueType(int, str)
FLOAT = ValueType(float, repr)
STR = ValueType(str.strip, str)
BOOL = ValueType(_parse_bool, lambda value: "true" if value else "false")
OPTIONAL_FLOAT = ValueType(
    _parse_optional_float, lambda value: "none" if value is None else repr(
        value))
INT_LIST = ValueType(
    lambda text: [int(item) for item in _split(text)],
    lambda value: ", ".join(str(item) for item in value))
FLOAT_LIST = ValueType(
    lambda text: [float(item) for item in _split(text)],
    lambda value: ", ".join(repr(item) for item in value))
STR_LIST = ValueType(_split, ", ".join)
ARCH_LIST = ValueType(
    lambda text: [_parse_arch(item) for item in _split(text)],
    lambda value: ", ".join("{0!r}:{1}".format(T, L) for T, L in value))

Key = collections.namedtuple("Key", ["type", "default", "check"])


def key(value_type, default, check=None):
    return Key(value_type, default, check)


# --- checks: return an error message or None

def positive(value):
    if value <= 0:
        return "must be positive (got {0})".format(value)


def non_negative(value):
    if value < 0:
        return "must be non negative (got {0})".format(value)


def open_unit(value):
    if not 0 < value < 1:
        return "must be in (0, 1) (got {0})".format(value)


def one_of(*choices):
    def check(value):
        if value not in choices:
            return "must be one of {0} (got {1})".format(
                list(choices), value)

    return check


def all_positive(values):
    if not values or any(value <= 0 for value in values):
        return "must be a non empty list of positive values (got {0})".format(
            values)


def ascending(minimum):
    def check(values):
        message = all_positive(values)

        if message:
            return message

        if len(values) < minimum:
            return "needs at least {0} values (got {1})".format(
                minimum, len(values))

        if any(b <= a for a, b in zip(values, values[1:])):
            return "must be ascending (got {0})".format(values)

    return check


def positive_archs(values):
    if not values or any(T <= 0 or L < 1 for T, L in values):
        return "must be a non empty list of T:L with T > 0, L >= 1"


def optional_positive(value):
    if value is not None and value <= 0:
        return "must be positive or none (got {0})".format(value)


SCHEMAS = {
    "run": {
        "command": key(STR, None),
        "output_dir": key(STR, "results"),
        "seed": key(INT, 0, non_negative),
    },
    "activation": {
        "name": key(STR, "ReLU"),
        "params": key(FLOAT_LIST, []),
    },
    "budget": {
        "b_theta": key(FLOAT, 1.0, positive),
        "b_in": key(FLOAT, 2.0, positive),
        "convention": key(STR, "induced", one_of("induced", "entry")),
    },
    "network": {
        "n_d": key(INT, 2, positive),
        "n": key(INT, 2, positive),
        "m": key(INT, 4, positive),
        "L": key(INT, 4, positive),
        "T": key(FLOAT, 1.0, positive),
        "params_file": key(STR, ""),
    },
    "train": {
        "lr": key(FLOAT, 0.01, non_negative),
        "momentum": key(FLOAT, 0.9, non_negative),
        "epochs": key(INT, 20, positive),
        "batch_size": key(INT, 32, positive),
        "projection": key(OPTIONAL_FLOAT, None, optional_positive),
        "record_time": key(BOOL, False),
        "loss": key(STR, "auto", one_of(
            "auto", "squared", "ramp", "cross_entropy")),
        "margin": key(FLOAT, 1.0, positive),
    },
    "dataset": {
        "kind": key(STR, "teacher_net", one_of(*DATASET_KINDS)),
        "s_train": key(INT, 200, positive),
        "s_test": key(INT, 200, positive),
        "b_in": key(FLOAT, 2.0, positive),
    },
    "catalog": {
        "names": key(STR_LIST, []),
        "points": key(FLOAT_LIST, [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]),
    },
    "forward": {
        "inputs": key(INT, 8, positive),
        "keep_states": key(BOOL, False),
    },
    "flow": {
        "integrator": key(STR, "rk4", one_of("euler", "rk4")),
        "steps": key(INT, 256, positive),
        "inputs": key(INT, 4, positive),
        "modes": key(INT, 3, positive),
    },
    "rademacher": {
        "S": key(INT, 8, positive),
        "size": key(INT, 16, positive),
        "draws": key(INT, 0, non_negative),
        "trials": key(INT, 10, positive),
        "symmetric": key(BOOL, False),
    },
    "example33": {
        "S": key(INT, 3, positive),
        "eta": key(FLOAT, 1.0, positive),
        "gamma": key(FLOAT, 2.0, positive),
        "alpha": key(FLOAT, 0.5, non_negative),
        "beta": key(FLOAT, 0.5, non_negative),
        "bruteforce": key(BOOL, True),
    },
    "bounds": {
        "kind": key(STR, "discrete", one_of(
            "discrete", "continuous", "both")),
        "S": key(INT_LIST, [1000], all_positive),
        "delta": key(FLOAT, 0.05, open_unit),
        "c_slack": key(FLOAT_LIST, [0.0]),
        "clamp": key(BOOL, False),
        "convention": key(STR, "as-printed", one_of(
            "as-printed", "match-discrete")),
        "loss": key(STR, "squared", one_of(
            "squared", "ramp", "cross_entropy")),
        "margin": key(FLOAT, 1.0, positive),
        "b_out": key(OPTIONAL_FLOAT, None, optional_positive),
    },
    "gap-vs-s": {
        "archs": key(ARCH_LIST, [(1.0, 4)], positive_archs),
        "S_grid": key(INT_LIST, [250, 500, 1000, 2000, 4000], ascending(3)),
        "seeds": key(INT_LIST, [0, 1, 2, 3, 4]),
        "window": key(INT, 10, positive),
    },
    "depth": {
        "L_grid": key(INT_LIST, [3, 6, 12, 24], ascending(1)),
        "seeds": key(INT_LIST, [0, 1, 2, 3, 4]),
    },
    "activation-compare": {
        "mode": key(STR, "fixed", one_of("fixed", "learnable")),
        "alpha": key(FLOAT, 0.0, non_negative),
        "beta": key(FLOAT, 0.0, non_negative),
        "a": key(FLOAT, 1.0, positive),
        "b": key(FLOAT, 0.05, positive),
        "archs": key(ARCH_LIST, [(1.0, 4)], positive_archs),
        "seeds": key(INT_LIST, [0, 1, 2, 3, 4]),
        "window": key(INT, 10, positive),
    },
    "convergence": {
        "L_grid": key(INT_LIST, [4, 8, 16, 32, 64, 128], ascending(4)),
        "inputs": key(INT, 4, positive),
        "path": key(STR, "smooth", one_of("smooth", "constant", "zero")),
        "modes": key(INT, 3, positive),
        "reference_steps": key(INT, 4096, positive),
        "subgrid": key(INT, 16, positive),
    },
}

# sections each command accepts, the command section included
COMMANDS = {
    "catalog": ("activation", "catalog"),
    "forward": ("activation", "budget", "network", "forward"),
    "flow": ("activation", "budget", "network", "flow"),
    "rademacher": ("activation", "rademacher"),
    "example33": ("example33", ),
    "bounds": ("activation", "budget", "network", "bounds"),
    "gap-vs-s": ("activation", "network", "train", "dataset", "gap-vs-s"),
    "depth": ("activation", "budget", "network", "train", "dataset",
              "depth"),
    "activation-compare": ("network", "train", "dataset",
                           "activation-compare"),
    "convergence": ("activation", "budget", "network", "convergence"),
}


def _dataset_schema(kind):
    """Schema of the dataset section: common keys and the settings of the
    chosen kind, typed after their defaults"""

    schema = dict(SCHEMAS["dataset"])

    for name, default in DATASET_DEFAULTS[kind].items():
        if isinstance(default, bool):
            value_type = BOOL

        elif isinstance(default, int):
            value_type = INT

        elif isinstance(default, float):
            value_type = FLOAT

        elif isinstance(default, list):
            value_type = INT_LIST

        else:
            value_type = STR

        schema[name] = key(value_type, "" if default is None else default)

    return schema


class RunConfig():
    """A validated run configuration

    Attributes:
        command (str): one of :py:data:`COMMANDS`
        output_dir (str): where results are written
        seed (int): master seed
        sections (dict): section name -> {key: parsed value}, defaults
            included
    """

    def __init__(self, command, output_dir, seed, sections):
        self.command = command
        self.output_dir = output_dir
        self.seed = seed
        self.sections = sections

    def __repr__(self):
        return "<RunConfig {0} seed={1}>".format(self.command, self.seed)

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented

        return ((self.command, self.output_dir, self.seed, self.sections) ==
                (other.command, other.output_dir, other.seed,
                 other.sections))

    __hash__ = None

    def __getitem__(self, section):
        return self.sections[section]

    def get(self, section, name):
        return self.sections[section][name]

    def replace(self, **kwargs):
        values = dict(vars(self))
        values.update(kwargs)

        return RunConfig(**values)

    def referenced_files(self):
        """(section, key, path) of every file the run will read"""

        files = []
        network = self.sections.get("network", {})

        if network.get("params_file"):
            files.append(("network", "params_file", network["params_file"]))

        dataset = self.sections.get("dataset", {})

        if dataset.get("kind") == "mnist_subset":
            for name in ("train_images", "train_labels", "test_images",
                         "test_labels"):
                files.append(("dataset", name, dataset.get(name)))

        return files

    def check_files(self):
        """Raise :py:class:`ConfigError` if a referenced file is missing"""

        for section, name, path in self.referenced_files():
            if not path or not os.path.exists(path):
                raise ConfigError(
                    "{0}.{1}: file {2!r} not found".format(
                        section, name, path), key=name)


def _locate(text, section, name):
    """Line number (1-based) of key name in section, or None"""

    current = None

    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()

        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()

        elif current == section and stripped.split("=")[0].split(":")[0] \
                .strip() == name:
            return number

    return None


def _read(text):
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"))
    # keys are case sensitive
    parser.optionxform = str

    try:
        parser.read_string(text)

    # a missing header is also a ParsingError
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(
            "line {0}: missing section header".format(exc.lineno),
            line=exc.lineno)

    except configparser.ParsingError as exc:
        line, content = exc.errors[0]
        raise ConfigError(
            "syntax error at line {0}: {1}".format(line, content.strip()),
            line=line)

    except (configparser.DuplicateOptionError,
            configparser.DuplicateSectionError) as exc:
        raise ConfigError(
            "line {0}: {1}".format(exc.lineno, exc.message),
            key=getattr(exc, "option", None), line=exc.lineno)

    return parser


def _parse_section(text, section, values, schema):
    parsed = {}

    for name in values:
        if name not in schema:
            raise ConfigError(
                "unknown key {0!r} in section [{1}]".format(name, section),
                key=name, line=_locate(text, section, name))

    for name, spec in schema.items():
        if name not in values:
            if spec.default is None and spec.type is not OPTIONAL_FLOAT:
                raise ConfigError(
                    "missing key {0!r} in section [{1}]".format(
                        name, section), key=name)

            parsed[name] = spec.default
            continue

        try:
            value = spec.type.parse(values[name])

        except ValueError as exc:
            raise ConfigError(
                "[{0}] {1}: {2}".format(section, name, exc), key=name,
                line=_locate(text, section, name))

        message = spec.check(value) if spec.check else None

        if message:
            raise ConfigError(
                "[{0}] {1} {2}".format(section, name, message), key=name,
                line=_locate(text, section, name))

        parsed[name] = value

    return parsed


def parse_config(text):
    """Parse and validate a run configuration

    Args:
        text (str): the INI document

    Returns:
        RunConfig: the validated configuration

    Raises:
        ConfigError: on syntax errors (with the line number), unknown
            sections or keys, bad values (naming the key)
    """

    parser = _read(text)

    if not parser.has_section("run"):
        raise ConfigError("missing [run] section", key="run")

    run = _parse_section(text, "run", dict(parser["run"]), SCHEMAS["run"])

    if run["command"] not in COMMANDS:
        raise ConfigError(
            "command: {0!r} not in {1}".format(
                run["command"], sorted(COMMANDS)),
            key="command", line=_locate(text, "run", "command"))

    allowed = COMMANDS[run["command"]]

    for section in parser.sections():
        if section != "run" and section not in allowed:
            raise ConfigError(
                "section [{0}] not accepted by {1} (accepted: {2})".format(
                    section, run["command"], list(allowed)),
                key=section, line=_locate_section(text, section))

    sections = {}

    for section in allowed:
        values = dict(parser[section]) if parser.has_section(section) else {}

        if section == "dataset":
            kind = values.get("kind", SCHEMAS["dataset"]["kind"].default)

            if kind.strip() not in DATASET_KINDS:
                raise ConfigError(
                    "[dataset] kind must be one of {0} (got {1})".format(
                        list(DATASET_KINDS), kind),
                    key="kind", line=_locate(text, "dataset", "kind"))

            schema = _dataset_schema(kind.strip())

        else:
            schema = SCHEMAS[section]

        sections[section] = _parse_section(text, section, values, schema)

    logger.debug("Parsed a %s configuration" % (run["command"]))

    return RunConfig(run["command"], run["output_dir"], run["seed"],
                     sections)


def _locate_section(text, section):
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip() == "[{0}]".format(section):
            return number


def read_config(path):
    with open(path) as handle:
        return parse_config(handle.read())


def render_config(cfg):
    """Write a :py:class:`RunConfig` as text that parses back to it"""

    lines = ["[run]",
             "command = {0}".format(cfg.command),
             "output_dir = {0}".format(cfg.output_dir),
             "seed = {0}".format(cfg.seed)]

    for section, values in cfg.sections.items():
        if section == "dataset":
            schema = _dataset_schema(values["kind"])

        else:
            schema = SCHEMAS[section]

        lines.extend(["", "[{0}]".format(section)])

        for name, value in values.items():
            lines.append("{0} = {1}".format(
                name, schema[name].type.render(value)))

    return "\n".join(lines) + "\n"
