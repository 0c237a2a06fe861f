#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct 27 09:14:55 2026

Command line interface::

    resflow <command> --config <path> [--output <dir>] [--seed <int>]
            [--workers <int>] [--verbose]

Exit status is 0 on success, 1 on validation errors (configuration,
parameters, missing files) and 2 on runtime failures.
"""

import sys
import math
import logging
import argparse

from fractions import Fraction

import numpy as np

from . import seeding, __version__
from .activation import catalog, CATALOG, EXAMPLE_PARAMS
from .bounds import (
    BoundInputs, bound_rows, c_slack_limit, layered_recursion,
    recursion_envelope)
from .config import COMMANDS, read_config
from .datasets import DatasetSpec, ball_samples
from .experiments import (
    gap_vs_samples, depth_refinement, activation_comparison,
    convergence_rate_study, default_loss, gap_summary, resolve_workers,
    GapRecord, Exclusion, DepthRecord, CurveRecord)
from .rademacher import (
    EvaluatedClass, rademacher_exact, rademacher_mc, contraction_check,
    SoftThresholdClassSpec, example33_closed_form, example33_bruteforce)
from .resnet import (
    ParamBudget, LayerParams, random_params, random_smooth_params,
    constant_path_params, forward_batch, continuous_flow, layer_bounds,
    load_params, state_bound)
from .results import write_results
from .training import LossSpec, TrainConfig, LogRow, loss_envelope
from .exceptions import (
    ConfigError, ParameterError, DimensionError, IDXFormatError)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# errors reported with exit status 1
VALIDATION_ERRORS = (
    ConfigError, ParameterError, DimensionError, NameError,
    FileNotFoundError, IDXFormatError)


def get_activation(cfg):
    section = cfg["activation"]
    return catalog(section["name"], section["params"])


def get_budget(cfg):
    section = cfg["budget"]
    return ParamBudget(section["b_theta"], section["b_in"])


def get_network(cfg, budget):
    """Parameters from the configured file, or random ones within budget"""

    section = cfg["network"]

    if section["params_file"]:
        return load_params(section["params_file"])

    return random_params(
        section["n_d"], section["n"], section["m"], section["L"],
        section["T"], budget, seeding.make_rng(cfg.seed, seeding.INIT),
        cfg["budget"]["convention"])


def get_dataset_spec(cfg):
    section = dict(cfg["dataset"])
    kind = section.pop("kind")
    s_train = section.pop("s_train")
    s_test = section.pop("s_test")
    b_in = section.pop("b_in")

    # empty file names mean "not given"
    params = {key: (None if value == "" else value)
              for key, value in section.items()}

    return DatasetSpec(kind, s_train, s_test, cfg.seed, params, b_in)


def get_train_config(cfg):
    section = cfg["train"]

    return TrainConfig(
        lr=section["lr"], momentum=section["momentum"],
        epochs=section["epochs"], batch_size=section["batch_size"],
        seed=cfg.seed, projection=section["projection"],
        record_time=section["record_time"])


def get_loss(cfg, base):
    section = cfg["train"]

    if section["loss"] == "auto":
        return default_loss(base)

    return LossSpec(section["loss"], section["margin"])


def run_catalog(cfg, workers):
    points = np.array(cfg["catalog"]["points"])
    names = cfg["catalog"]["names"] or sorted(CATALOG)
    records, summary = [], {}

    for item in names:
        name, *params = item.split(":")
        params = [float(value) for value in params] if params else \
            EXAMPLE_PARAMS.get(name, [])
        act = catalog(name, params)

        summary[item] = dict(
            act.to_record(), lip=act.lip,
            structural_constant=act.structural_constant())

        for x, value, slope in zip(points, act(points),
                                   act.derivative(points)):
            records.append({"activation": item, "x": x, "psi": value,
                            "dpsi": slope})

    return write_results(
        records, {}, cfg.output_dir, name="catalog",
        columns=["activation", "x", "psi", "dpsi"],
        summary={"activations": summary})


def run_forward(cfg, workers):
    act, budget = get_activation(cfg), get_budget(cfg)
    params = get_network(cfg, budget)

    inputs = ball_samples(
        cfg["forward"]["inputs"], params.n_d, budget.b_in,
        seeding.make_rng(cfg.seed, seeding.INPUTS))
    states = forward_batch(params, act, inputs, keep=True)
    bounds = layer_bounds(budget, act, params.horizon, params.L)

    columns = ["input", "layer", "inf_norm", "bound"] + [
        "x{0}".format(index) for index in range(params.n)]
    records = []

    for layer in range(params.L + 1):
        if not cfg["forward"]["keep_states"] and layer != params.L:
            continue

        for index, state in enumerate(states[layer]):
            row = {"input": index, "layer": layer,
                   "inf_norm": float(np.max(np.abs(state))),
                   "bound": bounds[layer]}
            row.update({"x{0}".format(coord): value
                        for coord, value in enumerate(state)})
            records.append(row)

    within = bool(all(row["inf_norm"] <= row["bound"] + 1e-9
                      for row in records))
    summary = {"params_inf_norm": params.inf_norm(),
               "within_state_bound": within, "L": params.L,
               "T": params.horizon}

    return write_results(records, {}, cfg.output_dir, name="forward",
                         columns=columns, summary=summary)


def run_flow(cfg, workers):
    act, budget = get_activation(cfg), get_budget(cfg)
    network, section = cfg["network"], cfg["flow"]

    path = random_smooth_params(
        network["n_d"], network["n"], network["m"], network["T"], budget,
        seeding.make_rng(cfg.seed, seeding.PATH), section["modes"],
        cfg["budget"]["convention"])
    inputs = ball_samples(
        section["inputs"], network["n_d"], budget.b_in,
        seeding.make_rng(cfg.seed, seeding.INPUTS))

    columns = ["input", "step", "t"] + [
        "x{0}".format(index) for index in range(network["n"])]
    records, xy = [], {}

    for index, d in enumerate(inputs):
        trajectory = continuous_flow(
            path, act, d, section["integrator"], section["steps"])

        for step, (t, state) in enumerate(
                zip(trajectory.times, trajectory.states)):
            row = {"input": index, "step": step, "t": t}
            row.update({"x{0}".format(coord): value
                        for coord, value in enumerate(state)})
            records.append(row)

        xy["flow_input{0}_x0".format(index)] = (
            trajectory.times, trajectory.states[:, 0])

    summary = {"sup_norm": path.sup_norm(), "h1_seminorm": path.h1_seminorm(),
               "state_bound": state_bound(budget, act, network["T"], 1.0)}

    return write_results(records, {}, cfg.output_dir, name="flow",
                         columns=columns, summary=summary, xy=xy)


def run_rademacher(cfg, workers):
    act = get_activation(cfg)
    section = cfg["rademacher"]
    records = []

    for trial in range(section["trials"]):
        rng = seeding.make_rng(cfg.seed, seeding.DATA, trial)
        values = rng.uniform(-1.0, 1.0, size=(section["size"], section["S"]))

        if section["symmetric"]:
            values = np.vstack([values, -values])

        cls = EvaluatedClass(values, symmetric=section["symmetric"])
        exact = rademacher_exact(cls, workers)
        report = contraction_check(cls, act, workers)

        row = dict(report.to_record(), trial=trial, size=cls.size,
                   exact=exact.value, in_range=report.in_range)

        if section["draws"]:
            estimate = rademacher_mc(cls, section["draws"], cfg.seed + trial)
            row.update(mc=estimate.value, half_width=estimate.half_width)

        else:
            row.update(mc=float("nan"), half_width=float("nan"))

        records.append(row)

    columns = ["trial", "S", "size", "activation", "exact", "mc",
               "half_width", "r_g", "r_psi_g", "slack", "implied_C",
               "bound_on_C", "in_range"]
    summary = {"activation": act.to_record(),
               "all_in_range": all(row["in_range"] for row in records)}

    return write_results(records, {}, cfg.output_dir, name="rademacher",
                         columns=columns, summary=summary)


def run_example33(cfg, workers):
    section = cfg["example33"]
    spec = SoftThresholdClassSpec(
        section["eta"], section["gamma"], section["alpha"], section["beta"],
        section["S"])

    closed = example33_closed_form(spec)
    row = {"S": spec.S, "eta": spec.eta, "gamma": spec.gamma,
           "alpha": spec.alpha, "beta": spec.beta,
           "r_g": float(closed["r_g"]), "r_psi_g": float(closed["r_psi_g"]),
           "r_g_bruteforce": float("nan"),
           "r_psi_g_bruteforce": float("nan")}

    if section["bruteforce"]:
        brute = example33_bruteforce(spec, workers)
        row.update(r_g_bruteforce=brute["r_g"],
                   r_psi_g_bruteforce=brute["r_psi_g"])

    # the same identity in exact rational arithmetic
    exact = example33_closed_form(SoftThresholdClassSpec(
        *[Fraction(section[name]) for name in ("eta", "gamma", "alpha",
                                               "beta")], spec.S))
    identity = Fraction(
        exact["r_g"] - exact["r_psi_g"]) == (
        (Fraction(section["alpha"]) + Fraction(section["beta"])) *
        Fraction(math.comb(spec.S - 1, spec.S // 2), 2 ** spec.S))

    return write_results(
        [row], {}, cfg.output_dir, name="example33",
        summary={"slack": row["r_g"] - row["r_psi_g"],
                 "identity_holds": identity})


def run_bounds(cfg, workers):
    act, budget = get_activation(cfg), get_budget(cfg)
    network, section = cfg["network"], cfg["bounds"]

    b_out = section["b_out"]

    if b_out is None:
        b_out = state_bound(budget, act, network["T"], 1.0)

    b_ell, b_kappa = loss_envelope(
        LossSpec(section["loss"], section["margin"]), network["n"], b_out,
        budget.b_in)

    inputs_list = [
        BoundInputs(network["n"], network["n_d"], network["T"], S,
                    section["delta"], budget, act, b_kappa, b_ell,
                    L=network["L"],
                    c_slack=(section["c_slack"] if len(section["c_slack"]) > 1
                             else section["c_slack"][0]),
                    clamp=section["clamp"], convention=section["convention"])
        for S in section["S"]]

    kinds = ["discrete", "continuous"] if section["kind"] == "both" else [
        section["kind"]]

    records = []

    for kind in kinds:
        records.extend(bound_rows(inputs_list, kind))

    recursion = []

    for inputs in inputs_list:
        envelope = recursion_envelope(inputs)

        for layer, value in enumerate(layered_recursion(inputs)):
            recursion.append({"S": inputs.S, "layer": layer, "R": value,
                              "envelope": envelope})

    summary = {
        "b_out": b_out, "b_ell": b_ell, "b_kappa": b_kappa,
        "c_slack_limit": {str(inputs.S): c_slack_limit(inputs)
                          for inputs in inputs_list},
    }

    return write_results(
        records, {}, cfg.output_dir, name="bounds", summary=summary,
        tables={"recursion": (recursion, ["S", "layer", "R", "envelope"])})


def run_gap_vs_s(cfg, workers):
    base = get_dataset_spec(cfg)
    section = cfg["gap-vs-s"]

    report = gap_vs_samples(
        section["archs"], section["S_grid"], section["seeds"], base,
        get_train_config(cfg), get_activation(cfg), get_loss(cfg, base),
        cfg["network"]["m"], section["window"], workers)

    xy = {}

    for T, L in sorted(section["archs"]):
        points = [(S, np.mean([record.gap for record in report.records
                               if (record.T, record.L, record.S) ==
                               (T, L, S)]))
                  for S in section["S_grid"]
                  if any((record.T, record.L, record.S) == (T, L, S)
                         for record in report.records)]

        if points:
            xy["gap_T{0}_L{1}".format(T, L)] = tuple(zip(*points))

    fits = {"T={0},L={1}".format(*arch): fit
            for arch, fit in sorted(report.fits.items())}

    return write_results(
        report.records, fits, cfg.output_dir, name="gap_vs_s",
        columns=list(GapRecord._fields), summary=gap_summary(report),
        tables={"exclusions": (report.exclusions,
                               list(Exclusion._fields))},
        xy=xy)


def run_depth(cfg, workers):
    base = get_dataset_spec(cfg)
    section = cfg["depth"]

    report = depth_refinement(
        cfg["network"]["T"], section["L_grid"], base, get_train_config(cfg),
        section["seeds"], get_activation(cfg), get_loss(cfg, base),
        cfg["network"]["m"], cfg["budget"]["b_theta"], workers)

    curves = [dict(row._asdict(), L=L, seed=seed)
              for (L, seed), log in sorted(report.curves.items())
              for row in log.rows]

    means = [(L, np.mean([record.final_metric for record in report.records
                          if record.L == L]))
             for L in section["L_grid"]
             if any(record.L == L for record in report.records)]

    summary = {"differences": report.differences, "metric": report.metric,
               "exclusions": report.exclusions}

    return write_results(
        report.records, {}, cfg.output_dir, name="depth",
        columns=list(DepthRecord._fields), summary=summary,
        tables={"curves": (curves, ["L", "seed"] + list(LogRow._fields))},
        xy={"depth_metric": tuple(zip(*means))} if means else None)


def run_activation_compare(cfg, workers):
    base = get_dataset_spec(cfg)
    section = cfg["activation-compare"]

    report = activation_comparison(
        section["mode"], base, get_train_config(cfg), section["archs"],
        section["seeds"], (section["alpha"], section["beta"]),
        (section["a"], section["b"]), get_loss(cfg, base),
        cfg["network"]["m"], section["window"], workers)

    return write_results(
        report.records, {}, cfg.output_dir, name="activation_compare",
        columns=list(CurveRecord._fields),
        summary={"late_gaps": report.late_gaps, "mode": section["mode"],
                 "exclusions": report.exclusions})


def _convergence_path(cfg, act, budget):
    network, section = cfg["network"], cfg["convergence"]
    rng = seeding.make_rng(cfg.seed, seeding.PATH)

    if section["path"] == "smooth":
        return random_smooth_params(
            network["n_d"], network["n"], network["m"], network["T"], budget,
            rng, section["modes"], cfg["budget"]["convention"])

    disc = random_params(
        network["n_d"], network["n"], network["m"], 1, network["T"], budget,
        rng, cfg["budget"]["convention"])
    layer = disc.layers[0]

    if section["path"] == "zero":
        layer = LayerParams(layer.V, np.zeros_like(layer.W), layer.b,
                            np.zeros_like(layer.c))

    return constant_path_params(layer, disc.pre, network["T"])


def run_convergence(cfg, workers):
    act, budget = get_activation(cfg), get_budget(cfg)
    section = cfg["convergence"]

    path = _convergence_path(cfg, act, budget)
    d_set = ball_samples(
        section["inputs"], path.n_d, budget.b_in,
        seeding.make_rng(cfg.seed, seeding.INPUTS))

    result = convergence_rate_study(
        path, d_set, section["L_grid"], act, section["reference_steps"],
        section["subgrid"])

    records = [{"L": L, "tau": tau, "error": error}
               for L, tau, error in zip(result.L, result.tau, result.errors)]
    xy = None

    if not result.slope_skipped:
        xy = {"convergence_loglog": (np.log(result.tau),
                                     np.log(result.errors))}

    return write_results(
        records, {"slope": result.slope}, cfg.output_dir, name="convergence",
        columns=["L", "tau", "error"],
        summary={"slope_skipped": result.slope_skipped,
                 "path": section["path"]},
        xy=xy)


HANDLERS = {
    "catalog": run_catalog,
    "forward": run_forward,
    "flow": run_flow,
    "rademacher": run_rademacher,
    "example33": run_example33,
    "bounds": run_bounds,
    "gap-vs-s": run_gap_vs_s,
    "depth": run_depth,
    "activation-compare": run_activation_compare,
    "convergence": run_convergence,
}


def get_parser():
    parser = argparse.ArgumentParser(
        prog="resflow",
        description="Residual network flows and their generalization "
                    "bounds")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True,
                        help="run configuration file")
    parser.add_argument("--output", help="override [run] output_dir")
    parser.add_argument("--seed", type=int, help="override [run] seed")
    parser.add_argument("--workers", type=int,
                        help="worker processes (default: available cores, "
                             "capped by RESFLOW_THREADS)")
    parser.add_argument("--verbose", action="store_true",
                        help="debug logging")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + __version__)

    return parser


def main(argv=None):
    args = get_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT)

    try:
        cfg = read_config(args.config)

        if cfg.command != args.command:
            raise ConfigError(
                "config is for {0!r}, not {1!r}".format(
                    cfg.command, args.command), key="command")

        if args.output:
            cfg = cfg.replace(output_dir=args.output)

        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be non negative", key="seed")

            cfg = cfg.replace(seed=args.seed)

        cfg.check_files()

    except (VALIDATION_ERRORS + (OSError, )) as exc:
        logger.error("Invalid configuration: %s" % (exc))
        return 1

    workers = resolve_workers(args.workers)

    logger.info("Running %s on %s workers, results in %s" % (
        cfg.command, workers, cfg.output_dir))

    try:
        HANDLERS[cfg.command](cfg, workers)

    except VALIDATION_ERRORS as exc:
        logger.error("Invalid parameters: %s" % (exc))
        return 1

    except Exception as exc:
        logger.exception("%s failed: %s" % (cfg.command, exc))
        return 2

    return 0


if __name__ == "__main__":
    sys.exit(main())
