#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Fri Oct 23 09:30:18 2026

Desk scale experiment protocols:

* :py:func:`gap_vs_samples`: generalization gap against the sample size,
  with the fit ``gap ~ mu / sqrt(S)``
* :py:func:`depth_refinement`: training with a growing number of layers at
  fixed horizon
* :py:func:`activation_comparison`: leaky ReLU against the dead zone
  activation, fixed or learnable
* :py:func:`convergence_rate_study`: distance between a discrete network
  and the continuous flow it samples

Independent jobs run in worker processes; results are collected in job
order, which is a canonical sort of the job keys, so outputs don't depend on
scheduling.
"""

import os
import logging
import collections

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from scipy.optimize import curve_fit
from scipy.stats import spearmanr

from . import seeding
from .activation import catalog
from .datasets import generate_dataset
from .resnet import (
    ParamBudget, init_params, random_smooth_params, sample_params,
    discrete_forward, forward_batch, continuous_flow, time_grid)
from .training import LossSpec, sgd_train, accuracy
from .settings import (
    GAP_WINDOW, RK4_REFERENCE_STEPS, SUPREMUM_SUBGRID, THREADS_ENV)
from .exceptions import ParameterError, DivergenceError

logger = logging.getLogger(__name__)

GapRecord = collections.namedtuple(
    "GapRecord",
    ["T", "L", "S", "seed", "train_loss", "test_loss", "gap"])

Exclusion = collections.namedtuple(
    "Exclusion", ["T", "L", "S", "seed", "step", "message"])

FitResult = collections.namedtuple(
    "FitResult", ["mu", "residual_rms", "r_squared"])

GapReport = collections.namedtuple(
    "GapReport", ["records", "exclusions", "fits", "spearman", "total"])

DepthRecord = collections.namedtuple(
    "DepthRecord",
    ["L", "seed", "final_train_loss", "final_test_loss", "final_metric"])

DepthReport = collections.namedtuple(
    "DepthReport",
    ["records", "curves", "exclusions", "differences", "metric"])

CurveRecord = collections.namedtuple(
    "CurveRecord",
    ["arm", "T", "L", "seed", "epoch", "train_loss", "test_loss", "gap",
     "alpha", "beta"])

ComparisonReport = collections.namedtuple(
    "ComparisonReport", ["records", "exclusions", "late_gaps"])

ConvergenceResult = collections.namedtuple(
    "ConvergenceResult", ["L", "tau", "errors", "slope", "slope_skipped"])

Job = collections.namedtuple(
    "Job",
    ["key", "base", "cfg", "act", "loss", "T", "L", "S", "seed", "width",
     "init", "b_theta", "learn_shift", "window"])


def resolve_workers(workers=None):
    """Worker count capped by the RESFLOW_THREADS environment variable"""

    cap = os.environ.get(THREADS_ENV)
    cap = int(cap) if cap else (os.cpu_count() or 1)

    return max(1, min(workers or cap, cap))


def run_jobs(func, jobs, workers=None):
    """Apply func to jobs, in processes when more than one worker is
    available. Results keep the order of jobs"""

    workers = resolve_workers(workers)
    jobs = list(jobs)

    logger.info("Running %s jobs on %s workers" % (len(jobs), workers))

    if workers == 1 or len(jobs) < 2:
        return [func(job) for job in jobs]

    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, jobs))


def default_loss(base):
    if base.is_classification:
        return LossSpec("cross_entropy")

    return LossSpec("squared")


def fit_inverse_sqrt(S, gaps):
    """Least squares fit of ``gap = mu / sqrt(S)`` in closed form::

        mu = sum(gap_i / sqrt(S_i)) / sum(1 / S_i)

    Returns:
        FitResult: mu, root mean square residual and R^2 of the model
    """

    S = np.asarray(S, dtype=float)
    gaps = np.asarray(gaps, dtype=float)

    if S.shape != gaps.shape or len(S) == 0:
        raise ParameterError("S and gaps must be non empty and aligned")

    mu = np.sum(gaps / np.sqrt(S)) / np.sum(1.0 / S)

    return _fit_result(mu, S, gaps)


def fit_inverse_sqrt_iterative(S, gaps):
    """The same fit solved iteratively by :py:func:`scipy.optimize.curve_fit`
    """

    S = np.asarray(S, dtype=float)
    gaps = np.asarray(gaps, dtype=float)

    (mu, ), _ = curve_fit(
        lambda x, mu: mu / np.sqrt(x), S, gaps, p0=[1.0],
        jac=lambda x, mu: (1.0 / np.sqrt(x))[:, np.newaxis])

    return _fit_result(mu, S, gaps)


def _fit_result(mu, S, gaps):
    residuals = gaps - mu / np.sqrt(S)
    ss_res = float(np.sum(residuals ** 2))
    ss_tot = float(np.sum((gaps - np.mean(gaps)) ** 2))

    if ss_tot > 0:
        r_squared = 1.0 - ss_res / ss_tot

    else:
        r_squared = 1.0 if ss_res == 0 else 0.0

    return FitResult(float(mu), float(np.sqrt(np.mean(residuals ** 2))),
                     r_squared)


def _check_ascending(values, name, minimum=1):
    values = list(values)

    if len(values) < minimum:
        raise ParameterError(
            "{0} needs at least {1} points (got {2})".format(
                name, minimum, len(values)))

    if any(b <= a for a, b in zip(values, values[1:])):
        raise ParameterError("{0} must be ascending".format(name))

    return values


def _initial_params(job, n_d, n):
    if job.init == "smooth":
        path = random_smooth_params(
            n_d, n, job.width, job.T, ParamBudget(job.b_theta, job.base.b_in),
            seeding.make_rng(job.seed, seeding.PATH))
        return sample_params(path, job.L)

    return init_params(
        n_d, n, job.width, job.L, job.T,
        seeding.make_rng(job.seed, seeding.INIT, job.L))


def _train_job(job):
    """Train one model. Returns (job, params, log) or (job, Exclusion)"""

    train, test = generate_dataset(
        job.base.replace(s_train=job.S, seed=job.seed))

    params = _initial_params(
        job, train.inputs.shape[1], train.targets.shape[1])
    cfg = job.cfg.replace(seed=job.seed, learn_shift=job.learn_shift)

    try:
        params, log = sgd_train(params, job.act, job.loss, train, cfg, test)

    except DivergenceError as exc:
        logger.warning("Excluding %s: %s" % (job.key, exc))
        return job, Exclusion(job.T, job.L, job.S, job.seed, exc.step,
                              str(exc))

    return job, params, log, test


def _gap_job(job):
    result = _train_job(job)

    if isinstance(result[1], Exclusion):
        return result[1]

    _, _, log, _ = result
    train_loss, test_loss = log.window(job.window)

    return GapRecord(job.T, job.L, job.S, job.seed, train_loss, test_loss,
                     test_loss - train_loss)


def gap_vs_samples(archs, S_grid, seeds, base, cfg, act=None, loss=None,
                   width=8, window=GAP_WINDOW, workers=None):
    """Train one model for each (architecture, S, seed) and fit the mean
    gap of each architecture with ``mu / sqrt(S)``

    Args:
        archs (list): (T, L) pairs
        S_grid (list): ascending training sizes, at least three
        seeds (list): seeds
        base (DatasetSpec): the data, ``s_train`` is replaced by S
        cfg (TrainConfig): training settings
        act (ActivationSpec): activation, ReLU by default
        loss (LossSpec): loss, by default squared for regression and cross
            entropy for classification
        width (int): hidden width m
        window (int): gaps are averaged over the last ``window`` epochs
        workers (int): worker processes

    Returns:
        GapReport: records, exclusions, fits and Spearman correlations by
        architecture
    """

    S_grid = _check_ascending(S_grid, "S_grid", 3)
    act = act or catalog("ReLU")
    loss = loss or default_loss(base)

    jobs = [
        Job((T, L, S, seed), base, cfg, act, loss, T, L, S, seed, width,
            "random", None, False, window)
        for T, L in sorted(archs) for S in S_grid for seed in sorted(seeds)]

    results = run_jobs(_gap_job, jobs, workers)

    records = [item for item in results if isinstance(item, GapRecord)]
    exclusions = [item for item in results if isinstance(item, Exclusion)]

    fits, spearman = {}, {}

    for T, L in sorted(archs):
        points = []

        for S in S_grid:
            gaps = [record.gap for record in records
                    if (record.T, record.L, record.S) == (T, L, S)]

            if gaps:
                points.append((S, float(np.mean(gaps))))

        if len(points) < 3:
            logger.warning("Not enough points to fit T=%s L=%s" % (T, L))
            continue

        sizes, means = zip(*points)
        fits[(T, L)] = fit_inverse_sqrt(sizes, means)
        spearman[(T, L)] = float(spearmanr(sizes, means)[0])

    return GapReport(records, exclusions, fits, spearman, len(jobs))


def _depth_job(job):
    result = _train_job(job)

    if isinstance(result[1], Exclusion):
        return result[1], None

    _, params, log, test = result
    final = log.rows[-1]

    if job.base.is_classification:
        metric = accuracy(params, log.activation, test)

    else:
        metric = final.test_loss

    return (DepthRecord(job.L, job.seed, final.train_loss, final.test_loss,
                        metric), log)


def successive_differences(values):
    return [abs(second - first) for first, second in zip(values, values[1:])]


def depth_refinement(T, L_grid, base, cfg, seeds, act=None, loss=None,
                     width=8, b_theta=1.0, workers=None):
    """Train the same smooth initialization sampled at each depth

    Every seed draws one random smooth parameter path on [0, T]; the model
    with L layers starts from its samples at ``l T / L``, so initial models
    of different depths discretize the same flow.

    Returns:
        DepthReport: final values by (L, seed), training curves, and the
        successive differences of the seed averaged final train loss and
        final metric (test accuracy for classification, test loss else)
    """

    L_grid = _check_ascending(L_grid, "L_grid")
    act = act or catalog("ReLU")
    loss = loss or default_loss(base)

    jobs = [
        Job((L, seed), base, cfg, act, loss, T, L, base.s_train, seed, width,
            "smooth", b_theta, False, GAP_WINDOW)
        for L in L_grid for seed in sorted(seeds)]

    results = run_jobs(_depth_job, jobs, workers)

    records, curves, exclusions = [], {}, []

    for job, (item, log) in zip(jobs, results):
        if isinstance(item, Exclusion):
            exclusions.append(item)
            continue

        records.append(item)
        curves[job.key] = log

    train_means, metric_means = [], []

    for L in L_grid:
        rows = [record for record in records if record.L == L]
        train_means.append(float(np.mean(
            [row.final_train_loss for row in rows])) if rows else np.nan)
        metric_means.append(float(np.mean(
            [row.final_metric for row in rows])) if rows else np.nan)

    differences = {
        "train_loss": successive_differences(train_means),
        "metric": successive_differences(metric_means),
    }

    metric = "test_accuracy" if base.is_classification else "test_loss"

    return DepthReport(records, curves, exclusions, differences, metric)


def init_convergence(path, L_grid, inputs, act, steps=RK4_REFERENCE_STEPS):
    """Output error of untrained networks sampled from one smooth path,
    against the rk4 flow of that path

    Returns:
        list: max over inputs of the infinity norm error, for each L
    """

    inputs = np.atleast_2d(inputs)
    reference = np.array([
        continuous_flow(path, act, d, "rk4", steps).final for d in inputs])

    return [float(np.max(np.abs(
        forward_batch(sample_params(path, L), act, inputs) - reference)))
        for L in L_grid]


def _comparison_job(job):
    arm = job.key[0]
    result = _train_job(job)

    if isinstance(result[1], Exclusion):
        return result[1]

    _, _, log, _ = result

    return [
        CurveRecord(arm, job.T, job.L, job.seed, row.epoch, row.train_loss,
                    row.test_loss, row.test_loss - row.train_loss,
                    log.activation.alpha, log.activation.beta)
        for row in log.rows]


def activation_comparison(mode, base, cfg, archs, seeds, alpha_beta=(0., 0.),
                          slopes=(1.0, 0.05), loss=None, width=8,
                          window=GAP_WINDOW, workers=None):
    """Train matched pairs with the leaky activation (no dead zone) and with
    the dead zone activation

    Args:
        mode (str): ``"fixed"`` keeps (alpha, beta); ``"learnable"`` starts
            from them and learns them, shared by all layers
        base (DatasetSpec): data
        cfg (TrainConfig): training settings
        archs (list): (T, L) pairs
        seeds (list): seeds, shared by both arms
        alpha_beta (tuple): dead zone of the structured arm
        slopes (tuple): right and left slopes (a, b)

    Returns:
        ComparisonReport: per epoch curves of both arms and the mean gap of
        the last ``window`` epochs for each arm
    """

    if mode not in ("fixed", "learnable"):
        raise ParameterError("mode: {0} not supported".format(mode))

    a, b = slopes
    alpha, beta = alpha_beta
    arms = {
        "leaky": (catalog("DeadZoneLeaky", [a, b, 0.0, 0.0]), False),
        "structured": (catalog("DeadZoneLeaky", [a, b, alpha, beta]),
                       mode == "learnable"),
    }
    loss = loss or default_loss(base)

    jobs = [
        Job((arm, T, L, seed), base, cfg, arms[arm][0], loss, T, L,
            base.s_train, seed, width, "random", None, arms[arm][1], window)
        for arm in sorted(arms) for T, L in sorted(archs)
        for seed in sorted(seeds)]

    results = run_jobs(_comparison_job, jobs, workers)

    records, exclusions = [], []

    for item in results:
        if isinstance(item, Exclusion):
            exclusions.append(item)

        else:
            records.extend(item)

    late_gaps = {}
    last = cfg.epochs - window

    for arm in sorted(arms):
        gaps = [record.gap for record in records
                if record.arm == arm and record.epoch > last]
        late_gaps[arm] = float(np.mean(gaps)) if gaps else float("nan")

    return ComparisonReport(records, exclusions, late_gaps)


def _is_geometric(values):
    ratios = [b / a for a, b in zip(values, values[1:])]
    return all(abs(ratio - ratios[0]) < 1e-12 for ratio in ratios)


def convergence_rate_study(path, d_set, L_grid, act,
                           reference_steps=RK4_REFERENCE_STEPS,
                           subgrid=SUPREMUM_SUBGRID):
    """Distance between discrete networks sampled from a path and its flow

    For each L the error is the max over inputs, layers l and a sub-grid of
    [t^(l-1), t^l] of ``|x^l - x(t)|_inf``, with x(t) the rk4 reference
    (linearly interpolated between its steps). The slope of log error
    against log tau is fitted by least squares.

    Returns:
        ConvergenceResult: errors for each L and the fitted slope; when an
        error is zero the fit is skipped and flagged
    """

    L_grid = _check_ascending(L_grid, "L_grid", 4)

    if not _is_geometric(L_grid):
        raise ParameterError("L_grid must be geometric")

    d_set = np.atleast_2d(d_set)
    references = [continuous_flow(path, act, d, "rk4", reference_steps)
                  for d in d_set]

    errors = []

    for L in L_grid:
        disc = sample_params(path, L)
        times = time_grid(path.horizon, L)
        error = 0.0

        fine = np.concatenate([
            np.linspace(times[index - 1], times[index], subgrid + 1)
            for index in range(1, L + 1)])

        for d, reference in zip(d_set, references):
            states = discrete_forward(disc, act, d).states

            exact = np.column_stack([
                np.interp(fine, reference.times, reference.states[:, coord])
                for coord in range(disc.n)]).reshape(L, subgrid + 1, disc.n)

            error = max(error, float(np.max(np.abs(
                states[1:, np.newaxis, :] - exact))))

        logger.debug("L=%s error=%s" % (L, error))
        errors.append(error)

    tau = [path.horizon / L for L in L_grid]

    if min(errors) <= 0:
        logger.warning("Zero error found, slope not fitted")
        return ConvergenceResult(L_grid, tau, errors, float("nan"), True)

    slope = float(np.polyfit(np.log(tau), np.log(errors), 1)[0])

    return ConvergenceResult(L_grid, tau, errors, slope, False)


def gap_summary(report):
    """JSON friendly summary of a :py:class:`GapReport`"""

    return {
        "fits": {"T={0},L={1}".format(*arch): fit._asdict()
                 for arch, fit in sorted(report.fits.items())},
        "spearman": {"T={0},L={1}".format(*arch): value
                     for arch, value in sorted(report.spearman.items())},
        "exclusions": [exclusion._asdict()
                       for exclusion in report.exclusions],
        "total_jobs": report.total,
    }
