# harness/experiment.py
"""
Experiment driver: resolves the seed, generates the input cases, runs
the trials and turns tallies into estimate rows.
"""
from __future__ import annotations

import logging
import math
from importlib.metadata import PackageNotFoundError, version

from core.config import get_settings
from harness.schemas import EstimateRow, ExperimentConfig, Report, ReportHeader
from harness.worker import CaseResult, TrialJob, run_trials
from protocols.registry import generate_inputs, get_entry
from runtime.seeds import derive_rng

logger = logging.getLogger(__name__)


def package_version() -> str:
    try:
        return version("qcomm")
    except PackageNotFoundError:
        return "0.0.0+local"


def resolve_seed(requested: int) -> tuple[int, str]:
    """The environment seed, when set, wins over the configured one."""
    settings = get_settings()
    if settings.seed is not None:
        return settings.seed, settings.seed_source
    return requested, "config"


def binomial_std_err(successes: int, trials: int) -> float:
    p = successes / trials
    return math.sqrt(p * (1.0 - p) / trials)


def to_row(protocol: str, result: CaseResult, sigma: float, exact_tolerance: float) -> EstimateRow:
    estimate = result.successes / result.trials
    std_err = binomial_std_err(result.successes, result.trials)
    abs_err = passed = None
    if result.exact is not None:
        abs_err = abs(estimate - result.exact)
        # spread of the estimator under the exact probability
        spread = math.sqrt(result.exact * (1.0 - result.exact) / result.trials)
        passed = abs_err <= max(sigma * spread, exact_tolerance)
    return EstimateRow(
        protocol=protocol,
        input_id=result.input_id,
        trials=result.trials,
        estimate=estimate,
        std_err=std_err,
        exact=result.exact,
        abs_err=abs_err,
        bits_sent=result.bits_sent,
        qubits_sent=result.qubits_sent,
        ebits=result.ebits,
        passed=passed,
    )


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> Report:
    settings = get_settings()
    entry = get_entry(config.protocol)
    params = entry.params(config.params)
    seed, seed_source = resolve_seed(config.seed)
    sigma = config.pass_sigma if config.pass_sigma is not None else settings.pass_sigma

    cases = generate_inputs(
        entry,
        config.mode.value,
        params,
        derive_rng(seed, "inputs"),
        explicit=config.inputs,
        grid=config.grid,
        count=config.count,
    )
    logger.info(
        "experiment %s: %d inputs x %d trials (seed %d from %s)",
        entry.name,
        len(cases),
        config.trials,
        seed,
        seed_source,
    )
    jobs = [
        TrialJob(entry.name, params, case, config.trials, seed, settings.batch_threshold)
        for case in cases
    ]
    results = run_trials(jobs, workers)
    rows = [to_row(entry.name, r, sigma, config.exact_tolerance) for r in results]

    failed = [row.input_id for row in rows if row.passed is False]
    if failed:
        logger.warning("%s: %d of %d rows outside tolerance", entry.name, len(failed), len(rows))

    header = ReportHeader(
        protocol=entry.name,
        estimate=entry.estimate,
        seed=seed,
        seed_source=seed_source,
        trials=config.trials,
        mode=config.mode.value,
        params={k: str(v) for k, v in sorted(params.items())},
        pass_rule=f"|estimate - exact| <= max({sigma:g} * sqrt(p(1-p)/trials), {config.exact_tolerance:g})",
        version=package_version(),
    )
    return Report(header=header, rows=rows)
