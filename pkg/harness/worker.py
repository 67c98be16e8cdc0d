# harness/worker.py
"""
Trial execution: runs every trial of every input case, serially or on a
process pool, and hands back per-case tallies in input order.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

from core.config import get_settings
from core.errors import ProtocolInvariantError
from protocols.registry import InputCase, get_entry
from runtime.runner import ProtocolOutcome, run
from runtime.seeds import derive_rng, derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CaseResult:
    input_id: str
    trials: int
    successes: int
    bits_sent: int
    qubits_sent: int
    ebits: int
    exact: float | None
    batched: bool


@dataclass(frozen=True)
class TrialJob:
    protocol: str
    params: dict[str, Any]
    case: InputCase
    trials: int
    seed: int
    batch_threshold: int


def _check_counters(outcome: ProtocolOutcome) -> None:
    recounted = outcome.transcript.recount()
    reported = (outcome.channel.classical_bits_sent, outcome.channel.qubits_sent)
    if recounted != reported:
        raise ProtocolInvariantError(
            f"{outcome.protocol}: counters {reported} disagree with transcript {recounted}"
        )


def run_case(job: TrialJob) -> CaseResult:
    """All trials of one input; trial t runs on the seed derived from (seed, input id, t)."""
    entry = get_entry(job.protocol)
    protocol = entry.build(job.params)
    case = job.case
    exact = entry.exact(case.x, case.y, job.params)

    bits = qubits = ebits = 0
    successes = 0
    batched = entry.batch is not None and job.trials > job.batch_threshold
    runtime_trials = 1 if batched else job.trials

    for t in range(runtime_trials):
        outcome = run(protocol, case.x, case.y, derive_seed(job.seed, case.input_id, t))
        _check_counters(outcome)
        bits = max(bits, outcome.channel.classical_bits_sent)
        qubits = max(qubits, outcome.channel.qubits_sent)
        ebits = max(ebits, outcome.channel.ebits)
        successes += int(entry.success(outcome))

    if batched:
        rng = derive_rng(job.seed, case.input_id, "batch")
        successes = entry.batch(case.x, case.y, job.trials, rng)

    logger.debug("%s %s: %d/%d", job.protocol, case.input_id, successes, job.trials)
    return CaseResult(case.input_id, job.trials, successes, bits, qubits, ebits, exact, batched)


def run_trials(jobs: list[TrialJob], workers: int | None = None) -> list[CaseResult]:
    workers = get_settings().worker_count if workers is None else workers
    if workers <= 1 or len(jobs) <= 1:
        return [run_case(job) for job in jobs]

    logger.info("running %d cases on %d worker processes", len(jobs), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order, so output never depends on scheduling
        return list(pool.map(run_case, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
