"""Seeded sample points, resampling of inadmissible points and the parallel runner."""

import asyncio
from enum import StrEnum
from functools import partial
from typing import Callable, Sequence, TypeVar

import logfire_api as logfire
import numpy as np
import tenacity as t
from pydantic import BaseModel, Field, field_validator

from .errors import DomainError, Error, NoAdmissibleSampleError, VerificationError
from .limiter import SampleLimiter

T = TypeVar("T")

SampleFunction = Callable[[np.ndarray, np.random.Generator], T]


class ErrorPolicy(StrEnum):
    """The policy for handling a sample that fails for a reason other than its domain."""

    RAISE = "raise"
    RETURN = "return"
    SKIP = "skip"


class Sampler(BaseModel):
    """Uniform sample points in a box, reproducible per sample index.

    Sample ``i`` draws from ``numpy.random.default_rng([seed, i])``, so the
    sample set depends only on ``seed`` and not on how samples are scheduled.
    """

    count: int = Field(default=100, ge=1)
    seed: int = Field(default=0)
    box: list[tuple[float, float]]
    max_attempts: int = Field(default=50, ge=1)

    @field_validator("box")
    @classmethod
    def _check_box(cls, box: list[tuple[float, float]]) -> list[tuple[float, float]]:
        if not box:
            raise ValueError("Sampling box must have at least one interval")
        for lo, hi in box:
            if not lo < hi:
                raise ValueError(f"Empty sampling interval [{lo}, {hi}]")
        return box

    @classmethod
    def cube(cls, dim: int, lo: float, hi: float, **kwargs) -> "Sampler":
        return cls(box=[(lo, hi)] * dim, **kwargs)

    @property
    def dim(self) -> int:
        return len(self.box)

    def rng(self, index: int) -> np.random.Generator:
        # SeedSequence entropy must be non-negative
        return np.random.default_rng([self.seed % 2**64, index])

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        lo, hi = np.array(self.box, dtype=float).T
        return lo + (hi - lo) * rng.random(self.dim)

    def points(self) -> list[np.ndarray]:
        """First draw of every sample, without any admissibility check."""
        return [self.draw(self.rng(i)) for i in range(self.count)]

    def admissible(self, index: int, evaluate: SampleFunction[T]) -> T:
        """Evaluate sample ``index``, redrawing the point on every :class:`DomainError`.

        Raises
        ------
        NoAdmissibleSampleError
            When ``max_attempts`` draws in a row are rejected.
        """
        rng = self.rng(index)
        retrying = t.Retrying(
            stop=t.stop_after_attempt(self.max_attempts),
            retry=t.retry_if_exception_type(DomainError),
            after=partial(_log_rejection, index),
            reraise=True,
        )
        try:
            for attempt in retrying:
                with attempt:
                    return evaluate(self.draw(rng), rng)
        except DomainError as err:
            raise NoAdmissibleSampleError(
                f"No admissible point for sample {index} after "
                f"{self.max_attempts} attempts: {err}"
            ) from err


def _log_rejection(index: int, retry_state: t.RetryCallState) -> None:
    if retry_state.outcome is not None and retry_state.outcome.failed:
        logfire.debug(
            "sample.rejected",
            index=index,
            attempt=retry_state.attempt_number,
            reason=str(retry_state.outcome.exception()),
        )


async def map_samples(
    sampler: Sampler,
    evaluate: SampleFunction[T],
    *,
    jobs: int = 1,
    error_policy: ErrorPolicy = ErrorPolicy.RAISE,
) -> list[T | Error]:
    """Evaluate every sample in worker threads, ordered by sample index.

    Parameters
    ----------
    sampler : Sampler
        Source of the sample points.
    evaluate : Callable
        Called with the point and the sample's generator; raising
        :class:`DomainError` rejects the point and triggers a redraw.
    jobs : int
        Maximum number of samples evaluated at the same time.
    error_policy : ErrorPolicy
        What to do with a sample that fails for any other reason.

    Returns
    -------
    list
        One result per sample (in index order). Under ``RETURN`` a failed
        sample is an :class:`Error`; under ``SKIP`` it is dropped.

    Raises
    ------
    VerificationError
        If a sample fails and the error policy is RAISE (default).
    """
    limiter = SampleLimiter.from_jobs(jobs)

    async def run_one(index: int) -> T | Error:
        async with limiter.throttle():
            try:
                return await asyncio.to_thread(sampler.admissible, index, evaluate)
            except Exception as err:
                logfire.error("sample.failed", index=index, error=str(err))
                if error_policy == ErrorPolicy.RAISE:
                    raise VerificationError(
                        f"Sample {index} failed",
                        exception=err,
                        sample_index=index,
                    ) from err
                return Error(message=str(err), sample_index=index)

    results = await asyncio.gather(*[run_one(i) for i in range(sampler.count)])

    if error_policy == ErrorPolicy.SKIP:
        results = [r for r in results if not isinstance(r, Error)]

    return results


def successful(results: Sequence[T | Error]) -> list[T]:
    """Drop failed samples; raise when nothing is left."""
    ok = [r for r in results if not isinstance(r, Error)]
    if not ok:
        raise NoAdmissibleSampleError("No sample point could be evaluated")
    return ok
