import asyncio
from contextlib import asynccontextmanager

from pydantic import BaseModel, Field, PrivateAttr


class SampleLimiter(BaseModel):
    """Caps the number of sample evaluations running at the same time."""

    max_concurrent: int = Field(default=1, ge=1)

    _semaphore: asyncio.Semaphore = PrivateAttr()

    def model_post_init(self, __context) -> None:
        self._semaphore = asyncio.Semaphore(self.max_concurrent)

    @classmethod
    def from_jobs(cls, jobs: int) -> "SampleLimiter":
        """Create a limiter allowing ``jobs`` concurrent evaluations.

        Parameters
        ----------
        jobs : int
            Maximum number of evaluations in flight.
        """
        return cls(max_concurrent=jobs)

    @asynccontextmanager
    async def throttle(self):
        """Hold one evaluation slot for the duration of the block."""
        await self.acquire()
        try:
            yield self
        finally:
            self.release()

    async def acquire(self) -> None:
        await self._semaphore.acquire()

    def release(self) -> None:
        self._semaphore.release()
