import asyncio
from typing import Any, Callable


class QueueManager:
    """Runs blocking hash work off the event loop, at most ``max_concurrency`` at once"""

    def __init__(self, max_concurrency: int = 4):
        self.max_concurrency = max(1, max_concurrency)
        self.semaphore = asyncio.Semaphore(self.max_concurrency)

    async def submit(self, fn: Callable, *args) -> Any:
        async with self.semaphore:
            return await asyncio.to_thread(fn, *args)

