"""Module for handling progress indication."""
import itertools
import sys
import threading
import time
from typing import Optional


class ProgressIndicator:
    """Animated dots with an optional done/total counter."""

    def __init__(self, message="Working", total: Optional[int] = None, enabled: bool = True):
        """Initialize the progress indicator.

        Args:
            message: The message to display before the dots
            total: Number of work items, shown as done/total when given
            enabled: When False, start/stop/update are no-ops
        """
        self.message = message
        self.total = total
        self.enabled = enabled
        self.done = 0
        self.running = False
        self.thread = None
        self._lock = threading.Lock()
        self._width = 0

    def update(self, done: int) -> None:
        with self._lock:
            self.done = max(self.done, done)

    def advance(self, count: int = 1) -> None:
        with self._lock:
            self.done += count

    def _label(self) -> str:
        if self.total is None:
            return self.message
        return f"{self.message} [{self.done}/{self.total}]"

    def _animate(self):
        for dots in itertools.cycle(['   ', '.  ', '.. ', '...']):
            if not self.running:
                break
            line = f'\r{self._label()}{dots}'
            self._width = max(self._width, len(line))
            sys.stdout.write(line)
            sys.stdout.flush()
            time.sleep(0.25)

    def start(self):
        if not self.enabled:
            return
        self.running = True
        self.thread = threading.Thread(target=self._animate, daemon=True)
        self.thread.start()

    def stop(self):
        if not self.enabled:
            return
        self.running = False
        if self.thread:
            self.thread.join()
        sys.stdout.write('\r' + ' ' * self._width + '\r')
        sys.stdout.flush()

    def __enter__(self) -> 'ProgressIndicator':
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.stop()
