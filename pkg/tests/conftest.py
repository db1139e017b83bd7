import threading

import numpy as np
import pytest


@pytest.fixture
def counted():
    """Wrap a function so every call records its argument (thread-safe)."""

    def wrap(fn):
        lock = threading.Lock()
        calls = []

        def wrapped(x):
            with lock:
                calls.append(np.array(x, dtype=np.float64, copy=True))
            return fn(x)

        wrapped.calls = calls
        return wrapped

    return wrap
