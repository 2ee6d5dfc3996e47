from collections.abc import Iterable

import numpy as np


class CompensatedSummation:
    """
    Incremental Neumaier summation.

    Keeps a running sum of many logarithms of very different magnitudes without the drift of repeated `+=`.
    """

    def __init__(self) -> None:
        self.sum = 0.0
        self.carry = 0.0

    def add(self, value: float) -> None:
        total = self.sum + value
        if abs(self.sum) >= abs(value):
            self.carry += (self.sum - total) + value
        else:
            self.carry += (value - total) + self.sum
        self.sum = total

    @property
    def value(self) -> float:
        return self.sum + self.carry


def compensated_cumulative_sum(values: Iterable[float]) -> np.ndarray:
    """Prefix sums of `values`, each accumulated with compensation."""
    summation = CompensatedSummation()
    prefix_sums = []
    for value in values:
        summation.add(float(value))
        prefix_sums.append(summation.value)

    return np.asarray(prefix_sums, dtype=float)
