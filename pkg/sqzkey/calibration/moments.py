"""
Mergeable first and second moments of (a_x, a_p, X, P)
"""

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from sqzkey.errors import InvalidArgumentError

COLUMNS = ("alice_x", "alice_p", "bob_x", "bob_p")


@dataclass(frozen=True, eq=False)
class FrameMoments:
    """Count, mean and co-moment matrix (sum of outer products of deviations)"""

    n: int
    mean: np.ndarray
    comoment: np.ndarray

    @classmethod
    def from_arrays(cls, data: np.ndarray) -> "FrameMoments":
        """Moments of a 4 x n array of columns"""
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[0] != len(COLUMNS) or data.shape[1] < 1:
            raise InvalidArgumentError(f"expected a 4 x n array, got shape {data.shape}")
        mean = data.mean(axis=1)
        dev = data - mean[:, None]
        return cls(n=data.shape[1], mean=mean, comoment=dev @ dev.T)

    @classmethod
    def from_frame(cls, frame) -> "FrameMoments":
        return cls.from_arrays(np.vstack([getattr(frame, c) for c in COLUMNS]))

    def merge(self, other: "FrameMoments") -> "FrameMoments":
        """Pairwise merge of two disjoint samples"""
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.n / n)
        comoment = self.comoment + other.comoment + np.outer(delta, delta) * (self.n * other.n / n)
        return FrameMoments(n=n, mean=mean, comoment=comoment)

    @staticmethod
    def merge_all(parts: Iterable["FrameMoments"]) -> "FrameMoments":
        """Merge in iteration order"""
        parts = list(parts)
        if not parts:
            raise InvalidArgumentError("nothing to merge")
        return reduce(FrameMoments.merge, parts)

    def covariance(self) -> np.ndarray:
        """Unbiased (n - 1) covariance"""
        if self.n < 2:
            raise InvalidArgumentError("covariance needs at least two samples")
        return self.comoment / (self.n - 1)
