from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class ZipfModel:
    n_flows: int
    alpha: float
    freq: np.ndarray  # freq[k-1] is the share of flow k, descending
    cdf: np.ndarray   # running sum of freq

    def head_share(self, k: int) -> float:
        """Share of traffic carried by the k heaviest flows."""
        if k <= 0:
            return 0.0
        return float(self.cdf[min(k, self.n_flows) - 1])
