"""Monte Carlo simulation of the duel under a fixed shooting order."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DuelReport:
    epsilon: float
    trials: int
    n_steps: int
    seed: int
    x_survives: int
    y_survives: int
    both_survive: int
    analytic: float

    @property
    def empirical(self) -> float:
        return (self.x_survives - self.y_survives) / self.trials

    @property
    def stderr(self) -> float:
        """Binomial standard error of the empirical bias."""
        p_decided = 1.0 - (1.0 - self.epsilon) ** self.n_steps
        var = max(p_decided - self.analytic ** 2, 0.0)
        return math.sqrt(var / self.trials)

    @property
    def z_score(self) -> float:
        se = self.stderr
        diff = self.empirical - self.analytic
        if se == 0:
            return 0.0 if diff == 0 else math.inf
        return diff / se


def simulate_duel(bits, epsilon: float, trials: int, seed: int,
                  analytic: float, batch: int = 1 << 18) -> DuelReport:
    """Play ``trials`` independent duels over the first ``len(bits)`` turns.

    Each shot hits with probability ``epsilon`` independently, so the turn of
    the first hit is geometric; the shooter at that turn (``+1`` is X) wins.
    Duels with no hit within ``len(bits)`` turns end with both alive.
    Uses numpy's PCG64 generator seeded with ``seed``.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    order = np.asarray(list(bits), dtype=np.int8)
    n = len(order)
    if n == 0:
        raise ValueError("empty ordering")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = y = none = 0
    done = 0
    while done < trials:
        size = min(batch, trials - done)
        first_hit = rng.geometric(epsilon, size=size) - 1
        hit = first_hit < n
        shooter = order[first_hit[hit]]
        nx = int(np.count_nonzero(shooter == 1))
        x += nx
        y += int(hit.sum()) - nx
        none += int(size - hit.sum())
        done += size
    return DuelReport(float(epsilon), trials, n, seed, x, y, none, float(analytic))
