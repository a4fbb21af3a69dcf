"""Domain-wall partition function: permutation sum and one-variable recurrence.

The object is a function of M row parameters and M column parameters.  Two
evaluation routes are kept: the explicit sum of per-permutation terms, and a
recurrence that peels off the last row while removing one column at a time,
memoized over the subset of surviving columns (2^M states instead of M!).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import DegenerateParametersError, SizeCapError
from .vertex_model import SPECTRAL_GUARD, Regime, b_weight, c_weight, sampling_profile

PERMUTATION_CAP = 9
DISTINCTNESS_FLOOR = 1e-10


@dataclass(frozen=True)
class DwbcInput:
    """Row parameters, column parameters and the weight regime."""

    mu: tuple[complex, ...]
    q: tuple[complex, ...]
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(complex(v) for v in self.mu))
        object.__setattr__(self, "q", tuple(complex(v) for v in self.q))
        if len(self.mu) != len(self.q):
            raise ValueError(
                f"{len(self.mu)} row parameters vs {len(self.q)} column parameters"
            )
        for i in range(len(self.q)):
            for j in range(i + 1, len(self.q)):
                if abs(self.regime.phi(self.q[i] - self.q[j])) < DISTINCTNESS_FLOOR:
                    raise ValueError(
                        f"column parameters {i + 1} and {j + 1} coincide: "
                        f"{self.q[i]} ~ {self.q[j]}"
                    )

    @property
    def size(self) -> int:
        return len(self.q)


def dwbc_term(perm, inp: DwbcInput) -> complex:
    """Single permutation term.

    prod_i b(mu_i - q_{P i}) * prod_{i > j} c(mu_i - q_{P j})
    / prod_{i > j} c(q_{P i} - q_{P j}).
    """
    mu, q, regime = inp.mu, inp.q, inp.regime
    out = 1.0 + 0.0j
    for i in range(inp.size):
        out *= b_weight(mu[i] - q[perm[i]], regime)
        for j in range(i):
            out *= c_weight(mu[i] - q[perm[j]], regime)
            out /= c_weight(q[perm[i]] - q[perm[j]], regime)
    return out


def dwbc_sum(inp: DwbcInput, cap: int = PERMUTATION_CAP) -> complex:
    """Sum of all M! permutation terms, evaluated with gathered weight tables."""
    m = inp.size
    if m > cap:
        raise SizeCapError(f"permutation sum over {m}! terms exceeds cap {cap}!")
    if m == 0:
        return 1.0 + 0.0j
    mu, q, regime = inp.mu, inp.q, inp.regime
    b_tab = np.array([[b_weight(mu[i] - q[j], regime) for j in range(m)] for i in range(m)])
    c_tab = np.array([[c_weight(mu[i] - q[j], regime) for j in range(m)] for i in range(m)])
    cq_tab = np.array(
        [
            [c_weight(q[i] - q[j], regime) if i != j else 1.0 for j in range(m)]
            for i in range(m)
        ]
    )
    perms = np.array(list(permutations(range(m))))
    terms = np.ones(len(perms), dtype=complex)
    for i in range(m):
        terms *= b_tab[i, perms[:, i]]
        for j in range(i):
            terms *= c_tab[i, perms[:, j]]
            terms /= cq_tab[perms[:, i], perms[:, j]]
    return complex(terms.sum())


def dwbc_recurrence(inp: DwbcInput) -> complex:
    """Recursive evaluation removing the last row and one column per level.

    Level k uses row parameter mu_k and sums over the surviving columns i:
    b(mu_k - q_i) * prod_{a != i} c(mu_k - q_a) / c(q_i - q_a) times the
    value one level down without column i.  The empty product is 1, forced
    by consistency with the single-row value b(mu_1 - q_1).
    """
    mu, q, regime = inp.mu, inp.q, inp.regime
    memo: dict[frozenset[int], complex] = {}

    def rec(cols: frozenset[int]) -> complex:
        if not cols:
            return 1.0 + 0.0j
        if cols in memo:
            return memo[cols]
        row = mu[len(cols) - 1]
        total = 0.0 + 0.0j
        for i in cols:
            weight = b_weight(row - q[i], regime)
            for a in cols:
                if a != i:
                    weight *= c_weight(row - q[a], regime)
                    weight /= c_weight(q[i] - q[a], regime)
            total += weight * rec(cols - {i})
        memo[cols] = total
        return total

    return rec(frozenset(range(inp.size)))


def random_input(
    m: int,
    regime: Regime,
    rng,
    spread: float | None = None,
    guard: float | None = None,
    max_tries: int = 2000,
) -> DwbcInput:
    """Sample a well-conditioned input from a complex box.

    Column parameters keep pairwise phi-separation above ``guard`` and every
    pool difference stays away from the eta-shifted zeros, so both evaluation
    routes see O(1) weight ratios.
    """
    profile = sampling_profile(regime)
    spread = profile["spread"] if spread is None else spread
    guard = profile["pair_guard"] if guard is None else guard
    for _ in range(max_tries):
        mu = tuple(complex(a, b) for a, b in rng.uniform(-spread, spread, (m, 2)))
        q = tuple(complex(a, b) for a, b in rng.uniform(-spread, spread, (m, 2)))
        pool = mu + q
        ok = all(
            abs(regime.phi(x - y + regime.eta)) > SPECTRAL_GUARD
            for x in pool
            for y in pool
        ) and all(
            abs(regime.phi(q[i] - q[j])) > guard
            for i in range(m)
            for j in range(m)
            if i != j
        )
        if ok:
            return DwbcInput(mu, q, regime)
    raise DegenerateParametersError(
        f"could not sample a generic partition-function input after {max_tries} tries"
    )
