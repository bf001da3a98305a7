"""Ground truth for the adder: exhaustive path enumeration, Monte Carlo, star chains.

Every realisation ``X_0 = 1, X_1 = 2, ...`` is a Brauer (star) addition chain:
each new value adds the previous value to some earlier one. ``P(X_k = t)`` is
the number of star chains of length ``k`` ending at ``t`` divided by ``k!``.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

ENUMERATION_CAP = 9
CHAIN_TARGET_CAP = 2**16
CHAIN_STATE_BUDGET = 2 * 10**6


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PathDistribution:
    n: int
    pmf: dict[int, Fraction]
    paths: int

    def moment(self, m: int) -> Fraction:
        return sum((p * v**m for v, p in self.pmf.items()), Fraction(0))


def enumerate_distribution(n: int, cap: int = ENUMERATION_CAP) -> PathDistribution:
    """Exact law of ``X_n`` by depth-first enumeration of all ``n!`` histories."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap} ({math.factorial(n)} paths)")
    counts = _enumerate_counts(n)
    total = sum(counts.values())
    return PathDistribution(n, {v: Fraction(c, total) for v, c in sorted(counts.items())}, total)


@lru_cache(maxsize=None)
def _enumerate_counts(n: int) -> Counter:
    counts: Counter = Counter()
    history = [1]

    def walk(depth: int):
        if depth == n:
            counts[history[-1]] += 1
            return
        last = history[-1]
        for earlier in range(depth + 1):
            history.append(last + history[earlier])
            walk(depth + 1)
            history.pop()

    walk(0)
    return counts


def exact_moment_oracle(m: int, n: int, cap: int = ENUMERATION_CAP) -> Fraction:
    return enumerate_distribution(n, cap).moment(m)


@dataclass(frozen=True)
class SimConfig:
    n_max: int
    samples: int
    seed: int = 42
    orders: tuple[int, ...] = (1,)
    streams: int = 8
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        if self.streams < 1 or self.workers < 1:
            raise ValueError("streams and workers must be >= 1")

    def stream_sizes(self) -> list[int]:
        base, extra = divmod(self.samples, self.streams)
        return [base + (1 if i < extra else 0) for i in range(self.streams)]


@dataclass(frozen=True)
class MomentEstimate:
    m: int
    n: int
    mean: float
    sd: float
    stderr: float
    samples: int
    # exact sum of X_n^m and of X_n^{2m} over all samples
    power_sum: int = field(repr=False, default=0)
    square_sum: int = field(repr=False, default=0)

    def z_score(self, exact) -> float:
        if self.stderr == 0:
            return 0.0 if self.mean == float(exact) else math.inf
        return (self.mean - float(exact)) / self.stderr


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    """PCG64 stream keyed by ``(seed, stream)`` through numpy's SeedSequence."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), stream])))


def _stream_paths(rng: np.random.Generator, size: int, n_max: int):
    """Yield ``(n, X_n)`` for one stream; values are exact (int64 only while ``2**n`` fits)."""
    dtype = np.int64 if n_max <= 62 else object
    history = np.empty((n_max + 1, size), dtype=dtype)
    history[0] = 1
    cols = np.arange(size)
    yield 0, history[0]
    for n in range(n_max):
        picks = rng.integers(0, n + 1, size=size)
        history[n + 1] = history[n] + history[picks, cols]
        yield n + 1, history[n + 1]


def _run_stream(args) -> dict[tuple[int, int], tuple[int, int]]:
    seed, stream, size, n_max, orders = args
    sums = {}
    for n, X in _stream_paths(stream_generator(seed, stream), size, n_max):
        obj = X.astype(object)
        for m in orders:
            powers = obj**m
            sums[(m, n)] = (int(powers.sum()), int((powers * powers).sum()))
    return sums


def simulate(config: SimConfig) -> list[MomentEstimate]:
    """Sample-mean estimates of ``E[X_n^m]`` for every ``n <= n_max`` and order ``m``.

    Samples are split into ``config.streams`` streams with fixed sizes and seeds,
    and merged through exact integer power sums, so the result does not depend
    on ``workers``.
    """
    jobs = [
        (config.seed, i, size, config.n_max, tuple(config.orders))
        for i, size in enumerate(config.stream_sizes()) if size
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            parts = list(pool.map(_run_stream, jobs))
    else:
        parts = [_run_stream(j) for j in jobs]
    N = config.samples
    out = []
    for m in config.orders:
        for n in range(config.n_max + 1):
            s1 = sum(p[(m, n)][0] for p in parts)
            s2 = sum(p[(m, n)][1] for p in parts)
            mean = Fraction(s1, N)
            var = (Fraction(s2) - Fraction(s1 * s1, N)) / (N - 1) if N > 1 else Fraction(0)
            sd = math.sqrt(var)
            out.append(MomentEstimate(m, n, float(mean), sd, sd / math.sqrt(N), N, s1, s2))
    return out


def log_normal_statistics(n: int, samples: int, seed: int = 42) -> tuple[np.ndarray, float, float]:
    """Standardised ``(log X_n - mu sqrt n) / (sigma n^{1/4})`` with sample-fit ``mu, sigma``."""
    cfg = SimConfig(n_max=n, samples=samples, seed=seed, orders=())
    logs = np.array([math.log(x) for x in _final_values(cfg)])
    mu = float(logs.mean()) / math.sqrt(n)
    sigma = float(logs.std(ddof=1)) / n**0.25
    return (logs - mu * math.sqrt(n)) / (sigma * n**0.25), mu, sigma


def _final_values(config: SimConfig) -> list[int]:
    values = []
    for i, size in enumerate(config.stream_sizes()):
        if size:
            for n, X in _stream_paths(stream_generator(config.seed, i), size, config.n_max):
                pass
            values.extend(int(x) for x in X)
    return values


# -- star chains ---------------------------------------------------------------

@dataclass(frozen=True)
class ChainStats:
    target: int
    min_length: int
    count_by_length: dict[int, int]

    def probability(self, length: int) -> Fraction:
        """``P(X_length = target)``."""
        return Fraction(self.count_by_length.get(length, 0), math.factorial(length))


def binary_chain_length(n: int) -> int:
    """Steps used by left-to-right binary exponentiation (itself a star chain)."""
    return n.bit_length() - 1 + bin(n).count("1") - 1


def _star_chain_exists(target: int, length: int) -> bool:
    chain = [1]
    members = {1}

    def dfs(depth: int) -> bool:
        last = chain[-1]
        if last == target:
            return True
        remaining = length - depth
        if remaining == 0 or last << remaining < target:
            return False
        if remaining == 1:
            return (target - last) in members
        # larger summands first: they reach the target soonest
        for a in reversed(chain):
            nxt = last + a
            if nxt > target:
                continue
            chain.append(nxt)
            members.add(nxt)
            found = dfs(depth + 1)
            chain.pop()
            members.discard(nxt)
            if found:
                return True
        return False

    return dfs(0)


def _min_star_length(target: int) -> int:
    lower = (target - 1).bit_length() if target > 1 else 0
    upper = binary_chain_length(target)
    for length in range(lower, upper):
        if _star_chain_exists(target, length):
            return length
    return upper


def count_star_chains(target: int, max_length: int, budget: int = CHAIN_STATE_BUDGET) -> dict[int, int]:
    """Number of star chains ending at ``target`` for each length ``<= max_length``.

    Chains are grouped by (set of values, last value), which fixes every
    continuation; each group carries its multiplicity.
    """
    counts: dict[int, int] = {}
    if target == 1:
        counts[0] = 1
    layer = {(frozenset([1]), 1): 1}
    for depth in range(1, max_length + 1):
        nxt: dict = {}
        remaining = max_length - depth
        for (values, last), mult in layer.items():
            for a in values:
                v = last + a
                if v > target or v << remaining < target:
                    continue
                key = (values | {v}, v)
                nxt[key] = nxt.get(key, 0) + mult
        if len(nxt) > budget:
            raise CapExceeded(f"star-chain search exceeded {budget} states at length {depth}")
        hits = sum(c for (_, last), c in nxt.items() if last == target)
        if hits:
            counts[depth] = hits
        layer = {k: c for k, c in nxt.items() if k[1] != target}
    return counts


def min_star_chain_length(target: int, extra_lengths: int = 0, cap: int = CHAIN_TARGET_CAP) -> ChainStats:
    """Shortest star chain for ``target`` plus chain counts up to ``min_length + extra_lengths``."""
    if target < 1:
        raise ValueError("target must be >= 1")
    if target > cap:
        raise CapExceeded(f"target {target} exceeds search cap {cap}")
    k = _min_star_length(target)
    counts = count_star_chains(target, k + extra_lengths)
    return ChainStats(target, k, counts)
