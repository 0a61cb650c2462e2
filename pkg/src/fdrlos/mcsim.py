"""Monte-Carlo capacity estimates from physical-channel samples.

The estimators average a function of SNR draws produced by
:func:`fdrlos.channel.sample_snr`, independently of every analytic route,
and serve as the oracle for them.

Reproducibility
---------------
The ``samples`` draws are split into consecutive blocks of ``batch`` draws.
Block ``j`` uses its own generator seeded by
``SeedSequence(seed, spawn_key=(j,))``, so every draw is determined by
``(seed, batch, j)`` alone. ``streams`` only says how many workers share the
blocks; per-block sums are combined in block order with exactly rounded
summation (:func:`math.fsum`), so the result is bit-identical for every
stream count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import sample_snr
from .errors import DomainError

__all__ = [
    "McConfig",
    "McResult",
    "mc_expectation",
    "mc_ora",
    "mc_opra",
    "mc_opra_constraint",
]


@dataclass(frozen=True)
class McConfig:
    """Monte-Carlo run configuration.

    Attributes
    ----------
    samples : int
        Total number of SNR draws, at least 1000.
    seed : int
        Root seed (64-bit).
    streams : int
        Number of workers sharing the blocks (does not change the result).
    batch : int
        Draws per block; part of the random-stream identity.
    """

    samples: int = 10**6
    seed: int = 0
    streams: int = 1
    batch: int = 2**16

    def __post_init__(self):
        for name in ("samples", "seed", "streams", "batch"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.samples < 1000:
            raise DomainError("McConfig.samples must be at least 1000")
        if self.streams < 1:
            raise DomainError("McConfig.streams must be at least 1")
        if self.batch < 1:
            raise DomainError("McConfig.batch must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("McConfig.seed must be a 64-bit unsigned integer")


class McResult(NamedTuple):
    """Sample mean with its standard error.

    Attributes
    ----------
    mean : float
        Sample mean (bit/s/Hz for the capacity estimators).
    std_err : float
        Sample standard deviation divided by ``sqrt(samples_used)``.
    samples_used : int
    """

    mean: float
    std_err: float
    samples_used: int


def _block_generator(seed, j):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(j,))))


def _block_sums(p, func, cfg, j):
    n = min(cfg.batch, cfg.samples - j * cfg.batch)
    g = sample_snr(p, _block_generator(cfg.seed, j), size=n)
    v = np.asarray(func(g), dtype=float)
    return math.fsum(v), math.fsum(v * v)


def mc_expectation(p, func, cfg=None):
    """Monte-Carlo estimate of ``E[func(gamma)]``.

    Parameters
    ----------
    p : ChannelParams
    func : callable
        Vectorised function of an array of SNR draws.
    cfg : McConfig, optional

    Returns
    -------
    McResult
    """
    cfg = cfg or McConfig()
    n_blocks = -(-cfg.samples // cfg.batch)
    blocks = range(n_blocks)
    if cfg.streams == 1:
        sums = [_block_sums(p, func, cfg, j) for j in blocks]
    else:
        with ThreadPoolExecutor(max_workers=cfg.streams) as pool:
            sums = list(pool.map(lambda j: _block_sums(p, func, cfg, j), blocks))
    n = cfg.samples
    s1 = math.fsum(s for s, _ in sums)
    s2 = math.fsum(s for _, s in sums)
    mean = s1 / n
    var = max(s2 - n * mean * mean, 0.0) / (n - 1)
    return McResult(mean, math.sqrt(var / n), n)


def mc_ora(p, cfg=None):
    """Monte-Carlo ORA capacity ``E[log2(1 + gamma)]``.

    Parameters
    ----------
    p : ChannelParams
    cfg : McConfig, optional

    Returns
    -------
    McResult
    """
    return mc_expectation(p, lambda g: np.log1p(g) / math.log(2.0), cfg)


def _check_gamma0(gamma0):
    gamma0 = float(getattr(gamma0, "gamma0", gamma0))
    if not gamma0 > 0:
        raise DomainError("gamma0 must be positive")
    return gamma0


def mc_opra(p, gamma0, cfg=None):
    """Monte-Carlo OPRA capacity ``E[log2(gamma/gamma0); gamma >= gamma0]``.

    Parameters
    ----------
    p : ChannelParams
    gamma0 : float or OpraCutoff
        Cut-off SNR.
    cfg : McConfig, optional

    Returns
    -------
    McResult
    """
    gamma0 = _check_gamma0(gamma0)
    lg0 = math.log(gamma0)
    return mc_expectation(
        p, lambda g: np.where(g >= gamma0, (np.log(g) - lg0) / math.log(2.0), 0.0), cfg
    )


def mc_opra_constraint(p, gamma0, cfg=None):
    """Monte-Carlo power-constraint value ``E[(1/gamma0 - 1/gamma); gamma >= gamma0]``.

    Equals one at the optimal cut-off.
    """
    gamma0 = _check_gamma0(gamma0)
    inv = 1.0 / gamma0

    def f(g):
        safe = np.where(g >= gamma0, g, 1.0)
        return np.where(g >= gamma0, inv - 1.0 / safe, 0.0)

    return mc_expectation(p, f, cfg)
