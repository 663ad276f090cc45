"""Deterministic random streams.

Every stochastic routine in this package draws from a Philox4x64-10
counter-based generator keyed with an explicit 64-bit integer, so each
stream is fully determined by its key and is reproducible across runs,
platforms, and processes.

Per-trial keys are derived from a base seed with SplitMix64: the key for
trial t is the (t+1)-th output of a SplitMix64 sequence seeded with the
base seed,

    key(t) = mix((base + (t + 1) * 0x9E3779B97F4A7C15) mod 2**64)

where mix is the SplitMix64 finalizer (xor-shift and multiply chain with
constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).  The scheme takes a
few lines to reimplement in any language, which keeps symbol draws
auditable outside Python.
"""

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    # SplitMix64 output finalizer.
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(base_seed: int, trial: int) -> int:
    """Derive the 64-bit generator key for one Monte Carlo trial.

    Parameters
    ----------
    base_seed : int
        Seed of the whole experiment.
    trial : int
        Trial index, starting at 0.

    Returns
    -------
    int
        Key in [0, 2**64).  Distinct trials of the same experiment get
        well-separated keys; changing the base seed changes every key.
    """
    if trial < 0:
        raise ValueError("trial index must be >= 0, got %d" % trial)
    return _mix((base_seed + (trial + 1) * _GOLDEN) & _MASK64)


def philox(seed: int) -> np.random.Generator:
    """Return a Generator backed by Philox4x64-10 keyed with `seed`.

    The key is used directly (no entropy pool in between), so equal seeds
    give bitwise-equal streams.
    """
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))
