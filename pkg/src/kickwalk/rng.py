"""Counter-style RNG stream derivation.

Every random draw in the package comes from a stream keyed by
``(seed, member_index, time_index)``. Streams are built from
``numpy.random.SeedSequence`` with the pair as spawn key and fed to PCG64,
so a member's draws never depend on which worker evaluates it or in which
order members are scheduled.
"""
import numpy as np

GENERATOR_NAME = "numpy.PCG64(SeedSequence(entropy=seed, spawn_key=(member, time)))"


def derive_stream(seed: int, member_index: int, time_index: int = 0) -> np.random.Generator:
    if member_index < 0 or time_index < 0:
        raise ValueError("stream indices must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=(int(member_index), int(time_index)))
    return np.random.Generator(np.random.PCG64(ss))
