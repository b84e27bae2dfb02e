"""Counter-based random substreams for reproducible, order-independent draws.

Every stochastic component of the planner pulls numbers from a Philox
generator keyed by ``(seed, domain)`` with the remaining identifying
integers (generation, member index, epoch, ...) placed in the high words
of the 256-bit counter.  Streams for different paths therefore never
overlap, and any worker can open a stream without coordinating with the
others: the draw for (seed=3, epoch=7, obstacle=2) is the same whether it
is computed first, last, or in parallel.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Domain tags keep unrelated subsystems on disjoint key spaces.
DOMAIN_INIT = 1        # DE population initialization
DOMAIN_MUTATION = 2    # per-(generation, member) DE operator draws
DOMAIN_OBSTACLE = 3    # per-(epoch, obstacle) radius realization
DOMAIN_MAP = 4         # synthetic raster generation
DOMAIN_KMEANS = 5      # clustering centroid seeding
DOMAIN_VORTEX = 6      # random vortex placement
DOMAIN_PLACEMENT = 7   # random obstacle placement


def substream(seed: int, domain: int, *path: int) -> np.random.Generator:
    """Open an independent generator for (seed, domain, *path).

    ``path`` holds up to three non-negative integers (< 2**64) that are
    written into counter words 1..3; word 0 is left free-running so each
    stream has 2**64 blocks of headroom before it could touch a sibling.
    """
    if len(path) > 3:
        raise ValueError(f"substream path too deep: {path!r}")
    key = np.array([seed & _MASK64, domain & _MASK64], dtype=np.uint64)
    counter = np.zeros(4, dtype=np.uint64)
    for i, word in enumerate(path):
        counter[i + 1] = word & _MASK64
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
