"""Seeded random streams for reproducible trials.

Every trial owns a ``SeedSequence`` built from its seed; each consumer
(topology, mobility, CEE draws, baseline association) gets its own child
stream, so the draws of one stage never shift the draws of another.
"""

from typing import Dict

import numpy as np

STREAMS = ("topology", "mobility", "cee", "greedy", "random")


class TrialStreams:
    """Named, independent ``numpy.random.Generator`` streams for one seed."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        children = np.random.SeedSequence(self.seed).spawn(len(STREAMS))
        self._streams: Dict[str, np.random.Generator] = {
            name: np.random.default_rng(child) for name, child in zip(STREAMS, children)
        }

    def __getitem__(self, name: str) -> np.random.Generator:
        try:
            return self._streams[name]
        except KeyError:
            raise KeyError(f"unknown RNG stream '{name}', expected one of {STREAMS}") from None

    @property
    def topology(self) -> np.random.Generator:
        return self._streams["topology"]

    @property
    def mobility(self) -> np.random.Generator:
        return self._streams["mobility"]

    @property
    def cee(self) -> np.random.Generator:
        return self._streams["cee"]

    @property
    def greedy(self) -> np.random.Generator:
        return self._streams["greedy"]

    @property
    def random(self) -> np.random.Generator:
        return self._streams["random"]
