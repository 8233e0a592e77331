from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ExploreConfig:
    """Bounds and candidate suppliers for every state-space search.

    ``r_family`` holds the processes used by bounded local bisimulation; in each
    of them the free name ``r_hole`` stands for the extruded name.
    ``context_family`` holds higher-order testing contexts (see
    :mod:`paramproc.equivalence`), each a ``(hole_variable, term)`` pair.
    """

    max_tau_depth: int = 32
    max_states: int = 20_000
    fresh_inputs: int = 1
    r_family: tuple = ()
    r_hole: str = "z"
    context_family: tuple = ()
    max_trace_len: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.fresh_inputs < 1:
            raise ValueError("fresh_inputs must be at least 1")
        for name in ("max_tau_depth", "max_states", "max_trace_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def with_(self, **changes) -> "ExploreConfig":
        return replace(self, **changes)


DEFAULT = ExploreConfig()
