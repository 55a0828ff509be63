"""Classical Monte Carlo sampler for the interacting N-atom steady state."""

from rydsim.mc.steady import (
    ladder_populations,
    single_atom_steady_state,
    two_level_coherence,
    two_level_populations,
)
from rydsim.mc.sampler import (
    EnsembleState,
    McResult,
    build_ensemble,
    sample_steady_state,
    scaling_curve,
)

__all__ = [
    "ladder_populations",
    "single_atom_steady_state",
    "two_level_coherence",
    "two_level_populations",
    "EnsembleState",
    "McResult",
    "build_ensemble",
    "sample_steady_state",
    "scaling_curve",
]
