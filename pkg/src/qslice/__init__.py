"""Exact computations for the queer Lie superalgebra q(N): pyramids and good
gradings, finite W-superalgebras through the Kazhdan filtration, and the
cohomology of the Gelfand-Graev module."""

from .cohomology import cohomology_dims
from .envelope import slice_hilbert_series, verify_nu, whittaker_invariants
from .pyramid import Partition, Pyramid, enumerate_pyramids
from .qsuper import QElement, bracket, odd_form, pi
from .structure import NilpotentDatum, check_good, isotropic_choice, mperp_decomposition

__version__ = "0.1.0"

__all__ = [
    "NilpotentDatum",
    "Partition",
    "Pyramid",
    "QElement",
    "bracket",
    "check_good",
    "cohomology_dims",
    "enumerate_pyramids",
    "isotropic_choice",
    "mperp_decomposition",
    "odd_form",
    "pi",
    "slice_hilbert_series",
    "verify_nu",
    "whittaker_invariants",
]
