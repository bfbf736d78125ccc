from .numerics import canonicalize_signs, pca_bases, pinv, procrustes_error, smallest_eigvecs
from .ranking import precision_at_k
from .synth import SynthParams, synth_manifold

__all__ = [
    "canonicalize_signs", "pca_bases", "pinv", "procrustes_error", "smallest_eigvecs",
    "precision_at_k",
    "SynthParams", "synth_manifold",
]
