"""Qudit Paulis and projective Cliffords as condensed encodings (mu, psi).

Submodules: ``ring`` and ``phase_space`` (Z_d / Z_d' arithmetic and omega),
``pauli`` (the condensed product), ``encoding`` (evaluate, compose, invert,
frames), ``lambda_c`` and ``lambda_pc`` (the two calculi), ``syntax`` (the
``.pc`` surface language), ``oracle`` (dense-matrix ground truth) and ``cli``.
"""

from importlib import resources

from .ring import Ring
from .pauli import PauliElement
from .encoding import CondensedEncoding, Frame

__version__ = "0.1.0"


def corpus_path(name: str):
    """Path of a bundled ``.pc`` program, e.g. ``corpus_path("repx.pc")``."""
    return resources.files(__name__) / "corpus" / name


__all__ = ["Ring", "PauliElement", "CondensedEncoding", "Frame", "corpus_path"]
