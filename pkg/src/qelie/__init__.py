"""qelie: metric Lie algebras by structure constants, left-invariant Ricci
curvature through independent routes, the totally left-invariant
quasi-Einstein solver, and exact lattice obstructions."""

from . import algebra, catalog, curvature, documents, lattice, qe
from .algebra import MetricLieAlgebra, StructureTensor, Subspace

__all__ = [
    "algebra",
    "catalog",
    "curvature",
    "documents",
    "lattice",
    "qe",
    "MetricLieAlgebra",
    "StructureTensor",
    "Subspace",
]

__version__ = "0.1.0"
