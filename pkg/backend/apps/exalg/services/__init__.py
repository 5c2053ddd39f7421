from .multivector import MultiVector, basis_tuples, interior, symplectic_form, wedge
from .subspace import LinearMap, Subspace, graph_extract, image, intersect, kernel, subspace_from

__all__ = [
    'MultiVector', 'basis_tuples', 'interior', 'symplectic_form', 'wedge',
    'LinearMap', 'Subspace', 'graph_extract', 'image', 'intersect', 'kernel', 'subspace_from',
]
