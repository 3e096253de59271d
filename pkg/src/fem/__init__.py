"""
P1 finite elements on structured meshes of the unit square.
"""

from .assembly import assemble_laplacian_p1
from .hierarchy import MeshHierarchy, build_mesh_hierarchy, subdomain_index_sets
from .mesh import StructuredMesh

__all__ = [
    'StructuredMesh',
    'MeshHierarchy',
    'assemble_laplacian_p1',
    'build_mesh_hierarchy',
    'subdomain_index_sets',
]
