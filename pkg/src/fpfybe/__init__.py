"""Set-theoretic Yang-Baxter solutions from fixed point free abelian endomorphisms."""

from .braces import SkewBrace, brace_from_regular_subgroup, build_brace, opposite_brace, phi_isomorphism
from .errors import *  # noqa: F401,F403
from .families import FamilySpec, coverage_report, dihedral_fpf_maps, family_map, family_solution, s_formula, r_formula
from .groups import (
    CATALOG,
    FiniteGroup,
    alternating,
    cyclic,
    dihedral,
    direct_product_cyclic,
    group_by_name,
    make_group_from_cayley,
    metacyclic,
    symmetric,
)
from .io import RMatrixExport, export_rmatrix
from .morphisms import (
    GroupMap,
    are_brace_equivalent,
    automorphism_group,
    classify_fpf,
    enumerate_endomorphisms,
    enumerate_fpf,
    is_fpf_abelian,
    trivial_map,
)
from .perms import count_fpf_subgroups, opposite_regular_subgroup, regular_subgroup
from .ybe import (
    YbeMap,
    closed_form_R,
    closed_form_Rprime,
    inverse_solution_from_brace,
    solution_from_brace,
    transport_by_automorphism,
    verify_braid,
    verify_nondegenerate,
)

__version__ = "0.1.0"
