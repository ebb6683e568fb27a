"""toruslab: exact construction and verification of graded algebra tori.

Library surface, bottom to top:

* scalars  -- exact arithmetic in QQ, QQ(w), QQ(sqrt d)
* lattice  -- ZZ^n subgroups, Smith normal form, quotients, reflection
              subspaces, quadratic maps into F_2
* assoc    -- 2-cocycles, twisted group algebras, graded involutions
* jordan   -- Jordan views, axiom checkers, Hermitian polynomial machinery
* clifford -- Clifford triples and the spin-factor torus
* albert   -- degree-3 tori, cubic norm structures, first Tits construction
* cli      -- build | verify | table | fuzz
"""

from .albert import (
    AlbertCocycle,
    AlbertTriple,
    AlbertView,
    CubicNormStructure,
    Deg3Torus,
    SplittingRep,
    build_deg3_torus,
    cubic_structure,
    eps_eta,
    lambda_albert,
    tits_first,
)
from .assoc import (
    AssocElement,
    BicharacterCocycle,
    Cocycle,
    GradedInvolution,
    QuantumCocycle,
    QuantumMatrix,
    TableCocycle,
    TwistedGroupAlgebra,
    central_grading_group,
    cocycle_identity_check,
    commutation_factor,
    hermitian_part_basis,
    invert_homogeneous,
)
from .clifford import CliffordElement, CliffordTriple, clifford_invert, grading_component
from .jordan import (
    CliffordView,
    HermitianView,
    JordanElement,
    JordanView,
    PlusView,
    build_hermitian_type,
    d_operator,
    jordan_identity_check,
    jordan_invert,
    jordan_mul,
    p16,
    q48,
    strong_type_check,
    tad,
    torus_axioms_check,
)
from .lattice import (
    CosetUnionSet,
    QuadraticMapF2,
    Subgroup,
    coset_reps,
    prs_check,
    quadratic_map_check,
    smith_normal_form,
    snf_quotient,
)
from .scalars import QQ, QW, Field, Scalar, factor_exponents, is_root_of_unity

__version__ = "0.1.0"
