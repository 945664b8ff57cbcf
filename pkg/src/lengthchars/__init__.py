"""Characters on categories of quiver representations over prime fields.

The category is finite-dimensional representations of an acyclic quiver
over F_p.  A catalog of indecomposables stands in for the set of
isoclasses; characters are integer vectors on the catalog extended by
additivity, and the topology and subobject-closure invariants are computed
on that finite model.
"""

__version__ = "0.1.0"

from .linalg import DEFAULT_PRIME, InconsistentSystemError
from .quiver import (
    Arrow,
    BudgetExceeded,
    Morphism,
    Quiver,
    QuiverError,
    Rep,
    cokernel,
    direct_sum,
    direct_sum_morphisms,
    image,
    injective_at,
    kernel,
    projective_at,
    pushout,
    quotient,
    regular_rep,
    simple_at,
    submodules,
    subrep,
)
from .homs import (
    EndAlgebra,
    HomSpace,
    end_algebra,
    hom_basis,
    hom_dim,
    is_indecomposable,
    is_isomorphic,
    jacobson_radical,
    krull_schmidt,
    module_length,
)
from .catalog import Catalog, MorphismPool, OutOfCatalogError, build_pool, enumerate_catalog
from .character import (
    Character,
    DecompositionResult,
    NotDecomposableError,
    add,
    char_of_module,
    decompose,
    degree,
    endolength,
    evaluate,
    is_irreducible,
    leq,
    module_characters,
    verify_axioms,
)
from .ziegler import (
    IsolationCertificate,
    SpectrumModel,
    basic_open,
    build_model,
    chi_alpha,
    closed_v,
    degree_v,
    is_discrete,
    isolated_points,
    left_almost_split_check,
    topology_report,
)
from .subcat import (
    SubClosedSet,
    all_subclosed_sets,
    compare_orders,
    embeds_in_power,
    sub_chi,
    sub_closure,
    verify_sub_theorem,
)
from .io import cache_read, cache_write, parse_quiver
