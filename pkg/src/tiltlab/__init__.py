"""Combinatorics of preprojective tilting modules over path algebras.

The toolkit works entirely on combinatorial shadows: the walk metric l(i, j)
and its vector lattice stand in for Ext-vanishing between shifted
projectives, knitting tables stand in for Hom/Ext dimensions, and the cube
calculus (completion / amalgam / psi) stands in for comparing infinite
tilting quivers.  Every route is implemented at least twice and
cross-checked; see check_consistency and the verify-* CLI commands.
"""

from .errors import (
    InternalCheckError,
    OverflowLimitError,
    ParseError,
    PreconditionError,
    TiltlabError,
    ValidationError,
)
from .quiver import (
    ClassFlags,
    Quiver,
    classify,
    doubled,
    format_quiver,
    is_isomorphic,
    normalize,
    parse_quiver,
    quiver_to_json,
)
from .lmetric import LMatrix, ext_vanishes, in_L, l_matrix, l_max
from .knitting import (
    CartanData,
    ConsistencyReport,
    DimTable,
    cartan,
    check_consistency,
    dim_vectors,
    euler_form,
    ext_dim,
    ext_table,
    hom_dim,
    hom_table,
    path_count_matrix,
)
from .poset import (
    HasseGraph,
    IdealReport,
    PosetIdeal,
    TheoremReport,
    enumerate_lk,
    hasse_edges,
    minimal_lk,
    order_ideals,
    tp_window,
    verify_theorem_t,
)
from .structure import (
    CubeSubquiver,
    DecompositionSeq,
    amalgam,
    complete,
    cube_amalgam,
    decompose,
    equivalent,
    is_completion_image,
    is_in_script_L,
    leadsto_step,
    meet_join,
    normal_form,
    phi,
    psi,
    psi_inverse,
    same_tp,
    verify_commute,
)

__version__ = "0.1.0"
