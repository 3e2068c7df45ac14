"""fanostab: exact stability calculator for blow-ups of P^3 along
(2,3)-intersection curves.

Everything is computed over Q (with single quadratic extensions where
points demand them): the CM divisor class and its slope 22/51, Hilbert-
Mumford indices against one-parameter subgroups, the VGIT wall structure,
curve-singularity classification on the quadric, the resulting K-stability
verdicts, the cubic-threefold correspondence, and the K3 lattice checks.
"""

__version__ = "0.1.0"

from .chow import BlowupData, ChowClass, blowup_push, cm_class, pe_constants, push_p3, slope_of
from .errors import FanostabError
from .germs import GermType, classify_germ
from .hm import (
    Chamber,
    CurvePair,
    HMValue,
    OnePS,
    Wall,
    WALLS,
    chamber_of,
    destabilizer_search,
    hk_map,
    hm_index,
    is_complete_intersection,
    one_ps_limit,
)
from .lattice import (
    GramLattice,
    lambda0,
    nef_check_unigonal,
    pair,
    polarization_deg22,
    rr_h0,
    unigonal_obstruction,
)
from .poly import MPoly, poly_gcd
from .quadrics import QuadricInfo, quadric_normal_form
from .rationals import QuadExt, Rat
from .series import TruncSeries, complete_square
from .singularities import (
    SurfacePoint,
    cone_point_type,
    ruling_components,
    segre_restrict,
    singular_points,
)
from .verdict import (
    CubicThreefold,
    GitVerdict,
    T0,
    Verdict,
    extract_pair,
    git_verdict,
    k_verdict,
    sarkisov_cubic,
)
