"""Exact torsion of chain complexes over group and Novikov rings, orbit zeta
functions, and the product invariant ``I = zeta * tau``."""

from .group import (
    FgAbelianGroup,
    GroupElement,
    Splitting,
    Weight,
    coker,
    kernel_and_splitting,
    smith_normal_form,
)
from .novikov import (
    GroupRingElement,
    NotInNov,
    NotInvertible,
    NovikovSeries,
    degree,
    exp_series,
    include_i_N,
    invert,
    leading_term,
    log_series,
    normalize_mod_units,
)
from .fieldsum import FieldFactor, FieldSumElement, decompose, det_fraction_free, project
from .embedding import EmbeddedSeries, embed_fraction
from .torsion import (
    BasedChainComplex,
    TorsionValue,
    floer_torsion,
    manifold_torsion,
    reduce_to_Z2,
    reidemeister_torsion,
    torsion_over_field,
)
from .invariant import (
    InvariantValue,
    OrbitCounts,
    assemble_I,
    coefficient_at,
    extended_leading_term,
    log_I,
    zeta,
)
from .bifurcation import FloerState, Move, apply_move, fuzz_invariance
from .applications import (
    LefschetzData,
    SeifertMatrix,
    alexander_from_seifert,
    capacity_bound,
    duality_companion,
    lefschetz_zeta,
    surgery_torsion,
    toral_fixed_classes,
    typef_check,
)

__version__ = "0.1.0"
