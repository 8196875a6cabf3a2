"""Selective orders in degree-p^2 central simple algebras over imaginary
quadratic fields: exact local lattice arithmetic on the SL_p building,
quadratic form class groups, genus parametrization, and the selectivity
decision procedure."""

__version__ = "0.1.0"

from .building import (
    ApartmentFrame,
    LatticeClass,
    OrderPattern,
    chamber_vertices,
    end_contains,
    order_pattern_contains,
    type_distance,
    vertex_from_coords,
)
from .classgroup import (
    ClassGroup,
    PrimeOfK,
    QuadForm,
    class_group,
    compose,
    prime_class,
    reduce,
)
from .dvr import (
    DegenerateLatticeError,
    LocalMatrix,
    LocalScalar,
    hnf_local,
    pval,
    smith_invariants,
    val,
)
from .genus import (
    DeviationData,
    GenusElement,
    GenusGroup,
    choose_generators,
    genus_group,
    parametrization,
    rho,
)
from .relext import (
    OrderSpec,
    QuadInt,
    RelativeExtension,
    SplitShape,
    conductor_support,
    disc_poly,
    residue_field,
    splitting_shape,
)
from .selectivity import (
    INDETERMINATE,
    AlgebraSpec,
    SelectivityVerdict,
    SubgroupHL,
    admits_order,
    class_field_membership,
    embeds_in_algebra,
    irreducibility_check,
    selectivity_verdict,
)
