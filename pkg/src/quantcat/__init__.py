"""Categories enriched in finite quantaloids: presheaf objects, free
cocompletions, Cauchy completion and structural checks."""

from .errors import InputError, LatticeError, ResourceCapError
from .quantaloid import FiniteLattice, OneCell, Quantaloid, validate_quantaloid, op_quantaloid
from .enriched import (
    VCategory,
    VFunctor,
    VDistributor,
    Presheaf,
    Copresheaf,
    Weight,
    star_category,
    identity_distributor,
    restrict,
    compose_dist,
    lift_dist,
    ext_dist,
    companion,
    conjoint,
    weighted_colimit,
    weighted_limit,
)
from .completion import (
    ALL,
    CAUCHY,
    LEFT_ADJOINTS,
    REPRESENTABLES,
    WeightClass,
    PresheafClass,
    enumerate_presheaves,
    presheaf_object,
    colimit_closure,
    cocompletion,
    cauchy_completion,
    completion,
    is_left_adjoint_presheaf,
)

__version__ = "0.1.0"
