"""Exact workbench for Lie superalgebras defined by Cartan matrices
over prime fields.

The pipeline: a CartanSpec (matrix plus parities over GF(p)) builds to
an AlgebraModel with its root system and superdimension; odd reflections
walk between inequivalent Cartan matrices of the same algebra; relation
sets are generated, verified, and discovered degree by degree.
"""

from .cartan import (
    EVEN,
    ODD,
    CartanSpec,
    DynkinGraph,
    EquivalenceWitness,
    UnknownId,
    UnsupportedDiagonal,
    canonical_form,
    canonical_key,
    cartan_from_dict,
    cartan_spec,
    cartan_to_dict,
    equivalent,
    invert_mod_p,
    load_cartan_file,
    registry,
    registry_ids,
    render_ascii,
    render_dot,
    to_dynkin,
)
from .contragredient import (
    DEFAULT_MAX_HEIGHT,
    AlgebraModel,
    Element,
    NonTerminated,
    NoUniqueMaximum,
    RootDatum,
    SingularCartanMatrix,
    Superdimension,
    build,
    evaluate_bracket,
    weight_of,
)
from .expr import (
    Bracket,
    BracketExpr,
    Generator,
    IndexOutOfRange,
    MixedWeight,
    RelationSyntaxError,
    Scaled,
    Sum,
    multidegree,
    parse,
    to_text,
)
from .fp import FpMatrix, SingularMatrix, inv_scalar, is_prime, signed_lift
from .reflections import (
    NotIsotropic,
    OrbitGraph,
    ReflectionTable,
    odd_reflect,
    orbit,
    reflection_table,
    registry_numbered_table,
    render_orbit_dot,
    render_table_text,
)
from .relations import (
    DISCOVERY_HEIGHT_LIMIT,
    DiscoveryRecord,
    DiscoveryReport,
    HeightLimitExceeded,
    RelationSet,
    VerificationRecord,
    VerificationReport,
    corpus_ids,
    discover,
    discovery_report,
    expr_to_tensor,
    load_relation_file,
    paper_relations,
    relation_source,
    relations_from_text,
    serre_relations,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "EVEN",
    "ODD",
    "CartanSpec",
    "DynkinGraph",
    "EquivalenceWitness",
    "UnknownId",
    "UnsupportedDiagonal",
    "canonical_form",
    "canonical_key",
    "cartan_from_dict",
    "cartan_spec",
    "cartan_to_dict",
    "equivalent",
    "invert_mod_p",
    "load_cartan_file",
    "registry",
    "registry_ids",
    "render_ascii",
    "render_dot",
    "to_dynkin",
    "DEFAULT_MAX_HEIGHT",
    "AlgebraModel",
    "Element",
    "NonTerminated",
    "NoUniqueMaximum",
    "RootDatum",
    "SingularCartanMatrix",
    "Superdimension",
    "build",
    "evaluate_bracket",
    "weight_of",
    "Bracket",
    "BracketExpr",
    "Generator",
    "IndexOutOfRange",
    "MixedWeight",
    "RelationSyntaxError",
    "Scaled",
    "Sum",
    "multidegree",
    "parse",
    "to_text",
    "FpMatrix",
    "SingularMatrix",
    "inv_scalar",
    "is_prime",
    "signed_lift",
    "NotIsotropic",
    "OrbitGraph",
    "ReflectionTable",
    "odd_reflect",
    "orbit",
    "reflection_table",
    "registry_numbered_table",
    "render_orbit_dot",
    "render_table_text",
    "DISCOVERY_HEIGHT_LIMIT",
    "DiscoveryRecord",
    "DiscoveryReport",
    "HeightLimitExceeded",
    "RelationSet",
    "VerificationRecord",
    "VerificationReport",
    "corpus_ids",
    "discover",
    "discovery_report",
    "expr_to_tensor",
    "load_relation_file",
    "paper_relations",
    "relation_source",
    "relations_from_text",
    "serre_relations",
    "verify",
    "__version__",
]
