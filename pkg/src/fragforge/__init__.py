"""fragforge: a file-backed catalog of classified method fragments."""

from fragforge.bibliography import Publication, parse_bibtex, referenced_keys, resolve_key
from fragforge.constraints import BOOTSTRAP, STRICT, Profile, ValidationFinding, rule_catalog, validate
from fragforge.model import (
    CharacterizationDimension,
    CharacterizationMethod,
    CharacterizationProperty,
    DimensionClass,
    DimensionValue,
    DocumentKind,
    DocumentRecord,
    FragmentKind,
    Library,
    MethodFragment,
    Modality,
    Motivation,
    Relation,
    add_dimension,
    add_document,
    add_fragment,
    attach_property,
    fragment_kind_of,
    new_library,
)
from fragforge.query import coverage_report, cramers_v, eval_query, orthogonality_report, parse_query
from fragforge.store import load_library, save_library
from fragforge.taxonomy import seed_taxonomy

__version__ = "0.1.0"
