"""The seeded classification scheme: 20 characterization dimensions.

Value descriptions and characterization-method texts are editorial
placeholders written for this library template; curators are expected to
replace them once dimension description documents are written.

``fragforge init`` writes this seed out as ordinary dimension files, so after
initialization the scheme is data that can be edited like any other record.
"""

from __future__ import annotations

from dataclasses import dataclass

from fragforge.bibliography import Publication
from fragforge.errors import UnknownValue
from fragforge.model import (
    CharacterizationDimension,
    CharacterizationMethod,
    DimensionClass,
    DimensionValue,
    DocumentKind,
    DocumentRecord,
    FragmentKind,
)

SEED_SCHEME_KEY = "wsml-seed-scheme"

# every seeded dimension is mandatory for techniques; these three for every kind
BASELINE_DIMENSIONS = ("modeling-purpose", "semantic-force", "type-of-information")

_LANKHORST = "2005-Lankhorst-ArchiMate"
_PROPER_CA = "2005-Proper-CommunicatingArchitecture"
_GREEFHORST = "2003-Greefhorst-Frameworks"
_TAPSCOTT = "1993-Tapscott-ParadigmShift"
_ISO_QUALITY = "1991-ISO-Quality"
_ISO_KSP = "1996-ISO-KSP"
_FRANCKSON = "1999-Franckson-ISPL-Deliverables"
_PROPER_LSM = "1999-Proper-ISPL-LSM"

_ORDINAL = (
    ("low", "Low", "Little of this quality is made explicit in the produced models."),
    ("medium", "Medium", "The quality is partially made explicit."),
    ("high", "High", "The quality is made explicit to a large degree."),
)

# (id, name, class, [(value id, label, description)], method text, cites, multi_valued)
_SEED = [
    (
        "modeling-purpose", "Modeling purpose", "why",
        [
            ("designing", "Designing", "Models meant to support design work from first sketch to detailed design."),
            ("deciding", "Deciding", "Models meant to give decision makers insight into consequences of choices."),
            ("informing", "Informing", "Models meant to make stakeholders understand and commit to a domain."),
        ],
        "Identify the primary use the method's models are put to, using the three purposes "
        "of the ArchiMate viewpoint classification. Classify by the audience action the model "
        "is expected to trigger.",
        [_LANKHORST], False,
    ),
    (
        "design-chain", "Design chain", "why",
        [
            ("system-purpose", "System purpose", "Why the work system is needed."),
            ("system-functionality", "System functionality", "What the work system offers its environment."),
            ("system-design", "System design", "How the functionality is realized."),
            ("system-quality", "System quality", "How well the functionality must be realized."),
            ("system-costs", "System costs", "What building and running the work system may cost."),
        ],
        "Determine which question about the work system the models answer, and place the "
        "method at the matching link of the design chain.",
        [_PROPER_CA], False,
    ),
    (
        "intended-audience", "Intended audience", "why",
        [
            ("actor-in-future-system", "Actor in future system", "A human actor who will work in the future system."),
            ("sponsor", "Sponsor", "Whoever sponsors the system or its development."),
            ("designer", "Designer", "Designers of the system."),
            ("analyst", "Analyst", "Analysts of the domain the system operates in."),
            ("engineer", "Engineer", "Engineers building the actual system."),
        ],
        "Name the stakeholder group the method's models are written for, based on who is "
        "expected to read and act on them.",
        [_GREEFHORST], False,
    ),
    (
        "semantic-force", "Semantic force", "what",
        [
            ("prescriptive", "Prescriptive", "Models that constrain later design freedom."),
            ("descriptive", "Descriptive", "Models that record how things are or will be."),
            ("mixed", "Mixed", "Models combining prescriptive and descriptive statements."),
        ],
        "Check whether later designers are bound to conform to the produced models; if only "
        "some statements bind, classify as mixed.",
        [], False,
    ),
    (
        "nature-of-information", "Nature of the information", "what",
        [
            ("policy", "Policy", "Policy statements concerning the system."),
            ("principles", "Principles", "Principles the system design adheres to."),
            ("guidelines", "Guidelines", "Operational guidelines derived from principles."),
            ("descriptions", "Descriptions", "Descriptions of what the system looks like."),
            ("standards", "Standards", "Standards used when creating the system."),
        ],
        "Classify the dominant kind of statement found in the produced models.",
        [_GREEFHORST], False,
    ),
    (
        "type-of-information", "Type of information", "what",
        [
            ("business", "Business", "Business models, markets and products."),
            ("organization", "Organization", "Processes, structures, culture and skills."),
            ("information", "Information", "Information and knowledge needed by the business."),
            ("application", "Application", "Automated support of work."),
            ("infrastructure", "Infrastructure", "The technology underneath applications."),
        ],
        "Classify the architecture layer the modeled content belongs to. Frameworks with "
        "their own layering are mapped onto these five values.",
        [_TAPSCOTT, _LANKHORST], False,
    ),
    (
        "systemic-scope", "Systemic scope", "what",
        [
            ("use-case", "Use-case", "A single use-case of the work system."),
            ("system-component", "System component", "One component of a work system."),
            ("system", "System", "A whole work system and its direct environment."),
            ("system-of-systems", "System of systems", "A set of cooperating work systems."),
        ],
        "Determine the widest scope a single model of the method is meant to cover.",
        [], False,
    ),
    (
        "temporal-scope", "Temporal scope", "what",
        [
            ("operational", "Operational", "The system as it runs now or shortly."),
            ("tactical", "Tactical", "The system after one development project."),
            ("strategical", "Strategical", "The system after a program of projects."),
        ],
        "Determine the time horizon the modeled situation refers to.",
        [], False,
    ),
    (
        "implementation-abstraction", "Implementation abstraction", "what",
        [
            ("computing-independent", "Computing independent", "No computerization decisions are made."),
            ("platform-independent", "Platform independent", "Computerization is decided, platform is not."),
            ("platform-specific", "Platform specific", "Bound to a specific technological platform."),
        ],
        "Place the models on the model-driven architecture abstraction levels by checking "
        "which technology decisions they presuppose.",
        [], False,
    ),
    (
        "systemic-aggregation", "Systemic aggregation", "what",
        [
            ("detailed", "Detailed level", "All relevant details are shown."),
            ("coherence", "Coherence level", "Relations between aspects are the focus."),
            ("overview", "Overview level", "Only the key issues are shown."),
        ],
        "Determine how much detail the models hide, using the three aggregation levels.",
        [_LANKHORST], False,
    ),
    (
        "system-qualities", "System qualities", "what",
        [
            ("efficiency", "Efficiency", "Resource use relative to performance."),
            ("functionality", "Functionality", "Presence of the required functions."),
            ("reliability", "Reliability", "Ability to keep performing over time."),
            ("maintainability", "Maintainability", "Effort needed to make modifications."),
            ("portability", "Portability", "Ability to move to another environment."),
            ("usability", "Usability", "Effort needed to use the system."),
        ],
        "Identify which quality attributes of the ISO quality model the models address.",
        [_ISO_QUALITY, _ISO_KSP], False,
    ),
    (
        "system-realization", "System realization", "what",
        [
            ("using-system", "Using system", "How the environment uses the work system."),
            ("supporting-system", "Supporting system", "How the work system delivers its services."),
            ("infrastructure-system", "Infrastructure system", "Facilities the work system relies on."),
        ],
        "Determine which layer of service realization the models describe.",
        [], False,
    ),
    (
        "actor-kinds", "Actor kinds", "what",
        [
            ("heterogenous", "Heterogenous", "Composed actors of mixed nature."),
            ("human", "Human", "People acting in the work system."),
            ("computerised-intelligence", "Computerised intelligence", "Software agents with intelligent behavior."),
            ("computerised", "Computerised", "Conventional software components."),
        ],
        "Determine which kind of actor inside the system the modeling concentrates on.",
        [], False,
    ),
    (
        "formality", "Level of formality", "what", list(_ORDINAL),
        "Rate how far the representation language has mathematically defined semantics.",
        [_FRANCKSON, _PROPER_LSM], False,
    ),
    (
        "quantifiability", "Level of quantifiability", "what", list(_ORDINAL),
        "Rate how far aspects such as volume, workload or duration are quantified.",
        [_FRANCKSON, _PROPER_LSM], False,
    ),
    (
        "executability", "Level of executability", "what", list(_ORDINAL),
        "Rate how far the represented behavior can be simulated, prototyped or executed.",
        [_FRANCKSON, _PROPER_LSM], False,
    ),
    (
        "comprehensibility", "Level of comprehensibility", "what", list(_ORDINAL),
        "Rate how accessible the representation is to its intended audience.",
        [_FRANCKSON, _PROPER_LSM], False,
    ),
    (
        "completeness", "Level of completeness", "what", list(_ORDINAL),
        "Rate how completely the representation covers the knowledge topic it addresses.",
        [_FRANCKSON, _PROPER_LSM], False,
    ),
    (
        "cognitive-approach", "Cognitive approach", "how",
        [
            ("analytical", "Analytical approach", "Complexity is reduced through abstraction."),
            ("experimental", "Experimental approach", "Uncertainty is reduced through experiments and prototypes."),
        ],
        "Determine how information is processed to reach design decisions. Both values may "
        "apply to one fragment.",
        [_FRANCKSON, _PROPER_LSM], True,
    ),
    (
        "social-approach", "Social approach", "how",
        [
            ("expert-driven", "Expert-driven", "Experts produce descriptions and submit them for approval."),
            ("participatory", "Participatory", "Descriptions are produced together with business actors."),
        ],
        "Determine how project actors and business actors cooperate while models are made.",
        [_FRANCKSON, _PROPER_LSM], False,
    ),
]


@dataclass(frozen=True)
class SeedSet:
    dimensions: tuple[CharacterizationDimension, ...]
    documents: tuple[DocumentRecord, ...] = ()
    publications: tuple[Publication, ...] = ()


def _mandatory_for(dim_id: str) -> frozenset[FragmentKind]:
    if dim_id in BASELINE_DIMENSIONS:
        return frozenset(FragmentKind)
    return frozenset({FragmentKind.WAY_OF_MODELING})


def _stub(key: str) -> Publication:
    year, author = key.split("-")[:2]
    return Publication(
        key,
        "misc",
        {"author": author, "year": year, "note": "Seed reference; publication details to be completed."},
    )


def seed_taxonomy() -> SeedSet:
    """Build the seed scheme.

    Besides the 20 dimensions, the seed carries one dimension-description
    document per dimension and stub bibliography entries for every cited key,
    so a freshly seeded library is referentially complete.
    """
    dims = []
    docs = []
    cited: list[str] = []
    for dim_id, name, klass, values, method, cites, multi in _SEED:
        dims.append(
            CharacterizationDimension(
                id=dim_id,
                name=name,
                dimension_class=DimensionClass(klass),
                values=tuple(DimensionValue(*v) for v in values),
                method=CharacterizationMethod(method, tuple(cites)),
                mandatory_for=_mandatory_for(dim_id),
                multi_valued=multi,
            )
        )
        docs.append(
            DocumentRecord(
                id=f"{dim_id}-description",
                kind=DocumentKind.DIMENSION_DESCRIPTION,
                bibkey=SEED_SCHEME_KEY,
                target=dim_id,
            )
        )
        cited.extend(k for k in cites if k not in cited)
    pubs = [
        Publication(
            SEED_SCHEME_KEY,
            "misc",
            {
                "title": "Seeded characterization scheme",
                "note": "Editorial dimension descriptions shipped with the library template.",
            },
        )
    ]
    pubs.extend(_stub(k) for k in sorted(cited))
    return SeedSet(tuple(dims), tuple(docs), tuple(pubs))


def lookup_value(dim: CharacterizationDimension, value: str) -> DimensionValue:
    for v in dim.values:
        if v.id == value:
            return v
    raise UnknownValue(f"{value!r} is not a value of dimension {dim.id!r}")


def dimensions_of_class(seed: SeedSet, klass: DimensionClass | str) -> list[str]:
    klass = DimensionClass(klass)
    return [d.id for d in seed.dimensions if d.dimension_class is klass]
