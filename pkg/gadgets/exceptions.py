class GadgetError(Exception):
    """Base class for failures while building Schoenhardt frames, chains and cupolas"""


class NotSchonhardt(GadgetError):
    pass


# Vertex-edge chains
class NotAFacetPair(GadgetError):
    pass


class PlaneDoesNotSeparate(GadgetError):
    pass


# Visibility cones
class EmptySight(GadgetError):
    """No vertex of the polytope lies on the sight plane outside the facet"""


class PlaneMissesFacetInterior(GadgetError):
    pass


class SightOutsideFacet(GadgetError):
    """The sight set cannot be enclosed by a wedge anchored inside the facet"""


# Cupolas
class ConeMissesFacet(GadgetError):
    pass


class LineMissesFacet(GadgetError):
    pass


class ApexNotInCone(GadgetError):
    pass
