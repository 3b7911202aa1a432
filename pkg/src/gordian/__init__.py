"""Site-specific Gordian distances: diagrams, Bing-double tree links and certificates."""
from .diagram import Diagram, Crossing, GraphVertex, DiagramError, parse_pd, serialize_pd, validate

__all__ = ["Diagram", "Crossing", "GraphVertex", "DiagramError", "parse_pd", "serialize_pd", "validate"]
__version__ = "0.1.0"
