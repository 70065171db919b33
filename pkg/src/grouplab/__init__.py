"""grouplab: bounded computations with free groups, elementary splittings,
centralizer extensions, NTQ systems, Hom-diagrams and marked groups."""

from .errors import GroupLabError
from .groups import FreeAbelianGroup, FreeGroup, Group
from .verdict import Status, Verdict, combine
from .words import Alphabet, GeneratorMap, Word, apply_map, parse_map, parse_word

__all__ = [
    "Alphabet",
    "FreeAbelianGroup",
    "FreeGroup",
    "GeneratorMap",
    "Group",
    "GroupLabError",
    "Status",
    "Verdict",
    "Word",
    "apply_map",
    "combine",
    "parse_map",
    "parse_word",
]

__version__ = "0.1.0"
