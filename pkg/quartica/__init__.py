"""quartica - exact computations on plane quartics, their bitangents and line arrangements"""

from .arrangement import ProjLine, ProjPoint, incidence, incidence_table
from .config import EngineConfig
from .errors import CheckFailure, InputError, QuarticaError
from .methods import RankMethod
from .milnor import analyze, classify, mdr, minimal_resolution, total_tjurina
from .numberfield import FieldElement, NumberField
from .polyring import HomPoly, restrict_to_line, squarefree_pattern
from .tangency import classify_arrangement, classify_line, verify_bitangent_set

__version__ = "0.1.0"
__all__ = [
    "EngineConfig",
    "RankMethod",
    "QuarticaError",
    "InputError",
    "CheckFailure",
    "NumberField",
    "FieldElement",
    "HomPoly",
    "restrict_to_line",
    "squarefree_pattern",
    "ProjLine",
    "ProjPoint",
    "incidence",
    "incidence_table",
    "classify_line",
    "classify_arrangement",
    "verify_bitangent_set",
    "analyze",
    "classify",
    "mdr",
    "minimal_resolution",
    "total_tjurina",
]
